#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cgan/model.hpp"
#include "cgan/prep.hpp"
#include "cgan/risk.hpp"
#include "cgan/stats.hpp"
#include "cgan/synth.hpp"

// End-to-end experiment pipelines shared by the scenario runner and the
// acceptance checks. Each takes explicit options and returns its raw results;
// writing files is left to the caller.
namespace cgan::studies {

// ---------------------------------------------------------------------------
// Conditional moment comparison

struct MomentPoint {
  std::size_t condition = 0;
  std::size_t series = 0;
  stats::MomentSummary truth;
  stats::MomentSummary generated;
  double qq_slope = 0.0;
  double qq_r_squared = 0.0;
};

struct SeriesScatterSummary {
  stats::LinearFit mean_fit;      // generated means on true means
  stats::LinearFit variance_fit;  // generated variances on true variances
  double positive_kurtosis_share = 0.0;
  double median_qq_slope = 0.0;
  double median_qq_r_squared = 0.0;
};

struct MomentScatter {
  std::size_t series = 0;
  Matrix conditions;  // one row per condition, original units
  std::vector<MomentPoint> points;

  SeriesScatterSummary summary(std::size_t series_index) const;
  /// Columns: condition, series, true/gen mean, variance, skewness, kurtosis, qq_slope, qq_r2.
  void write_csv(std::ostream& out) const;
};

/// Draws from a conditional distribution given one condition row.
using ConditionalSampler = std::function<Matrix(const Matrix& condition, std::size_t n, Rng& rng)>;

/// For each condition row compares `draws` generated and true samples by
/// moments and a QQ regression (generated quantiles on true quantiles).
MomentScatter moment_scatter(const Matrix& conditions, const ConditionalSampler& generated,
                             const ConditionalSampler& truth, std::size_t draws,
                             std::size_t qq_points, std::uint64_t seed);

/// `count` rows of `pool` chosen uniformly with replacement.
Matrix pick_rows(const Matrix& pool, std::size_t count, Rng& rng);

// ---------------------------------------------------------------------------
// Inverse CDF

struct InverseCdfOptions {
  GanSetup setup;  // unconditional variant, hidden layers, noise width
  std::size_t samples = 10000;
  std::size_t eval_samples = 10000;
  std::size_t track_samples = 2000;
  std::uint64_t seed = 1;
};

struct InverseCdfResult {
  TrainResult trained;
  Matrix noise;      // eval_samples x noise_dim
  Matrix generated;  // eval_samples x 1
  std::vector<double> training_data;
  double ks = 0.0;  // generated vs the N(0,1) CDF
  std::optional<std::vector<double>> knots;  // one-hidden-layer scalar-noise nets only
};

/// Learns N(0,1) from noise; tracks the KS distance at each checkpoint.
InverseCdfResult inverse_cdf_study(const InverseCdfOptions& opts);

// ---------------------------------------------------------------------------
// Gaussian mixtures

struct MixtureCategoricalOptions {
  GanSetup setup;
  std::size_t per_cluster = 1000;
  std::size_t eval_per_cluster = 1000;
  std::size_t kde_folds = 5;
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

struct ClusterComparison {
  Matrix real;
  Matrix cgan;
  Matrix kde;
  double bandwidth = 0.0;
  std::array<stats::QqResult, 2> qq_cgan;  // per coordinate, vs real
  std::array<stats::QqResult, 2> qq_kde;
};

struct MixtureCategoricalResult {
  TrainResult trained;
  std::vector<ClusterComparison> clusters;
};

/// CGAN on one-hot cluster labels, benchmarked per cluster against a
/// cross-validated Gaussian KDE.
MixtureCategoricalResult mixture_categorical_study(const MixtureCategoricalOptions& opts);

struct MixtureIntegerOptions {
  GanSetup setup;
  std::size_t per_cluster = 1000;
  double condition_scale = 1.0;  // the integer label is multiplied by this
  std::vector<double> eval_labels{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::size_t eval_per_label = 1000;
  std::uint64_t seed = 1;
};

struct LabelDraws {
  double label = 0.0;
  Matrix samples;
};

struct MixtureIntegerResult {
  TrainResult trained;
  synth::LabeledSamples data;
  std::vector<LabelDraws> draws;
};

/// CGAN on the raw (scaled) label; fractional labels interpolate between clusters.
MixtureIntegerResult mixture_integer_study(const MixtureIntegerOptions& opts);

struct ContinuousConditionResult {
  TrainResult trained;
  synth::ConditionedSamples full;     // the complete data set
  synth::ConditionedSamples training;  // what the CGAN saw
  Matrix generated;                    // one draw per full-data condition
  std::array<stats::QqResult, 2> qq;   // generated vs full data, per coordinate
  std::optional<synth::ConditionedSamples> extrapolation_truth;
  std::optional<Matrix> extrapolated;
};

struct CircleOptions {
  GanSetup setup;
  std::size_t points = 1000;
  double radius = 2.0;
  double var_lo = 0.02;
  double var_hi = 0.5;
  double extrapolation_radius = 3.0;  // <= 0 disables the outer ring
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

/// Means on a circle are the conditions; variance grows anticlockwise.
ContinuousConditionResult circle_study(const CircleOptions& opts);

struct LineOptions {
  GanSetup setup;
  std::size_t points = 1000;
  double x_lo = -4.0;
  double x_hi = 4.0;
  double var_slope = 0.1;
  double base_var = 0.05;
  double clip_fraction = 0.2;
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

/// Trains on the middle of the line and generates at every original condition.
ContinuousConditionResult line_study(const LineOptions& opts);

// ---------------------------------------------------------------------------
// VAR(1)

struct ChainOptions {
  GanSetup setup;
  synth::VarSpec spec = synth::var1_constant_spec();
  std::size_t samples = 5000;
  std::size_t chain_length = 20000;
  std::size_t track_chain_length = 4000;
  std::uint64_t seed = 1;
};

struct ChainResult {
  TrainResult trained;
  std::vector<double> lag1;     // per series, final generator on the full chain
  std::vector<double> lag2;
  std::vector<double> target1;  // a^3 per series
  std::vector<double> target2;  // a^4 per series
};

/// Lag-1 conditioned CGAN; B_t = G(z_t, A_t) along a real path A gives
/// autocorrelations a^3 (lag 1) and a^4 (lag 2) when the dependence is learned.
ChainResult chain_study(const ChainOptions& opts);

struct VarScatterOptions {
  GanSetup setup;
  synth::VarSpec spec = synth::var1_sum_abs_spec();
  std::size_t samples = 1000;
  std::size_t conditions = 500;
  std::size_t draws = 10000;
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

struct VarScatterResult {
  TrainResult trained;
  ScaledGenerator model;
  MomentScatter scatter;
};

/// Lag-1 conditioned CGAN compared with the exact conditional law at
/// conditions drawn from the training path.
VarScatterResult var_scatter_study(const VarScatterOptions& opts);

struct RegionContinuousOptions {
  GanSetup setup;
  std::size_t per_region = 10000;
  std::size_t conditions_per_region = 500;
  std::size_t draws = 10000;
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

struct RegionContinuousResult {
  TrainResult trained;
  std::vector<MomentScatter> regions;
};

/// One lag-1 conditioned CGAN over both regions; pairs straddling the switch are dropped.
RegionContinuousResult region_continuous_study(const RegionContinuousOptions& opts);

struct RegionCategoricalOptions {
  GanSetup setup;
  std::size_t per_region = 5000;
  std::size_t track_samples = 5000;
  std::size_t eval_samples = 5000;
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

struct RegionCategoricalResult {
  TrainResult trained;
  std::vector<stats::DependencyStats> training_stats;  // per region
  std::vector<stats::DependencyStats> final_stats;     // per region, final generator
  std::vector<Matrix> real;       // per region window-2 panels, flattened, original units
  std::vector<Matrix> generated;  // same layout
  std::vector<std::array<stats::QqResult, 2>> qq;  // last time step, per series
};

/// Window-2 panels with a one-hot region condition; each region is
/// standardized on its own before training.
RegionCategoricalResult region_categorical_study(const RegionCategoricalOptions& opts);

// ---------------------------------------------------------------------------
// GARCH

enum class GarchConditioning { SigmaT, SigmaTMinus1 };

struct GarchOptions {
  GanSetup setup;
  synth::GarchSpec spec = synth::garch_study_spec();
  GarchConditioning conditioning = GarchConditioning::SigmaT;
  std::size_t samples = 10000;
  std::size_t conditions = 500;
  std::size_t draws = 10000;
  std::size_t qq_points = 99;
  std::uint64_t data_seed = 1;  // shared by compared models
  std::uint64_t eval_seed = 2;  // shared by compared models
  std::uint64_t train_seed = 3;
};

struct GarchResult {
  TrainResult trained;
  MomentScatter scatter;  // truth: X_t given the true sigma_t^2
  Matrix sigma2_t;        // per evaluated condition, the true sigma_t^2
  std::vector<double> variance_correlation;  // per series, generated variance vs sigma_t^2
};

GarchResult garch_study(const GarchOptions& opts);

// ---------------------------------------------------------------------------
// Equity VaR/ES

struct EquityData {
  std::vector<std::string> names;
  Matrix returns;           // all return rows, date order
  std::vector<int> period;  // 0 stressed, 1 normal, 2 backtest, -1 unused
};

struct EquityOptions {
  GanSetup setup;
  std::vector<double> positions{1.0, 1.0};
  std::size_t scale = 50;
  double level = 0.99;
  std::size_t track_samples = 2000;
  std::size_t qq_points = 99;
  std::uint64_t seed = 1;
};

struct EquityResult {
  TrainResult trained;
  std::vector<risk::ComparisonRow> rows;  // HS and CGAN per period, then backtests
  std::vector<Matrix> real;       // per period, last-step returns
  std::vector<Matrix> generated;  // per period, last-step returns from the CGAN draw
  std::vector<std::array<stats::QqResult, 2>> qq;
  std::vector<stats::DependencyStats> training_stats;
};

/// Period-conditioned CGAN on window-2 return panels; HS and CGAN VaR/ES per
/// period, and a breach backtest of the normal-period figures.
EquityResult equity_study(const EquityData& data, const EquityOptions& opts);

// ---------------------------------------------------------------------------
// Macro forecasting

struct MacroData {
  std::vector<std::string> names;
  Matrix levels;  // quarters x series, oldest first
  std::vector<prep::StationarityTransform> transforms;
};

struct MacroOptions {
  GanSetup setup;
  std::size_t window = 13;
  std::size_t condition_window = 4;
  std::size_t n_paths = 100;
  std::size_t shock_variable = 2;
  double shock_sd = 1.0;
  std::size_t tracked_series = 0;
  std::uint64_t seed = 1;
};

struct MacroResult {
  TrainResult trained;
  prep::ScaleParams scale;
  std::size_t panel_samples = 0;
  Matrix latest_condition;  // condition_window x series, standardized
  risk::ForecastFan fan;    // standardized units
  risk::ShockReport shock;  // standardized units
  std::vector<double> training_moments;  // tracked series: mean, sd, lag-1 autocorrelation
};

/// Standardized stationary series, sliding windows, the first quarters as
/// conditions and the rest as targets.
MacroResult macro_study(const MacroData& data, const MacroOptions& opts);

}  // namespace cgan::studies
