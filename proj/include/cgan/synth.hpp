#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cgan/types.hpp"

// Exact generators for the synthetic studies and their true-conditional oracles.
namespace cgan::synth {

/// Lower-triangular L with L * L^T == cov. Throws NumericError when `cov` is
/// not symmetric positive definite.
Matrix cholesky(const Matrix& cov);

/// Multivariate Student-t whose covariance (not scale matrix) is `cov`.
struct MvTSpec {
  Vector mean;
  Matrix cov;
  double df = 6.0;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
  void validate() const;
};

/// Draws mean + L' g sqrt(df / chi2_df), with L' the Cholesky factor of
/// cov (df - 2) / df, so that the sample covariance converges to spec.cov.
Matrix sample_mvt(const MvTSpec& spec, std::size_t n, Rng& rng);

enum class NoiseMode {
  Constant,           // eps ~ T(0, cov)
  SumAbsScale,        // eps ~ T(0, sum_i |x_{i,t-1}| * cov)
  PerSeriesAbsScale,  // eps ~ T(0, D cov D), D = diag(sqrt|x_{t-1}|)
};

struct VarSpec {
  Vector c;
  Vector a;  // diagonal AR coefficients
  MvTSpec noise;
  NoiseMode noise_mode = NoiseMode::Constant;

  std::size_t dim() const { return static_cast<std::size_t>(a.size()); }
  void validate() const;
};

inline constexpr std::size_t kDefaultBurnIn = 100;

/// X_t = c + a .* X_{t-1} + eps_t. The first `burn_in` steps are discarded.
Matrix simulate_var1(const VarSpec& spec, std::size_t n, Rng& rng,
                     std::size_t burn_in = kDefaultBurnIn);

struct RegionSpec {
  std::vector<std::pair<VarSpec, std::size_t>> regions;  // (process, sample count)
};

struct RegionSeries {
  Matrix series;
  std::vector<int> labels;  // region index per row
};

/// Concatenated VAR(1) segments, each restarted with its own burn-in.
RegionSeries simulate_region_switching(const RegionSpec& spec, Rng& rng,
                                       std::size_t burn_in = kDefaultBurnIn);

struct GarchSpec {
  Vector c;
  Vector a;
  Vector b;
  double df = 20.0;

  std::size_t dim() const { return static_cast<std::size_t>(c.size()); }
  void validate() const;
  /// c / (1 - a - b) per series.
  Vector unconditional_variance() const;
};

struct GarchSeries {
  Matrix x;       // X_t
  Matrix sigma2;  // sigma_t^2, the variance X_t was drawn with
};

/// sigma_t^2 = c + a X_{t-1}^2 + b sigma_{t-1}^2, X_t ~ T(0, diag(sigma_t^2), df).
/// Seeded at the unconditional variance.
GarchSeries simulate_garch(const GarchSpec& spec, std::size_t n, Rng& rng,
                           std::size_t burn_in = kDefaultBurnIn);

/// sigma_t^2 given X_{t-1} and sigma_{t-1}^2.
Vector garch_next_variance(const GarchSpec& spec, const Vector& x_prev, const Vector& sigma2_prev);

struct MixtureComponent {
  Vector mean;
  Matrix cov;
  std::size_t count = 0;
  int label = 0;
};

struct MixtureSpec {
  std::vector<MixtureComponent> components;
};

struct LabeledSamples {
  Matrix samples;
  std::vector<int> labels;
};

/// Exactly `count` draws per component, grouped in component order. A zero
/// covariance yields the mean.
LabeledSamples gaussian_mixture_clusters(const MixtureSpec& spec, Rng& rng);

/// The four-cluster layout used by the mixture scenarios.
MixtureSpec default_four_clusters(std::size_t per_cluster = 1000);

struct ConditionedSamples {
  Matrix samples;     // n x 2
  Matrix conditions;  // n x 2, the per-point means
  Vector variances;   // per-point isotropic variance
};

/// Means equally spaced by angle on a circle; variance increases linearly
/// from var_lo to var_hi anticlockwise.
ConditionedSamples circle_variance_dataset(std::size_t n_points, double radius, double var_lo,
                                           double var_hi, Rng& rng);

/// Means on the x-axis over [x_lo, x_hi]; variance = base_var + var_slope |x|.
ConditionedSamples line_variance_dataset(std::size_t n_points, double x_lo, double x_hi,
                                         double var_slope, double base_var, Rng& rng);

/// Drops the first and last `fraction` of rows (rounded down per end).
ConditionedSamples clip_ends(const ConditionedSamples& data, double fraction);

/// n i.i.d. draws of X_t given X_{t-1} = condition.
Matrix true_conditional_distribution(const VarSpec& spec, const Vector& condition, std::size_t n,
                                     Rng& rng);
/// n i.i.d. draws of X_t given sigma_t^2 = condition.
Matrix true_conditional_distribution(const GarchSpec& spec, const Vector& sigma2, std::size_t n,
                                     Rng& rng);

/// Noise covariance of a VAR spec evaluated at a previous state.
Matrix var_noise_cov(const VarSpec& spec, const Vector& x_prev);

// Parameter sets of the published studies.
VarSpec var1_constant_spec();      // c = 0, a = [0.8, 0.6], T(cov [[1,.5],[.5,1]], df 6)
VarSpec var1_sum_abs_spec();       // a = [0.8, 0.6], cov = sum|X_{t-1}| I, df 20
VarSpec var1_per_series_abs_spec();  // a = [0.8, 0.6], cov = diag|X_{t-1}|, df 20
RegionSpec two_region_spec(std::size_t per_region);
GarchSpec garch_study_spec();      // c = a = 0.3, b = 0.6, df 20

}  // namespace cgan::synth
