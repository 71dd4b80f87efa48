#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgan/gan.hpp"
#include "cgan/types.hpp"

// VaR/ES estimation, breach backtests, forecast fans and shock analysis.
namespace cgan::risk {

struct Portfolio {
  std::vector<double> positions;  // units held per instrument
};

/// pnl_t = sum_i positions_i * returns(t, i).
std::vector<double> pnl_from_returns(const Matrix& returns, const Portfolio& portfolio);

/// VaR is the signed PnL quantile at 1 - level (losses are negative).
struct RiskReport {
  double var = 0.0;
  double es = 0.0;
  double level = 0.0;
  std::size_t sample_size = 0;
};

/// VaR = empirical_quantile(pnl, 1 - level); ES = plain mean of pnl <= VaR.
RiskReport hs_var_es(std::span<const double> pnl, double level);

/// Maps generator output (in the generator's units) to instrument returns.
using ReturnMapper = std::function<Matrix(const Matrix&)>;

struct CganRiskRequest {
  std::optional<Matrix> condition;  // one row, broadcast; required for conditional variants
  std::size_t original_count = 0;   // historical sample size the draw is scaled from
  std::size_t scale = 50;
  double level = 0.99;
  ReturnMapper to_returns;  // identity when empty
};

/// Draws scale * original_count samples and applies hs_var_es to their PnL.
/// Draws are sequential, so a smaller scale sees a prefix of a larger one.
RiskReport cgan_var_es(const GanSpec& gan, const CganRiskRequest& request,
                       const Portfolio& portfolio, Rng& rng);

struct BacktestResult {
  std::size_t breaches = 0;
  std::size_t days = 0;
  double expected_breaches = 0.0;
  double realized_es = 0.0;
  double model_var = 0.0;
  double model_es = 0.0;
};

/// A breach is realized_t < report.var (strict).
BacktestResult backtest(const RiskReport& report, std::span<const double> realized_pnl);

/// One row of the method/period comparison table.
struct ComparisonRow {
  std::string method;
  std::string period;
  RiskReport report;
  std::optional<BacktestResult> backtest;
};

/// Columns: method, period, var, es, breaches, expected. Breach cells are
/// empty for rows without a backtest.
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);

/// Paths x (Quarters x Series) fan of conditional draws.
struct ForecastFan {
  std::size_t quarters = 0;
  std::size_t series = 0;
  std::vector<Matrix> paths;

  Matrix mean_path() const;
  /// Per-cell empirical quantile across paths.
  Matrix quantile_path(double p) const;
  /// Long format: path, quarter, one column per series.
  void write_csv(std::ostream& out, std::span<const std::string> series_names) const;
};

/// `condition` is a cond_window x series slice (time-major when flattened).
/// The generator output is unflattened into target quarters x series.
ForecastFan forecast_paths(const GanSpec& gan, const Matrix& condition, std::size_t n_paths,
                           Rng& rng);

struct ShockReport {
  Matrix baseline_mean;  // quarters x series
  Matrix shocked_mean;
  std::size_t variable = 0;
  double shock_sd = 0.0;
  std::size_t quarter = 0;  // index of the shocked condition quarter

  /// Columns: quarter, then baseline_<name> and shocked_<name> per series.
  void write_csv(std::ostream& out, std::span<const std::string> series_names) const;
};

/// Adds shock_sd to `variable` in the last condition quarter and compares mean
/// paths. Both runs share one noise draw, so shock_sd = 0 gives equal paths.
ShockReport shock_analysis(const GanSpec& gan, const Matrix& condition, std::size_t variable,
                           double shock_sd, std::size_t n_paths, Rng& rng);

}  // namespace cgan::risk
