#include "cgan/risk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"
#include "cgan/stats.hpp"

namespace cgan::risk {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("risk: level must lie in (0, 1)");
}

double tail_mean(std::span<const double> values, double threshold) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (v <= threshold) {
      sum += v;
      ++count;
    }
  }
  if (count == 0) throw DomainError("risk: empty tail");
  return sum / static_cast<double>(count);
}

Matrix flatten_condition(const Matrix& condition) {
  Matrix row(1, condition.size());
  std::copy(condition.data(), condition.data() + condition.size(), row.data());
  return row;
}

std::size_t target_quarters(const GanSpec& gan, const Matrix& condition) {
  const auto series = static_cast<std::size_t>(condition.cols());
  if (series == 0 || condition.rows() == 0) throw ShapeError("forecast: empty condition slice");
  if (static_cast<std::size_t>(condition.size()) != gan.condition_dim) {
    throw ShapeError("forecast: condition slice has " + std::to_string(condition.size()) +
                     " values, generator expects " + std::to_string(gan.condition_dim));
  }
  if (gan.data_dim() % series != 0) {
    throw ShapeError("forecast: generator output is not a whole number of quarters");
  }
  return gan.data_dim() / series;
}

Matrix mean_of_rows(const Matrix& draws, std::size_t quarters, std::size_t series) {
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  Matrix out(static_cast<Eigen::Index>(quarters), static_cast<Eigen::Index>(series));
  std::copy(mean.data(), mean.data() + mean.size(), out.data());
  return out;
}

}  // namespace

std::vector<double> pnl_from_returns(const Matrix& returns, const Portfolio& portfolio) {
  if (static_cast<std::size_t>(returns.cols()) != portfolio.positions.size()) {
    throw ShapeError("pnl_from_returns: " + std::to_string(returns.cols()) + " return columns vs " +
                     std::to_string(portfolio.positions.size()) + " positions");
  }
  const Eigen::Map<const Vector> pos(portfolio.positions.data(),
                                     static_cast<Eigen::Index>(portfolio.positions.size()));
  const Vector pnl = returns * pos;
  return {pnl.data(), pnl.data() + pnl.size()};
}

RiskReport hs_var_es(std::span<const double> pnl, double level) {
  check_level(level);
  if (pnl.empty()) throw DomainError("hs_var_es: empty PnL sample");
  RiskReport r;
  r.level = level;
  r.sample_size = pnl.size();
  r.var = stats::empirical_quantile(pnl, 1.0 - level);
  r.es = tail_mean(pnl, r.var);
  return r;
}

RiskReport cgan_var_es(const GanSpec& gan, const CganRiskRequest& request,
                       const Portfolio& portfolio, Rng& rng) {
  if (request.scale < 1) throw DomainError("cgan_var_es: scale must be at least 1");
  if (request.original_count == 0) throw DomainError("cgan_var_es: original_count must be positive");
  const std::size_t n = request.scale * request.original_count;
  const Matrix draws = generate(gan, n, request.condition, rng);
  const Matrix returns = request.to_returns ? request.to_returns(draws) : draws;
  const auto pnl = pnl_from_returns(returns, portfolio);
  return hs_var_es(pnl, request.level);
}

BacktestResult backtest(const RiskReport& report, std::span<const double> realized_pnl) {
  if (realized_pnl.empty()) throw DomainError("backtest: empty realized PnL");
  check_level(report.level);
  BacktestResult b;
  b.days = realized_pnl.size();
  b.breaches = static_cast<std::size_t>(
      std::count_if(realized_pnl.begin(), realized_pnl.end(), [&](double v) { return v < report.var; }));
  // days - level * days avoids the rounding in (1 - level) for levels like 0.99.
  b.expected_breaches = static_cast<double>(b.days) - report.level * static_cast<double>(b.days);
  const double q = stats::empirical_quantile(realized_pnl, 1.0 - report.level);
  b.realized_es = tail_mean(realized_pnl, q);
  b.model_var = report.var;
  b.model_es = report.es;
  return b;
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
  out << "method,period,var,es,breaches,expected\n";
  for (const auto& row : rows) {
    out << row.method << ',' << row.period << ',' << format_double(row.report.var) << ','
        << format_double(row.report.es) << ',';
    if (row.backtest) {
      out << row.backtest->breaches << ',' << format_double(row.backtest->expected_breaches);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

Matrix ForecastFan::mean_path() const {
  if (paths.empty()) throw DomainError("ForecastFan: no paths");
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(quarters), static_cast<Eigen::Index>(series));
  for (const auto& p : paths) sum += p;
  return sum / static_cast<double>(paths.size());
}

Matrix ForecastFan::quantile_path(double p) const {
  if (paths.empty()) throw DomainError("ForecastFan: no paths");
  Matrix out(static_cast<Eigen::Index>(quarters), static_cast<Eigen::Index>(series));
  std::vector<double> cell(paths.size());
  for (Eigen::Index q = 0; q < out.rows(); ++q) {
    for (Eigen::Index s = 0; s < out.cols(); ++s) {
      for (std::size_t k = 0; k < paths.size(); ++k) cell[k] = paths[k](q, s);
      out(q, s) = stats::empirical_quantile(cell, p);
    }
  }
  return out;
}

void ForecastFan::write_csv(std::ostream& out, std::span<const std::string> series_names) const {
  if (series_names.size() != series) throw ShapeError("ForecastFan::write_csv: name count mismatch");
  CsvWriter w(out);
  std::vector<std::string> header{"path", "quarter"};
  header.insert(header.end(), series_names.begin(), series_names.end());
  w.header(header);
  std::vector<double> row(series + 2);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (std::size_t q = 0; q < quarters; ++q) {
      row[0] = static_cast<double>(k);
      row[1] = static_cast<double>(q + 1);
      for (std::size_t s = 0; s < series; ++s) {
        row[s + 2] = paths[k](static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(s));
      }
      w.row(row);
    }
  }
}

ForecastFan forecast_paths(const GanSpec& gan, const Matrix& condition, std::size_t n_paths,
                           Rng& rng) {
  const std::size_t quarters = target_quarters(gan, condition);
  const auto series = static_cast<std::size_t>(condition.cols());
  const Matrix draws = generate(gan, n_paths, flatten_condition(condition), rng);
  ForecastFan fan;
  fan.quarters = quarters;
  fan.series = series;
  fan.paths.reserve(n_paths);
  for (Eigen::Index k = 0; k < draws.rows(); ++k) {
    Matrix path(static_cast<Eigen::Index>(quarters), static_cast<Eigen::Index>(series));
    std::copy(draws.row(k).data(), draws.row(k).data() + draws.cols(), path.data());
    fan.paths.push_back(std::move(path));
  }
  return fan;
}

void ShockReport::write_csv(std::ostream& out, std::span<const std::string> series_names) const {
  if (static_cast<Eigen::Index>(series_names.size()) != baseline_mean.cols()) {
    throw ShapeError("ShockReport::write_csv: name count mismatch");
  }
  CsvWriter w(out);
  std::vector<std::string> header{"quarter"};
  for (const auto& n : series_names) header.push_back("baseline_" + n);
  for (const auto& n : series_names) header.push_back("shocked_" + n);
  w.header(header);
  std::vector<double> row;
  for (Eigen::Index q = 0; q < baseline_mean.rows(); ++q) {
    row.assign(1, static_cast<double>(q + 1));
    for (Eigen::Index s = 0; s < baseline_mean.cols(); ++s) row.push_back(baseline_mean(q, s));
    for (Eigen::Index s = 0; s < shocked_mean.cols(); ++s) row.push_back(shocked_mean(q, s));
    w.row(row);
  }
}

ShockReport shock_analysis(const GanSpec& gan, const Matrix& condition, std::size_t variable,
                           double shock_sd, std::size_t n_paths, Rng& rng) {
  if (variable >= static_cast<std::size_t>(condition.cols())) {
    throw DomainError("shock_analysis: variable index " + std::to_string(variable) +
                      " out of range");
  }
  if (n_paths == 0) throw DomainError("shock_analysis: n_paths must be positive");
  const std::size_t quarters = target_quarters(gan, condition);
  const auto series = static_cast<std::size_t>(condition.cols());

  Matrix shocked = condition;
  shocked(condition.rows() - 1, static_cast<Eigen::Index>(variable)) += shock_sd;

  const Matrix noise = sample_noise(n_paths, gan, rng);
  const Matrix base_draws = generate_with_noise(gan, noise, flatten_condition(condition));
  const Matrix shock_draws = generate_with_noise(gan, noise, flatten_condition(shocked));

  ShockReport r;
  r.baseline_mean = mean_of_rows(base_draws, quarters, series);
  r.shocked_mean = mean_of_rows(shock_draws, quarters, series);
  r.variable = variable;
  r.shock_sd = shock_sd;
  r.quarter = static_cast<std::size_t>(condition.rows() - 1);
  return r;
}

}  // namespace cgan::risk
