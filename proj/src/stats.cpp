#include "cgan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"

namespace cgan::stats {

namespace {

// 1-indexed rank ceil(p n). The small slack absorbs representation error in p
// (0.05 * 100 must be 5, not 5.000000000000001).
std::size_t quantile_rank(double p, std::size_t n) {
  const double raw = p * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  return std::clamp<std::size_t>(k, 1, n);
}

double logsumexp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

MomentSummary moments(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4) throw DomainError("moments: need at least 4 samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (!(m2 > 0.0)) throw DomainError("moments: zero variance, skewness/kurtosis undefined");
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

std::vector<double> column(const Matrix& m, Eigen::Index col) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = m(i, col);
  return out;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeError("correlation: need equal lengths >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DomainError("correlation: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DependencyStats dependency_stats_pairs(const Matrix& current, const Matrix& lagged, Eigen::Index i,
                                       Eigen::Index j) {
  if (current.rows() != lagged.rows() || current.cols() != lagged.cols()) {
    throw ShapeError("dependency_stats: current and lagged blocks differ in shape");
  }
  if (current.rows() < 2) throw DomainError("dependency_stats: too few observations");
  if (i < 0 || j < 0 || i >= current.cols() || j >= current.cols()) {
    throw ShapeError("dependency_stats: series index out of range");
  }
  const auto xi = column(current, i);
  const auto xj = column(current, j);
  const auto li = column(lagged, i);
  const auto lj = column(lagged, j);
  auto sq = [](std::vector<double> v) {
    for (auto& x : v) x *= x;
    return v;
  };
  DependencyStats s;
  s.cor_t = correlation(xi, li);
  s.cor_s = correlation(xi, xj);
  s.cor_st = correlation(xi, lj);
  s.vol_t = correlation(sq(xi), sq(li));
  s.vol_s = correlation(sq(xi), sq(xj));
  s.vol_st = correlation(sq(xi), sq(lj));
  return s;
}

DependencyStats dependency_stats(const Matrix& series, Eigen::Index i, Eigen::Index j) {
  if (series.rows() < 3) throw DomainError("dependency_stats: need length >= 3");
  const Eigen::Index n = series.rows() - 1;
  return dependency_stats_pairs(series.bottomRows(n), series.topRows(n), i, j);
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("empirical_quantile: empty sample");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("empirical_quantile: p must lie in (0, 1)");
  return sorted[quantile_rank(p, sorted.size()) - 1];
}

double empirical_quantile(std::span<const double> sample, double p) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, p);
}

void QqResult::write_csv(std::ostream& out) const {
  CsvWriter w(out);
  const std::vector<std::string> header{"probability", "q_real", "q_generated"};
  w.header(header);
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const std::vector<double> row{probabilities[k], quantiles_a[k], quantiles_b[k]};
    w.row(row);
  }
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("linear_fit: x and y differ in length");
  if (x.size() < 2) throw DomainError("linear_fit: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("linear_fit: x is constant");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  return f;
}

QqResult qq_compare(std::span<const double> a, std::span<const double> b, std::size_t n_q) {
  if (a.empty() || b.empty()) throw DomainError("qq_compare: empty sample");
  if (n_q < 2) throw DomainError("qq_compare: need at least 2 quantiles");
  if (n_q > std::min(a.size(), b.size())) {
    throw DomainError("qq_compare: more quantiles than the smaller sample size");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  QqResult r;
  for (std::size_t k = 1; k <= n_q; ++k) {
    const double p = static_cast<double>(k) / static_cast<double>(n_q + 1);
    r.probabilities.push_back(p);
    r.quantiles_a.push_back(sorted_quantile(sa, p));
    r.quantiles_b.push_back(sorted_quantile(sb, p));
  }
  const LinearFit fit = linear_fit(r.quantiles_a, r.quantiles_b);
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r_squared = fit.r_squared;
  return r;
}

double ks_statistic(std::span<const double> sample, std::span<const double> reference) {
  if (sample.empty() || reference.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::vector<double> y(reference.begin(), reference.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<double> kde_default_grid(const Matrix& data, std::size_t count) {
  if (data.rows() < 2) throw DomainError("kde_default_grid: need at least 2 rows");
  if (count < 1) throw DomainError("kde_default_grid: empty grid");
  double scale = 0.0;
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    const double mean = data.col(c).mean();
    scale += std::sqrt((data.col(c).array() - mean).square().mean());
  }
  scale /= static_cast<double>(data.cols());
  if (!(scale > 0.0)) throw DomainError("kde_default_grid: data has zero spread");
  std::vector<double> grid;
  const double lo = std::log(0.01), hi = std::log(1.0);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = count == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    grid.push_back(scale * std::exp(lo + (hi - lo) * t));
  }
  return grid;
}

double kde_cv_loglik(const Matrix& data, double bandwidth, std::size_t folds) {
  if (!(bandwidth > 0.0)) throw DomainError("kde: bandwidth must be positive");
  const Eigen::Index n = data.rows();
  const double dim = static_cast<double>(data.cols());
  const double h2 = bandwidth * bandwidth;
  const double log_norm = -0.5 * dim * std::log(2.0 * std::numbers::pi * h2);
  double total = 0.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto fold = static_cast<std::size_t>(i) % folds;
    terms.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (static_cast<std::size_t>(j) % folds == fold) continue;
      terms.push_back(-0.5 * (data.row(i) - data.row(j)).squaredNorm() / h2);
    }
    total += log_norm + logsumexp(terms) - std::log(static_cast<double>(terms.size()));
  }
  return total / static_cast<double>(n);
}

double kde_fit_cv(const Matrix& data, std::span<const double> grid, std::size_t folds) {
  if (grid.empty()) throw DomainError("kde_fit_cv: empty bandwidth grid");
  if (folds < 2) throw DomainError("kde_fit_cv: need at least 2 folds");
  if (static_cast<std::size_t>(data.rows()) < folds) throw DomainError("kde_fit_cv: fewer rows than folds");
  if (grid.size() == 1) return grid.front();
  double best_h = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double h : grid) {
    const double ll = kde_cv_loglik(data, h, folds);
    if (std::isfinite(ll) && ll > best) {
      best = ll;
      best_h = h;
    }
  }
  if (!std::isfinite(best)) throw NumericError("kde_fit_cv: every bandwidth gave a degenerate likelihood");
  return best_h;
}

Matrix kde_sample(const Matrix& data, double bandwidth, std::size_t n, Rng& rng) {
  if (data.rows() == 0) throw DomainError("kde_sample: empty data");
  if (bandwidth < 0.0) throw DomainError("kde_sample: negative bandwidth");
  std::uniform_int_distribution<Eigen::Index> pick(0, data.rows() - 1);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix out(static_cast<Eigen::Index>(n), data.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out.row(i) = data.row(pick(rng));
    for (Eigen::Index c = 0; c < out.cols(); ++c) out(i, c) += bandwidth * g(rng);
  }
  return out;
}

}  // namespace cgan::stats
