#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "cgan/types.hpp"

// Distributional and dependence diagnostics.
namespace cgan::stats {

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Population-normalized central moments. Requires n >= 4 and non-zero variance.
MomentSummary moments(std::span<const double> samples);

/// Column `col` of a matrix as a vector.
std::vector<double> column(const Matrix& m, Eigen::Index col);

/// Pearson correlation (population normalization). Throws on a constant input.
double correlation(std::span<const double> x, std::span<const double> y);

/// The six first- and second-order dependence statistics for series i, j:
/// cor_t = corr(x_i,t, x_i,t-1), cor_s = corr(x_i,t, x_j,t),
/// cor_st = corr(x_i,t, x_j,t-1); vol_* are the same on squared raw values.
struct DependencyStats {
  double cor_t = 0.0;
  double cor_s = 0.0;
  double cor_st = 0.0;
  double vol_t = 0.0;
  double vol_s = 0.0;
  double vol_st = 0.0;
};

/// From a Time x Series matrix (length >= 3), pairing each row with its predecessor.
DependencyStats dependency_stats(const Matrix& series, Eigen::Index i = 0, Eigen::Index j = 1);

/// From aligned (current, lagged) observations, e.g. the two time steps of
/// window-2 panel samples.
DependencyStats dependency_stats_pairs(const Matrix& current, const Matrix& lagged,
                                       Eigen::Index i = 0, Eigen::Index j = 1);

/// k-th order statistic with k = ceil(p n), 1-indexed on the ascending sort.
double empirical_quantile(std::span<const double> sample, double p);
/// Same convention on an already ascending-sorted sample.
double sorted_quantile(std::span<const double> sorted, double p);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // squared correlation; 0 when y is constant
};

/// Ordinary least squares of y on x. Throws on constant x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct QqResult {
  std::vector<double> probabilities;
  std::vector<double> quantiles_a;
  std::vector<double> quantiles_b;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;

  /// Columns: probability, q_real, q_generated (a is the reference sample).
  void write_csv(std::ostream& out) const;
};

/// Quantiles at p_k = k / (n_q + 1), k = 1..n_q, and the least-squares line of
/// b-quantiles on a-quantiles. R^2 is the squared correlation of the pairs.
QqResult qq_compare(std::span<const double> a, std::span<const double> b, std::size_t n_q);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_statistic(std::span<const double> sample, std::span<const double> reference);
/// Distance between the empirical CDF and an analytic CDF.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

double normal_cdf(double x);

/// 20 log-spaced candidates spanning [0.01, 1] times the mean column stddev.
std::vector<double> kde_default_grid(const Matrix& data, std::size_t count = 20);

/// Mean held-out log-likelihood of an isotropic Gaussian KDE with bandwidth h,
/// using fold assignment row % folds.
double kde_cv_loglik(const Matrix& data, double bandwidth, std::size_t folds);

/// Bandwidth maximizing the cross-validated log-likelihood.
double kde_fit_cv(const Matrix& data, std::span<const double> grid, std::size_t folds = 5);

/// Picks a data row uniformly and adds N(0, h^2 I) noise.
Matrix kde_sample(const Matrix& data, double bandwidth, std::size_t n, Rng& rng);

}  // namespace cgan::stats
