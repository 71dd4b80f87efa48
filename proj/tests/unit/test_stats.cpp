#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "cgan/errors.hpp"
#include "cgan/stats.hpp"
#include "cgan/synth.hpp"
#include "oracles.hpp"

using namespace cgan;
using namespace cgan::stats;
using cgan::testing::random_matrix;

namespace {

std::vector<double> iota_vec(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

std::vector<double> normals(std::size_t n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST(Moments, TwoPointHandValues) {
  const auto m = moments(std::vector<double>{-1, 1, -1, 1});
  EXPECT_DOUBLE_EQ(m.mean, 0.0);
  EXPECT_DOUBLE_EQ(m.variance, 1.0);
  EXPECT_DOUBLE_EQ(m.skewness, 0.0);
  EXPECT_DOUBLE_EQ(m.excess_kurtosis, -2.0);
}

TEST(Moments, ShiftedSymmetricSampleHasZeroSkew) {
  std::vector<double> v{-3, -1, 0, 1, 3};
  for (auto& x : v) x += 10.0;
  EXPECT_NEAR(moments(v).skewness, 0.0, 1e-12);
  EXPECT_NEAR(moments(v).mean, 10.0, 1e-12);
}

TEST(Moments, GaussianBaseline) {
  Rng rng(1);
  EXPECT_NEAR(moments(normals(1000000, rng)).excess_kurtosis, 0.0, 0.05);
  EXPECT_ANY_THROW(moments(std::vector<double>{1, 1, 1, 1}));
}

TEST(Correlation, PerfectAndConstant) {
  const auto x = iota_vec(1, 10);
  std::vector<double> y;
  for (double v : x) y.push_back(-2 * v + 1);
  EXPECT_NEAR(correlation(x, y), -1.0, 1e-12);
  EXPECT_ANY_THROW(correlation(x, std::vector<double>(10, 3.0)));
}

TEST(Dependency, IidNoiseNearZero) {
  Rng rng(2);
  const std::size_t n = 20000;
  const Matrix x = random_matrix(static_cast<Eigen::Index>(n), 2, rng);
  const auto d = dependency_stats(x);
  const double bound = 3.0 / std::sqrt(static_cast<double>(n));
  for (double v : {d.cor_t, d.cor_s, d.cor_st, d.vol_t, d.vol_s, d.vol_st}) EXPECT_LT(std::abs(v), bound);
}

TEST(Dependency, Ar1AndCrossCorrelation) {
  synth::VarSpec s = synth::var1_constant_spec();
  Rng rng(3);
  const Matrix x = synth::simulate_var1(s, 100000, rng);
  const auto d = dependency_stats(x);
  EXPECT_NEAR(d.cor_t, 0.8, 0.02);
  EXPECT_GT(d.cor_s, 0.2);
  const auto pairs = dependency_stats_pairs(x.bottomRows(x.rows() - 1), x.topRows(x.rows() - 1));
  EXPECT_NEAR(pairs.cor_t, d.cor_t, 1e-12);
  EXPECT_NEAR(pairs.cor_st, d.cor_st, 1e-12);
  EXPECT_NEAR(pairs.vol_t, d.vol_t, 1e-12);
}

TEST(Quantile, OrderStatisticConvention) {
  const auto v = iota_vec(1, 100);
  EXPECT_EQ(empirical_quantile(v, 0.01), 1.0);
  EXPECT_EQ(empirical_quantile(v, 0.99), 99.0);
  EXPECT_EQ(empirical_quantile(std::vector<double>{3, 1, 2}, 0.5), 2.0);
  EXPECT_EQ(sorted_quantile(v, 0.05), 5.0);
}

TEST(Quantile, PropertyMatchesSortOracle) {
  Rng rng(4);
  std::uniform_real_distribution<double> p(0.001, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
    auto v = normals(n, rng);
    const double q = p(rng);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    EXPECT_EQ(empirical_quantile(v, q), sorted[std::max<std::size_t>(k, 1) - 1]);
  }
}

TEST(LinearFit, ExactLineAndErrors) {
  const auto x = iota_vec(1, 5);
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 3);
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 3.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(linear_fit(x, std::vector<double>(5, 1.0)).r_squared, 0.0);
  EXPECT_THROW(linear_fit(std::vector<double>(3, 1.0), std::vector<double>{1, 2, 3}), DomainError);
  EXPECT_THROW(linear_fit(x, std::vector<double>{1, 2}), ShapeError);
}

TEST(Qq, IdentityAndAffine) {
  Rng rng(5);
  const auto a = normals(500, rng);
  const auto same = qq_compare(a, a, 99);
  EXPECT_EQ(same.slope, 1.0);
  EXPECT_EQ(same.intercept, 0.0);
  EXPECT_EQ(same.r_squared, 1.0);
  std::vector<double> b;
  for (double v : a) b.push_back(2 * v + 3);
  const auto aff = qq_compare(a, b, 99);
  EXPECT_NEAR(aff.slope, 2.0, 1e-12);
  EXPECT_NEAR(aff.intercept, 3.0, 1e-12);
  EXPECT_NEAR(aff.r_squared, 1.0, 1e-12);
  ASSERT_EQ(aff.probabilities.size(), 99u);
  EXPECT_DOUBLE_EQ(aff.probabilities.front(), 0.01);
  std::ostringstream os;
  aff.write_csv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "probability,q_real,q_generated");
}

TEST(Qq, IndependentNormalSamples) {
  Rng rng(6);
  const auto q = qq_compare(normals(100000, rng), normals(100000, rng), 99);
  EXPECT_NEAR(q.slope, 1.0, 0.05);
}

TEST(Ks, TwoSampleEdgeCases) {
  const std::vector<double> zeros(10, 0.0), ones(10, 1.0);
  EXPECT_EQ(ks_statistic(zeros, zeros), 0.0);
  EXPECT_EQ(ks_statistic(zeros, ones), 1.0);
  Rng rng(7);
  const auto v = normals(300, rng);
  EXPECT_EQ(ks_statistic(v, v), 0.0);
}

TEST(Ks, AnalyticCdfBoundAndBruteForce) {
  Rng rng(8);
  const auto v = normals(10000, rng);
  EXPECT_LT(ks_statistic(v, normal_cdf), 0.02);
  // Brute-force oracle on a small sample.
  const auto small = normals(25, rng);
  auto sorted = small;
  std::sort(sorted.begin(), sorted.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i]);
    worst = std::max({worst, std::abs((i + 1) / 25.0 - f), std::abs(i / 25.0 - f)});
  }
  EXPECT_NEAR(ks_statistic(small, normal_cdf), worst, 1e-15);
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
}

TEST(Kde, SingleCandidateAndGrid) {
  Rng rng(9);
  const Matrix d = random_matrix(200, 2, rng);
  const std::vector<double> one{0.37};
  EXPECT_EQ(kde_fit_cv(d, one), 0.37);
  const auto grid = kde_default_grid(d);
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_NEAR(grid.back() / grid.front(), 100.0, 1e-9);
}

TEST(Kde, CrossValidationPicksBestCandidate) {
  Rng rng(10);
  const Matrix d = random_matrix(300, 2, rng);
  const auto grid = kde_default_grid(d);
  const double h = kde_fit_cv(d, grid, 5);
  double best = -INFINITY;
  double arg = 0.0;
  for (double g : grid) {
    const double ll = kde_cv_loglik(d, g, 5);
    if (ll > best) {
      best = ll;
      arg = g;
    }
  }
  EXPECT_EQ(h, arg);
  EXPECT_GT(h, grid.front());
  EXPECT_LT(h, grid.back());
}

TEST(Kde, TinyBandwidthResamplesData) {
  Matrix d(3, 2);
  d << 0, 0, 5, 5, -5, 5;
  Rng rng(11);
  const Matrix s = kde_sample(d, 1e-12, 100, rng);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double nearest = (d.rowwise() - s.row(i)).rowwise().norm().minCoeff();
    EXPECT_LT(nearest, 1e-9);
  }
}
