#include <gtest/gtest.h>

#include <cmath>

#include "cgan/errors.hpp"
#include "cgan/stats.hpp"
#include "cgan/synth.hpp"

using namespace cgan;
using namespace cgan::synth;

namespace {

double lag1_autocorr(const Matrix& s, Eigen::Index col) {
  const auto v = stats::column(s, col);
  return stats::correlation(std::span(v).subspan(1), std::span(v).first(v.size() - 1));
}

double sample_variance(const Matrix& s, Eigen::Index col) {
  const double m = s.col(col).mean();
  return (s.col(col).array() - m).square().mean();
}

MvTSpec unit_t(double df, std::size_t dim = 2) {
  return {Vector::Zero(static_cast<Eigen::Index>(dim)), Matrix::Identity(static_cast<Eigen::Index>(dim),
                                                                         static_cast<Eigen::Index>(dim)),
          df};
}

}  // namespace

TEST(Cholesky, KnownFactors) {
  EXPECT_EQ(cholesky(Matrix::Identity(3, 3)), Matrix::Identity(3, 3));
  EXPECT_DOUBLE_EQ(cholesky(Matrix::Constant(1, 1, 4.0))(0, 0), 2.0);
  Matrix c(2, 2);
  c << 1, 0.5, 0.5, 1;
  const Matrix l = cholesky(c);
  EXPECT_EQ(l(0, 1), 0.0);
  EXPECT_LT((l * l.transpose() - c).cwiseAbs().maxCoeff(), 1e-12);
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  EXPECT_THROW(cholesky(bad), NumericError);
}

TEST(MvT, ExcessKurtosisMatchesMomentFormula) {
  Rng rng(1);
  const Matrix x12 = sample_mvt(unit_t(12.0), 1000000, rng);
  for (Eigen::Index c = 0; c < 2; ++c) {
    const auto m = stats::moments(stats::column(x12, c));
    EXPECT_NEAR(m.excess_kurtosis, 6.0 / (12.0 - 4.0), 0.15);
    EXPECT_NEAR(m.variance, 1.0, 0.01);
  }
  const Matrix x6 = sample_mvt(unit_t(6.0, 1), 1000000, rng);
  EXPECT_NEAR(stats::moments(stats::column(x6, 0)).excess_kurtosis, 3.0, 0.5);
  const Matrix big = sample_mvt(unit_t(1e6, 1), 200000, rng);
  EXPECT_NEAR(stats::moments(stats::column(big, 0)).excess_kurtosis, 0.0, 0.06);
}

TEST(MvT, CovarianceRecovered) {
  MvTSpec s = unit_t(8.0);
  s.mean << 1.0, -2.0;
  s.cov << 2.0, 0.6, 0.6, 1.0;
  Rng rng(2);
  const Matrix x = sample_mvt(s, 400000, rng);
  EXPECT_NEAR(x.col(0).mean(), 1.0, 0.01);
  EXPECT_NEAR(x.col(1).mean(), -2.0, 0.01);
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(x.rows());
  EXPECT_LT((cov - s.cov).cwiseAbs().maxCoeff(), 0.03);
  s.df = 2.0;
  EXPECT_ANY_THROW(s.validate());
}

TEST(Var1, WhiteNoiseWhenAIsZero) {
  VarSpec s = var1_constant_spec();
  s.a.setZero();
  Rng rng(3);
  const Matrix x = simulate_var1(s, 100000, rng);
  EXPECT_NEAR(lag1_autocorr(x, 0), 0.0, 0.015);
}

TEST(Var1, StationaryVarianceAndAutocorrelation) {
  VarSpec s = var1_constant_spec();
  s.noise.cov = Matrix::Identity(2, 2);
  Rng rng(4);
  const Matrix x = simulate_var1(s, 100000, rng);
  EXPECT_NEAR(sample_variance(x, 0), 1.0 / (1.0 - 0.64), 0.1 / (1.0 - 0.64));
  EXPECT_NEAR(sample_variance(x, 1), 1.0 / (1.0 - 0.36), 0.1 / (1.0 - 0.36));
  EXPECT_NEAR(lag1_autocorr(x, 0), 0.8, 0.02);
  EXPECT_NEAR(lag1_autocorr(x, 1), 0.6, 0.02);
}

TEST(Regions, SingleRegionEqualsVar1) {
  const VarSpec s = var1_constant_spec();
  RegionSpec r;
  r.regions = {{s, 500}};
  Rng a(5), b(5);
  const auto rs = simulate_region_switching(r, a);
  EXPECT_EQ(rs.series, simulate_var1(s, 500, b));
  EXPECT_EQ(rs.labels, std::vector<int>(500, 0));
}

TEST(Regions, SegmentMeans) {
  Rng rng(6);
  const auto rs = simulate_region_switching(two_region_spec(10000), rng);
  ASSERT_EQ(rs.labels.size(), static_cast<std::size_t>(rs.series.rows()));
  ASSERT_EQ(rs.series.rows(), 20000);
  const double m1 = rs.series.topRows(10000).col(0).mean();
  const double m2 = rs.series.bottomRows(10000).col(0).mean();
  EXPECT_NEAR(m1, -5.0, 0.25);
  EXPECT_NEAR(m2, 2.0, 0.1);
  EXPECT_EQ(rs.labels.front(), 0);
  EXPECT_EQ(rs.labels.back(), 1);
}

TEST(Garch, ConstantVarianceWithoutDynamics) {
  GarchSpec s = garch_study_spec();
  s.a.setZero();
  s.b.setZero();
  Rng rng(7);
  const auto g = simulate_garch(s, 2000, rng);
  EXPECT_EQ(g.sigma2.minCoeff(), 0.3);
  EXPECT_EQ(g.sigma2.maxCoeff(), 0.3);
}

TEST(Garch, LongRunVarianceAndVolatilityClustering) {
  const GarchSpec s = garch_study_spec();
  EXPECT_DOUBLE_EQ(s.unconditional_variance()(0), 3.0);
  Rng rng(8);
  const auto g = simulate_garch(s, 100000, rng);
  EXPECT_NEAR(sample_variance(g.x, 0), 3.0, 0.3);
  EXPECT_NEAR(sample_variance(g.x, 1), 3.0, 0.3);
  const auto d = stats::dependency_stats(g.x);
  EXPECT_GT(d.vol_t, d.cor_t + 0.1);
}

TEST(Garch, RecursionMatchesNextVariance) {
  const GarchSpec s = garch_study_spec();
  Rng rng(9);
  const auto g = simulate_garch(s, 50, rng);
  for (Eigen::Index t = 1; t < 50; ++t) {
    const Vector next = garch_next_variance(s, g.x.row(t - 1).transpose(), g.sigma2.row(t - 1).transpose());
    EXPECT_NEAR(next(0), g.sigma2(t, 0), 1e-12);
    EXPECT_NEAR(next(1), g.sigma2(t, 1), 1e-12);
  }
}

TEST(Mixture, CountsMeansAndDegenerateCluster) {
  Rng rng(10);
  const auto spec = default_four_clusters(1000);
  const auto d = gaussian_mixture_clusters(spec, rng);
  ASSERT_EQ(d.samples.rows(), 4000);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& c = spec.components[k];
    const Matrix block = d.samples.middleRows(static_cast<Eigen::Index>(k * 1000), 1000);
    for (Eigen::Index j = 0; j < 2; ++j) {
      EXPECT_NEAR(block.col(j).mean(), c.mean(j), 3.0 * std::sqrt(c.cov(j, j) / 1000.0));
    }
    EXPECT_EQ(d.labels[k * 1000], c.label);
  }
  MixtureSpec point;
  point.components = {{Vector::Constant(2, 1.5), Matrix::Zero(2, 2), 5, 0}};
  const auto p = gaussian_mixture_clusters(point, rng);
  EXPECT_EQ(p.samples, Matrix::Constant(5, 2, 1.5));
}

TEST(Circle, MeansOnRadiusAndVarianceRange) {
  Rng rng(11);
  const auto d = circle_variance_dataset(1000, 2.0, 0.02, 0.5, rng);
  ASSERT_EQ(d.samples.rows(), 1000);
  for (Eigen::Index i = 0; i < d.conditions.rows(); ++i) {
    EXPECT_NEAR(d.conditions.row(i).norm(), 2.0, 1e-12);
  }
  EXPECT_NEAR(d.variances.minCoeff(), 0.02, 1e-12);
  EXPECT_NEAR(d.variances.maxCoeff(), 0.5, 1e-12);
  const auto flat = circle_variance_dataset(50, 1.0, 0.1, 0.1, rng);
  EXPECT_EQ(flat.variances.minCoeff(), flat.variances.maxCoeff());
}

TEST(Line, SymmetricVarianceAndClipping) {
  Rng rng(12);
  const auto d = line_variance_dataset(1000, -4.0, 4.0, 0.1, 0.05, rng);
  for (Eigen::Index i = 0; i < 1000; ++i) {
    EXPECT_NEAR(d.variances(i), 0.05 + 0.1 * std::abs(d.conditions(i, 0)), 1e-12);
    EXPECT_EQ(d.conditions(i, 1), 0.0);
  }
  EXPECT_NEAR(d.variances(0), d.variances(999), 1e-12);
  EXPECT_EQ(clip_ends(d, 0.2).samples.rows(), 600);
  const auto flat = line_variance_dataset(20, -1.0, 1.0, 0.0, 0.3, rng);
  EXPECT_EQ(flat.variances.minCoeff(), flat.variances.maxCoeff());
}

TEST(Oracle, VarConditionalMomentsAndNoiseScaling) {
  const VarSpec s = var1_sum_abs_spec();
  Vector cond(2);
  cond << 1.0, 1.0;
  const Matrix cov = var_noise_cov(s, cond);
  EXPECT_DOUBLE_EQ(cov(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(cov(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(cov(0, 1), 0.0);
  Rng rng(13);
  const std::size_t n = 100000;
  const Matrix x = true_conditional_distribution(s, cond, n, rng);
  const double se = 3.0 * std::sqrt(2.0 / static_cast<double>(n));
  EXPECT_NEAR(x.col(0).mean(), 0.8, se);
  EXPECT_NEAR(x.col(1).mean(), 0.6, se);
  EXPECT_NEAR(sample_variance(x, 0), 2.0, 0.05);
  const VarSpec ps = var1_per_series_abs_spec();
  Vector c2(2);
  c2 << 4.0, -1.0;
  const Matrix pc = var_noise_cov(ps, c2);
  EXPECT_DOUBLE_EQ(pc(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(pc(1, 1), 1.0);
}

TEST(Oracle, ZeroCoefficientsReduceToNoise) {
  VarSpec s = var1_constant_spec();
  s.a.setZero();
  Vector cond(2);
  cond << 3.0, -3.0;
  Rng a(14), b(14);
  const Matrix x = true_conditional_distribution(s, cond, 1000, a);
  EXPECT_EQ(x, sample_mvt(s.noise, 1000, b));
}

TEST(Oracle, GarchConditionalVariance) {
  const GarchSpec s = garch_study_spec();
  Vector sig(2);
  sig << 0.5, 4.0;
  Rng rng(15);
  const Matrix x = true_conditional_distribution(s, sig, 200000, rng);
  EXPECT_NEAR(sample_variance(x, 0), 0.5, 0.02);
  EXPECT_NEAR(sample_variance(x, 1), 4.0, 0.12);
}
