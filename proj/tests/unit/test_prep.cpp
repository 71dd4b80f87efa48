#include <gtest/gtest.h>

#include "cgan/errors.hpp"
#include "cgan/prep.hpp"
#include "oracles.hpp"

using namespace cgan;
using namespace cgan::prep;
using cgan::testing::random_matrix;

namespace {

Matrix column_of(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST(SlidingWindow, SmallSeries) {
  const auto p = sliding_window(column_of({1, 2, 3, 4}), 2);
  ASSERT_EQ(p.samples(), 3u);
  Matrix expected(3, 2);
  expected << 1, 2, 2, 3, 3, 4;
  EXPECT_EQ(p.flatten(), expected);
}

TEST(SlidingWindow, WindowEqualsLength) {
  Rng rng(1);
  const Matrix s = random_matrix(5, 2, rng);
  const auto p = sliding_window(s, 5);
  ASSERT_EQ(p.samples(), 1u);
  EXPECT_EQ(p.sample(0), s);
}

TEST(SlidingWindow, QuarterlyPanelCount) {
  const auto p = sliding_window(Matrix::Zero(242, 5), 13);
  EXPECT_EQ(p.samples(), 230u);
  EXPECT_EQ(p.window(), 13u);
  EXPECT_EQ(p.series(), 5u);
  EXPECT_THROW(sliding_window(Matrix::Zero(3, 1), 4), DomainError);
}

TEST(Panel, FlattenIsTimeMajorAndRoundTrips) {
  Rng rng(2);
  const Matrix s = random_matrix(10, 3, rng);
  const auto p = sliding_window(s, 4, {"a", "b", "c"});
  const Matrix flat = p.flatten();
  for (std::size_t smp = 0; smp < p.samples(); ++smp) {
    for (std::size_t t = 0; t < 4; ++t) {
      for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(flat(static_cast<Eigen::Index>(smp), static_cast<Eigen::Index>(t * 3 + i)),
                  s(static_cast<Eigen::Index>(smp + t), static_cast<Eigen::Index>(i)));
      }
    }
  }
  EXPECT_EQ(PanelData::unflatten(flat, 4, 3, {"a", "b", "c"}), p);
}

TEST(Dummy, EncodeDecode) {
  Matrix expected(2, 3);
  expected << 1, 0, 0, 0, 0, 1;
  EXPECT_EQ(dummy_encode({0, 2}, 3), expected);
  EXPECT_EQ(dummy_encode({0, 0, 0}, 1), Matrix::Ones(3, 1));
  EXPECT_EQ(dummy_encode({0, 1, 2, 3}, 4).cols(), 4);
  EXPECT_EQ(dummy_decode(dummy_encode({3, 1, 0, 2}, 4)), (std::vector<int>{3, 1, 0, 2}));
  EXPECT_ANY_THROW(dummy_encode({3}, 3));
  EXPECT_ANY_THROW(dummy_encode({-1}, 3));
}

TEST(Scale, PopulationConvention) {
  const auto [scaled, params] = standardize(column_of({0, 2}));
  EXPECT_DOUBLE_EQ(params.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(params.stddev(0), 1.0);
  EXPECT_EQ(scaled, column_of({-1, 1}));
}

TEST(Scale, StandardDataUnchangedAndRoundTrip) {
  Rng rng(3);
  Matrix m = random_matrix(500, 4, rng, 3.0);
  m.array() += 7.0;
  const auto [z, params] = standardize(m);
  const auto [z2, p2] = standardize(z);
  EXPECT_LT((z2 - z).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((inverse_standardize(z, params) - m).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(apply_scale(m, params), z);
  EXPECT_ANY_THROW(fit_scale(Matrix::Ones(4, 1)));
}

TEST(Scale, TiledParamsRepeatPerTimeStep) {
  ScaleParams p{Vector(2), Vector(2)};
  p.mean << 1, 2;
  p.stddev << 3, 4;
  const auto t = tile_scale(p, 3);
  ASSERT_EQ(t.mean.size(), 6);
  for (Eigen::Index k = 0; k < 3; ++k) {
    EXPECT_EQ(t.mean(2 * k), 1);
    EXPECT_EQ(t.mean(2 * k + 1), 2);
    EXPECT_EQ(t.stddev(2 * k), 3);
    EXPECT_EQ(t.stddev(2 * k + 1), 4);
  }
}

TEST(Lag, HandExampleAndIdentity) {
  const auto lp = lag_conditions(column_of({1, 2, 3}), 1);
  EXPECT_EQ(lp.targets, column_of({2, 3}));
  EXPECT_EQ(lp.conditions, column_of({1, 2}));
  Rng rng(4);
  const Matrix s = random_matrix(6, 2, rng);
  const auto id = lag_conditions(s, 0);
  EXPECT_EQ(id.targets, s);
  EXPECT_EQ(id.conditions, s);
  EXPECT_EQ(lag_conditions(Matrix::Zero(1000, 2), 1).targets.rows(), 999);
}

TEST(Split, ConditionAndTargetPartition) {
  Rng rng(5);
  const auto panel = sliding_window(random_matrix(30, 5, rng), 13);
  const auto [cond, target] = split_condition_target(panel, 4);
  EXPECT_EQ(cond.window(), 4u);
  EXPECT_EQ(target.window(), 9u);
  EXPECT_EQ(concat_time(cond, target), panel);
  const auto [c2, t2] = split_condition_target(panel, 12);
  EXPECT_EQ(t2.window(), 1u);
  EXPECT_ANY_THROW(split_condition_target(panel, 13));
}

TEST(Stationarity, TransformsAndAlignment) {
  Matrix s(3, 3);
  s << 1, 10, 5, 2, 20, 7, 4, 40, 6;
  const auto out = make_stationary(
      s, {StationarityTransform::Level, StationarityTransform::LogDifference,
          StationarityTransform::FirstDifference});
  ASSERT_EQ(out.rows(), 2);
  EXPECT_EQ(out(0, 0), 2);
  EXPECT_EQ(out(1, 0), 4);
  EXPECT_NEAR(out(0, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(out(1, 1), std::log(2.0), 1e-15);
  EXPECT_EQ(out(0, 2), 2);
  EXPECT_EQ(out(1, 2), -1);
  for (auto t : {StationarityTransform::Level, StationarityTransform::FirstDifference,
                 StationarityTransform::LogDifference}) {
    EXPECT_EQ(parse_transform(to_string(t)), t);
  }
  EXPECT_ANY_THROW(parse_transform("percent"));
  EXPECT_ANY_THROW(make_stationary(s, {StationarityTransform::Level}));
}
