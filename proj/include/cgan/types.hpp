#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace cgan {

/// Row-major dense matrix of doubles. Rows are samples, columns are features.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// All randomness flows through explicitly passed engines of this type.
using Rng = std::mt19937_64;

}  // namespace cgan
