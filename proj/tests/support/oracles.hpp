#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cgan/nn.hpp"

namespace cgan::testing {

// Entries whose magnitude falls below this floor are compared absolutely,
// since central differences carry ~1e-10 rounding noise.
inline constexpr double kGradFloor = 1e-4;

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), kGradFloor});
}

inline double objective(const nn::Mlp& net, const Matrix& x, const Matrix& upstream) {
  return (nn::predict(net, x).array() * upstream.array()).sum();
}

struct GradCheck {
  double worst = 0.0;
  std::size_t entries = 0;
};

// Compares every weight, bias and input gradient against central differences.
inline GradCheck check_gradients(const nn::Mlp& net, const Matrix& x, const Matrix& upstream,
                                 double h = 1e-5) {
  const auto cache = nn::forward(net, x);
  const auto grads = nn::backward(net, cache, upstream);
  GradCheck out;
  auto note = [&](double analytic, double numeric) {
    out.worst = std::max(out.worst, relative_error(analytic, numeric));
    ++out.entries;
  };
  nn::Mlp probe = net;
  for (std::size_t k = 0; k < net.depth(); ++k) {
    for (Eigen::Index i = 0; i < net.layer(k).weights.size(); ++i) {
      double& w = probe.mutable_layer(k).weights.data()[i];
      const double keep = w;
      w = keep + h;
      const double up = objective(probe, x, upstream);
      w = keep - h;
      const double down = objective(probe, x, upstream);
      w = keep;
      note(grads.weights[k].data()[i], (up - down) / (2 * h));
    }
    for (Eigen::Index i = 0; i < net.layer(k).bias.size(); ++i) {
      double& b = probe.mutable_layer(k).bias(i);
      const double keep = b;
      b = keep + h;
      const double up = objective(probe, x, upstream);
      b = keep - h;
      const double down = objective(probe, x, upstream);
      b = keep;
      note(grads.biases[k](i), (up - down) / (2 * h));
    }
  }
  Matrix xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = xp.data()[i];
    xp.data()[i] = keep + h;
    const double up = objective(net, xp, upstream);
    xp.data()[i] = keep - h;
    const double down = objective(net, xp, upstream);
    xp.data()[i] = keep;
    note(grads.input.data()[i], (up - down) / (2 * h));
  }
  return out;
}

inline nn::Activation random_activation(Rng& rng) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return nn::Activation::identity();
    case 1: return nn::Activation::relu();
    case 2: return nn::Activation::leaky_relu(0.1);
    default: return nn::Activation::sigmoid();
  }
}

// 2-3 layers, widths in [1, 50], mixed activations, non-zero biases.
inline nn::Mlp random_net(Rng& rng) {
  const std::size_t layers = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
  std::uniform_int_distribution<std::size_t> width(1, 50);
  std::vector<std::size_t> sizes;
  std::vector<nn::Activation> acts;
  for (std::size_t k = 0; k <= layers; ++k) sizes.push_back(width(rng));
  for (std::size_t k = 0; k < layers; ++k) acts.push_back(random_activation(rng));
  auto net = nn::init_mlp(sizes, acts, rng);
  std::normal_distribution<double> g(0.0, 0.1);
  for (std::size_t k = 0; k < net.depth(); ++k) {
    for (Eigen::Index i = 0; i < net.layer(k).bias.size(); ++i) net.mutable_layer(k).bias(i) = g(rng);
  }
  return net;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double sd = 1.0) {
  std::normal_distribution<double> g(0.0, sd);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

}  // namespace cgan::testing
