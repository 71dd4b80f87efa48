#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cgan/types.hpp"

// Dense feed-forward networks with exact reverse-mode gradients.
namespace cgan::nn {

enum class ActivationKind { Identity, ReLU, LeakyReLU, Sigmoid };

struct Activation {
  ActivationKind kind = ActivationKind::Identity;
  double alpha = 0.0;  // LeakyReLU slope for x <= 0

  static Activation identity() { return {ActivationKind::Identity, 0.0}; }
  static Activation relu() { return {ActivationKind::ReLU, 0.0}; }
  static Activation leaky_relu(double alpha);
  static Activation sigmoid() { return {ActivationKind::Sigmoid, 0.0}; }

  /// Piecewise-linear with a kink at zero (ReLU or LeakyReLU).
  bool is_relu_family() const {
    return kind == ActivationKind::ReLU || kind == ActivationKind::LeakyReLU;
  }

  /// Text tag used by the snapshot format: identity, relu, leaky_relu, sigmoid.
  std::string tag() const;
  static Activation from_tag(const std::string& tag, double alpha = 0.0);

  bool operator==(const Activation&) const = default;
};

/// Applies the activation elementwise.
Matrix apply_activation(const Activation& act, const Matrix& pre);
double apply_activation(const Activation& act, double x);

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
  Activation activation;

  std::size_t in_dim() const { return static_cast<std::size_t>(weights.cols()); }
  std::size_t out_dim() const { return static_cast<std::size_t>(weights.rows()); }
};

class Mlp {
 public:
  Mlp() = default;
  /// Throws ShapeError when adjacent layer dimensions do not chain.
  explicit Mlp(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  const DenseLayer& layer(std::size_t i) const { return layers_.at(i); }
  /// Mutable access. Invalidates forward caches taken before the call.
  DenseLayer& mutable_layer(std::size_t i);

  std::size_t depth() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  std::size_t in_dim() const;
  std::size_t out_dim() const;
  std::size_t parameter_count() const;

  /// Bumped on every parameter mutation; used to detect stale caches.
  std::uint64_t revision() const { return revision_; }
  void touch() { ++revision_; }

  /// Parameter-wise equality (ignores the revision counter).
  bool same_parameters(const Mlp& other) const;

 private:
  std::vector<DenseLayer> layers_;
  std::uint64_t revision_ = 0;
};

/// Glorot-uniform weights, zero biases. `activations` has one entry per layer
/// (sizes.size() - 1 entries).
Mlp init_mlp(std::span<const std::size_t> sizes,
             std::span<const Activation> activations, Rng& rng);
Mlp init_mlp(std::span<const std::size_t> sizes,
             std::span<const Activation> activations, std::uint64_t seed);

struct ForwardCache {
  const Mlp* net = nullptr;
  std::uint64_t revision = 0;
  std::vector<Matrix> inputs;  // input to each layer
  std::vector<Matrix> pre;     // pre-activation of each layer
  Matrix output;
};

/// Forward pass keeping what backward() needs.
ForwardCache forward(const Mlp& net, const Matrix& batch);

/// Forward pass without a cache.
Matrix predict(const Mlp& net, const Matrix& batch);

struct GradientSet {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  Matrix input;  // d(upstream . output) / d(batch)

  GradientSet& operator+=(const GradientSet& other);
  bool all_finite() const;
};

/// Reverse-mode gradients of sum(upstream .* output) with respect to every
/// parameter and to the forward input. Bias gradients sum over the batch.
GradientSet backward(const Mlp& net, const ForwardCache& cache, const Matrix& upstream);

struct AdamState {
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Matrix> m_weights, v_weights;
  std::vector<Vector> m_biases, v_biases;
};

AdamState make_adam_state(const Mlp& net, double learning_rate, double beta1,
                          double beta2, double epsilon = 1e-8);

/// One bias-corrected Adam descent step. Throws NumericError on non-finite
/// gradients (parameters are left untouched in that case).
void adam_step(Mlp& net, const GradientSet& grads, AdamState& state);

/// Projects every weight and bias entry into [-c, c].
void clip_weights_in_place(Mlp& net, double c);
Mlp clip_weights(Mlp net, double c);

/// Breakpoints x = -b_j / w_j of a scalar-input, single-hidden-layer ReLU-family
/// network, ascending. Units with w_j == 0 contribute no knot.
std::vector<double> extract_spline_knots(const Mlp& net);

/// Plain-text snapshot: header, then per layer "layer <in> <out> <tag> <alpha>"
/// followed by row-major weights and the bias vector.
void save_mlp(std::ostream& out, const Mlp& net);
Mlp load_mlp(std::istream& in);

}  // namespace cgan::nn
