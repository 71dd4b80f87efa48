#include "cgan/nn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "cgan/errors.hpp"

namespace cgan::nn {

namespace {

constexpr const char* kSnapshotMagic = "cgan-mlp";
constexpr int kSnapshotVersion = 1;

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericError(std::string("non-finite values in ") + what);
  }
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Elementwise derivative of the activation, given pre- and post-activation.
Matrix activation_derivative(const Activation& act, const Matrix& pre, const Matrix& post) {
  switch (act.kind) {
    case ActivationKind::Identity:
      return Matrix::Ones(pre.rows(), pre.cols());
    case ActivationKind::ReLU:
      return (pre.array() > 0.0).cast<double>().matrix();
    case ActivationKind::LeakyReLU:
      return (pre.array() > 0.0).select(1.0, Matrix::Constant(pre.rows(), pre.cols(), act.alpha));
    case ActivationKind::Sigmoid:
      return (post.array() * (1.0 - post.array())).matrix();
  }
  return Matrix::Ones(pre.rows(), pre.cols());
}

}  // namespace

Activation Activation::leaky_relu(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("LeakyReLU alpha must lie in (0, 1)");
  }
  return {ActivationKind::LeakyReLU, alpha};
}

std::string Activation::tag() const {
  switch (kind) {
    case ActivationKind::Identity: return "identity";
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::LeakyReLU: return "leaky_relu";
    case ActivationKind::Sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation Activation::from_tag(const std::string& tag, double alpha) {
  if (tag == "identity") return identity();
  if (tag == "relu") return relu();
  if (tag == "leaky_relu") return leaky_relu(alpha);
  if (tag == "sigmoid") return sigmoid();
  throw DomainError("unknown activation tag '" + tag + "'");
}

double apply_activation(const Activation& act, double x) {
  switch (act.kind) {
    case ActivationKind::Identity: return x;
    case ActivationKind::ReLU: return x > 0.0 ? x : 0.0;
    case ActivationKind::LeakyReLU: return x > 0.0 ? x : act.alpha * x;
    case ActivationKind::Sigmoid: return sigmoid(x);
  }
  return x;
}

Matrix apply_activation(const Activation& act, const Matrix& pre) {
  switch (act.kind) {
    case ActivationKind::Identity:
      return pre;
    case ActivationKind::ReLU:
      return pre.cwiseMax(0.0);
    case ActivationKind::LeakyReLU:
      return (pre.array() > 0.0).select(pre, act.alpha * pre);
    case ActivationKind::Sigmoid:
      return pre.unaryExpr([](double x) { return sigmoid(x); });
  }
  return pre;
}

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& l = layers_[k];
    if (l.weights.rows() == 0 || l.weights.cols() == 0) {
      throw ShapeError("layer " + std::to_string(k) + " has an empty weight matrix");
    }
    if (l.bias.size() != l.weights.rows()) {
      throw ShapeError("layer " + std::to_string(k) + " bias length does not match weight rows");
    }
    if (k > 0 && layers_[k - 1].out_dim() != l.in_dim()) {
      throw ShapeError("layer " + std::to_string(k) + " input width does not match previous output");
    }
    if (l.activation.kind == ActivationKind::LeakyReLU &&
        !(l.activation.alpha > 0.0 && l.activation.alpha < 1.0)) {
      throw DomainError("LeakyReLU alpha must lie in (0, 1)");
    }
  }
}

DenseLayer& Mlp::mutable_layer(std::size_t i) {
  ++revision_;
  return layers_.at(i);
}

std::size_t Mlp::in_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }
std::size_t Mlp::out_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim(); }

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) {
    n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  }
  return n;
}

bool Mlp::same_parameters(const Mlp& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& a = layers_[k];
    const auto& b = other.layers_[k];
    if (a.activation != b.activation || a.weights.rows() != b.weights.rows() ||
        a.weights.cols() != b.weights.cols() || a.weights != b.weights || a.bias != b.bias) {
      return false;
    }
  }
  return true;
}

Mlp init_mlp(std::span<const std::size_t> sizes, std::span<const Activation> activations,
             Rng& rng) {
  if (sizes.size() < 2) {
    throw DomainError("init_mlp needs at least two layer sizes");
  }
  if (activations.size() != sizes.size() - 1) {
    throw ShapeError("init_mlp needs one activation per layer");
  }
  for (auto s : sizes) {
    if (s == 0) throw DomainError("layer sizes must be positive");
  }
  std::vector<DenseLayer> layers;
  layers.reserve(sizes.size() - 1);
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    const auto fan_in = sizes[k];
    const auto fan_out = sizes[k + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> unif(-bound, bound);
    DenseLayer layer;
    layer.weights.resize(static_cast<Eigen::Index>(fan_out), static_cast<Eigen::Index>(fan_in));
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
      layer.weights.data()[i] = unif(rng);
    }
    layer.bias = Vector::Zero(static_cast<Eigen::Index>(fan_out));
    layer.activation = activations[k];
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

Mlp init_mlp(std::span<const std::size_t> sizes, std::span<const Activation> activations,
             std::uint64_t seed) {
  Rng rng(seed);
  return init_mlp(sizes, activations, rng);
}

ForwardCache forward(const Mlp& net, const Matrix& batch) {
  if (net.empty()) throw ShapeError("forward on an empty network");
  if (static_cast<std::size_t>(batch.cols()) != net.in_dim()) {
    throw ShapeError("forward: batch has " + std::to_string(batch.cols()) +
                     " columns, network expects " + std::to_string(net.in_dim()));
  }
  ForwardCache cache;
  cache.net = &net;
  cache.revision = net.revision();
  cache.inputs.reserve(net.depth());
  cache.pre.reserve(net.depth());
  Matrix current = batch;
  for (const auto& layer : net.layers()) {
    Matrix z(current.rows(), layer.weights.rows());
    z.noalias() = current * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    Matrix out = apply_activation(layer.activation, z);
    cache.inputs.push_back(std::move(current));
    cache.pre.push_back(std::move(z));
    current = std::move(out);
  }
  check_finite(current, "network output");
  cache.output = std::move(current);
  return cache;
}

Matrix predict(const Mlp& net, const Matrix& batch) {
  if (net.empty()) throw ShapeError("predict on an empty network");
  if (static_cast<std::size_t>(batch.cols()) != net.in_dim()) {
    throw ShapeError("predict: batch has " + std::to_string(batch.cols()) +
                     " columns, network expects " + std::to_string(net.in_dim()));
  }
  Matrix current = batch;
  for (const auto& layer : net.layers()) {
    Matrix z(current.rows(), layer.weights.rows());
    z.noalias() = current * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    current = apply_activation(layer.activation, z);
  }
  check_finite(current, "network output");
  return current;
}

GradientSet& GradientSet::operator+=(const GradientSet& other) {
  if (weights.size() != other.weights.size()) {
    throw ShapeError("cannot add gradient sets of different depth");
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    weights[k] += other.weights[k];
    biases[k] += other.biases[k];
  }
  if (input.size() == other.input.size() && input.rows() == other.input.rows()) {
    input += other.input;
  }
  return *this;
}

bool GradientSet::all_finite() const {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!weights[k].allFinite() || !biases[k].allFinite()) return false;
  }
  return input.allFinite();
}

GradientSet backward(const Mlp& net, const ForwardCache& cache, const Matrix& upstream) {
  if (cache.net != &net || cache.revision != net.revision() ||
      cache.inputs.size() != net.depth() || cache.pre.size() != net.depth()) {
    throw ShapeError("backward: cache is stale or was produced by a different network");
  }
  if (upstream.rows() != cache.output.rows() || upstream.cols() != cache.output.cols()) {
    throw ShapeError("backward: upstream shape does not match forward output");
  }
  const std::size_t depth = net.depth();
  GradientSet grads;
  grads.weights.resize(depth);
  grads.biases.resize(depth);

  Matrix delta = upstream;  // d/d(post-activation) of the current layer
  for (std::size_t idx = depth; idx-- > 0;) {
    const auto& layer = net.layer(idx);
    const Matrix& pre = cache.pre[idx];
    const Matrix& post = (idx + 1 < depth) ? cache.inputs[idx + 1] : cache.output;
    Matrix dz = delta.cwiseProduct(activation_derivative(layer.activation, pre, post));
    grads.weights[idx].noalias() = dz.transpose() * cache.inputs[idx];
    grads.biases[idx] = dz.colwise().sum().transpose();
    Matrix dx(dz.rows(), layer.weights.cols());
    dx.noalias() = dz * layer.weights;
    delta = std::move(dx);
  }
  grads.input = std::move(delta);
  return grads;
}

AdamState make_adam_state(const Mlp& net, double learning_rate, double beta1, double beta2,
                          double epsilon) {
  if (!(learning_rate > 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
      !(epsilon > 0.0)) {
    throw DomainError("invalid Adam hyperparameters");
  }
  AdamState s;
  s.learning_rate = learning_rate;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  for (const auto& l : net.layers()) {
    s.m_weights.push_back(Matrix::Zero(l.weights.rows(), l.weights.cols()));
    s.v_weights.push_back(Matrix::Zero(l.weights.rows(), l.weights.cols()));
    s.m_biases.push_back(Vector::Zero(l.bias.size()));
    s.v_biases.push_back(Vector::Zero(l.bias.size()));
  }
  return s;
}

void adam_step(Mlp& net, const GradientSet& grads, AdamState& state) {
  const std::size_t depth = net.depth();
  if (grads.weights.size() != depth || grads.biases.size() != depth ||
      state.m_weights.size() != depth || state.m_biases.size() != depth) {
    throw ShapeError("adam_step: gradient/state depth does not match the network");
  }
  for (std::size_t k = 0; k < depth; ++k) {
    const auto& l = net.layer(k);
    if (grads.weights[k].rows() != l.weights.rows() || grads.weights[k].cols() != l.weights.cols() ||
        grads.biases[k].size() != l.bias.size() ||
        state.m_weights[k].rows() != l.weights.rows() ||
        state.m_weights[k].cols() != l.weights.cols()) {
      throw ShapeError("adam_step: shape mismatch in layer " + std::to_string(k));
    }
    if (!grads.weights[k].allFinite() || !grads.biases[k].allFinite()) {
      throw NumericError("adam_step: non-finite gradient in layer " + std::to_string(k));
    }
  }

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double lr = state.learning_rate;
  const double eps = state.epsilon;

  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m.array() = b1 * m.array() + (1.0 - b1) * g.array();
    v.array() = b2 * v.array() + (1.0 - b2) * g.array().square();
    param.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
  };

  for (std::size_t k = 0; k < depth; ++k) {
    auto& l = net.mutable_layer(k);
    update(l.weights, grads.weights[k], state.m_weights[k], state.v_weights[k]);
    update(l.bias, grads.biases[k], state.m_biases[k], state.v_biases[k]);
  }
}

void clip_weights_in_place(Mlp& net, double c) {
  if (!(c > 0.0)) throw DomainError("clip bound must be positive");
  for (std::size_t k = 0; k < net.depth(); ++k) {
    auto& l = net.mutable_layer(k);
    l.weights = l.weights.cwiseMax(-c).cwiseMin(c);
    l.bias = l.bias.cwiseMax(-c).cwiseMin(c);
  }
}

Mlp clip_weights(Mlp net, double c) {
  clip_weights_in_place(net, c);
  return net;
}

std::vector<double> extract_spline_knots(const Mlp& net) {
  if (net.depth() != 2) {
    throw ShapeError("spline knots need exactly one hidden layer");
  }
  if (net.in_dim() != 1) {
    throw ShapeError("spline knots need a scalar-input network");
  }
  const auto& hidden = net.layer(0);
  if (!hidden.activation.is_relu_family()) {
    throw DomainError("spline knots need a ReLU-family hidden activation");
  }
  std::vector<double> knots;
  for (Eigen::Index j = 0; j < hidden.weights.rows(); ++j) {
    const double w = hidden.weights(j, 0);
    if (w != 0.0) {
      knots.push_back(-hidden.bias(j) / w);
    }
  }
  std::sort(knots.begin(), knots.end());
  return knots;
}

void save_mlp(std::ostream& out, const Mlp& net) {
  const auto old_precision = out.precision(17);
  out << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
  out << "layers " << net.depth() << '\n';
  for (const auto& l : net.layers()) {
    out << "layer " << l.in_dim() << ' ' << l.out_dim() << ' ' << l.activation.tag() << ' '
        << l.activation.alpha << '\n';
    for (Eigen::Index i = 0; i < l.weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.weights.cols(); ++j) {
        out << (j ? " " : "") << l.weights(i, j);
      }
      out << '\n';
    }
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) {
      out << (i ? " " : "") << l.bias(i);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

Mlp load_mlp(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kSnapshotMagic || version != kSnapshotVersion) {
    throw DataError("not a network snapshot (bad header)");
  }
  std::string word;
  std::size_t depth = 0;
  if (!(in >> word >> depth) || word != "layers" || depth == 0) {
    throw DataError("snapshot: missing layer count");
  }
  std::vector<DenseLayer> layers;
  for (std::size_t k = 0; k < depth; ++k) {
    std::size_t in_dim = 0, out_dim = 0;
    std::string tag;
    double alpha = 0.0;
    if (!(in >> word >> in_dim >> out_dim >> tag >> alpha) || word != "layer" || in_dim == 0 ||
        out_dim == 0) {
      throw DataError("snapshot: malformed layer header " + std::to_string(k));
    }
    DenseLayer l;
    l.activation = Activation::from_tag(tag, alpha);
    l.weights.resize(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
    l.bias.resize(static_cast<Eigen::Index>(out_dim));
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) {
      if (!(in >> l.weights.data()[i])) throw DataError("snapshot: truncated weights");
    }
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) {
      if (!(in >> l.bias(i))) throw DataError("snapshot: truncated bias");
    }
    layers.push_back(std::move(l));
  }
  return Mlp(std::move(layers));
}

}  // namespace cgan::nn
