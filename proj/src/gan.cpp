#include "cgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"

namespace cgan {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": real and fake critiques differ in shape");
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite discriminator output");
}

// Epoch-style minibatches: a shuffled permutation consumed in order and
// reshuffled when exhausted.
class BatchSampler {
 public:
  BatchSampler(std::size_t n, Rng& rng) : order_(n), rng_(rng) {
    std::iota(order_.begin(), order_.end(), 0);
    reshuffle();
  }

  std::vector<Eigen::Index> next(std::size_t batch) {
    std::vector<Eigen::Index> idx;
    idx.reserve(batch);
    while (idx.size() < batch) {
      if (pos_ == order_.size()) reshuffle();
      idx.push_back(static_cast<Eigen::Index>(order_[pos_++]));
    }
    return idx;
  }

 private:
  void reshuffle() {
    std::shuffle(order_.begin(), order_.end(), rng_);
    pos_ = 0;
  }

  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
  Rng& rng_;
};

Matrix take_rows(const Matrix& m, const std::vector<Eigen::Index>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  }
  return out;
}

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

std::string to_string(GanVariant v) {
  switch (v) {
    case GanVariant::GAN: return "gan";
    case GanVariant::CGAN: return "cgan";
    case GanVariant::WGAN: return "wgan";
    case GanVariant::CWGAN: return "cwgan";
  }
  return "gan";
}

GanVariant parse_variant(const std::string& s) {
  if (s == "gan") return GanVariant::GAN;
  if (s == "cgan") return GanVariant::CGAN;
  if (s == "wgan") return GanVariant::WGAN;
  if (s == "cwgan") return GanVariant::CWGAN;
  throw ConfigError("unknown GAN variant '" + s + "'");
}

std::string to_string(NoiseDist d) {
  return d == NoiseDist::Uniform ? "uniform" : "normal";
}

NoiseDist parse_noise_dist(const std::string& s) {
  if (s == "uniform") return NoiseDist::Uniform;
  if (s == "normal") return NoiseDist::StandardNormal;
  throw ConfigError("unknown noise distribution '" + s + "'");
}

void GanSpec::validate() const {
  if (generator.empty() || discriminator.empty()) {
    throw ShapeError("GanSpec needs both a generator and a discriminator");
  }
  if (noise_dim == 0) throw DomainError("noise_dim must be positive");
  if (is_conditional(variant) != (condition_dim > 0)) {
    throw DomainError("conditional variants need condition_dim > 0, unconditional ones 0");
  }
  if (generator.in_dim() != noise_dim + condition_dim) {
    throw ShapeError("generator input width must equal noise_dim + condition_dim");
  }
  if (discriminator.in_dim() != data_dim() + condition_dim) {
    throw ShapeError("discriminator input width must equal data_dim + condition_dim");
  }
  if (discriminator.out_dim() != 1) throw ShapeError("discriminator must have a scalar head");
  const auto head = discriminator.layers().back().activation.kind;
  if (is_wasserstein(variant) && head != nn::ActivationKind::Identity) {
    throw DomainError("WGAN/CWGAN critics need an identity head");
  }
  if (!is_wasserstein(variant) && head != nn::ActivationKind::Sigmoid) {
    throw DomainError("GAN/CGAN discriminators need a sigmoid head");
  }
}

GanSpec make_gan_spec(GanVariant variant, std::size_t data_dim, std::size_t condition_dim,
                      std::size_t noise_dim, NoiseDist noise_dist,
                      const ArchitectureOptions& arch, std::uint64_t seed) {
  Rng rng(seed);
  auto build = [&](std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                   nn::Activation head) {
    std::vector<std::size_t> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    std::vector<nn::Activation> acts(hidden.size(), arch.hidden_activation);
    acts.push_back(head);
    return nn::init_mlp(sizes, acts, rng);
  };
  GanSpec spec;
  spec.variant = variant;
  spec.noise_dim = noise_dim;
  spec.noise_dist = noise_dist;
  spec.condition_dim = condition_dim;
  spec.generator =
      build(noise_dim + condition_dim, arch.generator_hidden, data_dim, nn::Activation::identity());
  spec.discriminator = build(data_dim + condition_dim, arch.discriminator_hidden, 1,
                             is_wasserstein(variant) ? nn::Activation::identity()
                                                     : nn::Activation::sigmoid());
  spec.validate();
  return spec;
}

void TrainConfig::validate() const {
  if (n_dis < 1) throw DomainError("n_dis must be at least 1");
  if (!(clip_c > 0.0)) throw DomainError("clip_c must be positive");
  if (batch_size < 2) throw DomainError("batch_size must be at least 2");
  if (!(learning_rate > 0.0)) throw DomainError("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw DomainError("Adam betas must lie in [0, 1)");
  }
}

void TrainingTrace::write_csv(std::ostream& out) const {
  std::vector<std::string> header{"iteration", "d_loss", "g_loss"};
  header.insert(header.end(), stat_names.begin(), stat_names.end());
  CsvWriter w(out);
  w.header(header);
  for (const auto& c : checkpoints) {
    std::vector<double> row{static_cast<double>(c.iteration), c.d_loss, c.g_loss};
    row.insert(row.end(), c.stats.begin(), c.stats.end());
    w.row(row);
  }
}

Matrix sample_noise(std::size_t n, std::size_t dim, NoiseDist dist, Rng& rng) {
  Matrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  if (dist == NoiseDist::Uniform) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = u(rng);
  } else {
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
  }
  return z;
}

Matrix sample_noise(std::size_t n, const GanSpec& spec, Rng& rng) {
  return sample_noise(n, spec.noise_dim, spec.noise_dist, rng);
}

double discriminator_loss(GanVariant variant, const Matrix& d_real, const Matrix& d_fake) {
  require_same_shape(d_real, d_fake, "discriminator_loss");
  require_finite(d_real, "discriminator_loss");
  require_finite(d_fake, "discriminator_loss");
  if (d_real.size() == 0) throw ShapeError("discriminator_loss: empty batch");
  if (is_wasserstein(variant)) {
    return -d_real.mean() + d_fake.mean();
  }
  const double real_term = d_real.unaryExpr([](double p) { return std::log(clamp_prob(p)); }).mean();
  const double fake_term =
      d_fake.unaryExpr([](double p) { return std::log(1.0 - clamp_prob(p)); }).mean();
  return -real_term - fake_term;
}

double generator_loss(GanVariant variant, const Matrix& d_fake) {
  require_finite(d_fake, "generator_loss");
  if (d_fake.size() == 0) throw ShapeError("generator_loss: empty batch");
  if (is_wasserstein(variant)) {
    return -d_fake.mean();
  }
  return d_fake.unaryExpr([](double p) { return std::log(1.0 - clamp_prob(p)); }).mean();
}

// The clamp is treated as the identity for differentiation: the derivative of
// log is evaluated at the clamped point, which keeps gradients finite.
std::pair<Matrix, Matrix> discriminator_loss_gradient(GanVariant variant, const Matrix& d_real,
                                                      const Matrix& d_fake) {
  require_same_shape(d_real, d_fake, "discriminator_loss_gradient");
  const double n = static_cast<double>(d_real.size());
  if (is_wasserstein(variant)) {
    return {Matrix::Constant(d_real.rows(), d_real.cols(), -1.0 / n),
            Matrix::Constant(d_fake.rows(), d_fake.cols(), 1.0 / n)};
  }
  Matrix g_real = d_real.unaryExpr([n](double p) { return -1.0 / (n * clamp_prob(p)); });
  Matrix g_fake = d_fake.unaryExpr([n](double p) { return 1.0 / (n * (1.0 - clamp_prob(p))); });
  return {std::move(g_real), std::move(g_fake)};
}

Matrix generator_loss_gradient(GanVariant variant, const Matrix& d_fake) {
  const double n = static_cast<double>(d_fake.size());
  if (is_wasserstein(variant)) {
    return Matrix::Constant(d_fake.rows(), d_fake.cols(), -1.0 / n);
  }
  return d_fake.unaryExpr([n](double p) { return -1.0 / (n * (1.0 - clamp_prob(p))); });
}

Matrix concat_columns(const Matrix& left, const Matrix& right) {
  if (right.cols() == 0) return left;
  if (right.rows() != left.rows() && right.rows() != 1) {
    throw ShapeError("concat_columns: row counts differ");
  }
  Matrix out(left.rows(), left.cols() + right.cols());
  out.leftCols(left.cols()) = left;
  if (right.rows() == left.rows()) {
    out.rightCols(right.cols()) = right;
  } else {
    out.rightCols(right.cols()) = right.replicate(left.rows(), 1);
  }
  return out;
}

TrainResult train(GanSpec spec, const TrainConfig& cfg, const Matrix& data,
                  const std::optional<Matrix>& conditions, const Tracker& tracker) {
  spec.validate();
  cfg.validate();
  const bool conditional = is_conditional(spec.variant);
  if (static_cast<std::size_t>(data.cols()) != spec.data_dim()) {
    throw ShapeError("train: data width does not match the generator output");
  }
  if (data.rows() == 0) throw ShapeError("train: empty training data");
  if (conditional != conditions.has_value()) {
    throw ShapeError(conditional ? "train: conditional variant needs conditions"
                                 : "train: unconditional variant got conditions");
  }
  if (conditional) {
    if (conditions->rows() != data.rows()) {
      throw ShapeError("train: data and conditions differ in row count");
    }
    if (static_cast<std::size_t>(conditions->cols()) != spec.condition_dim) {
      throw ShapeError("train: condition width does not match condition_dim");
    }
  }

  TrainResult result;
  Rng rng(cfg.seed);
  auto d_state = nn::make_adam_state(spec.discriminator, cfg.learning_rate, cfg.beta1, cfg.beta2);
  auto g_state = nn::make_adam_state(spec.generator, cfg.learning_rate, cfg.beta1, cfg.beta2);
  const std::size_t batch = std::min<std::size_t>(cfg.batch_size, static_cast<std::size_t>(data.rows()));
  const auto b = static_cast<Eigen::Index>(batch);
  const std::size_t data_dim = spec.data_dim();
  BatchSampler sampler(static_cast<std::size_t>(data.rows()), rng);
  const Matrix no_conditions(b, 0);

  double d_loss = 0.0;
  double g_loss = 0.0;
  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    for (std::size_t k = 0; k < cfg.n_dis; ++k) {
      const auto idx = sampler.next(batch);
      const Matrix x = take_rows(data, idx);
      const Matrix y = conditional ? take_rows(*conditions, idx) : no_conditions;
      const Matrix z = sample_noise(batch, spec, rng);
      const Matrix fake = nn::predict(spec.generator, concat_columns(z, y));

      const Matrix d_in = stack_rows(concat_columns(x, y), concat_columns(fake, y));
      const auto cache = nn::forward(spec.discriminator, d_in);
      const Matrix d_real = cache.output.topRows(b);
      const Matrix d_fake = cache.output.bottomRows(b);
      d_loss = discriminator_loss(spec.variant, d_real, d_fake);
      if (!std::isfinite(d_loss)) {
        throw NumericError("train: non-finite discriminator loss at iteration " + std::to_string(it));
      }
      auto [g_real, g_fake] = discriminator_loss_gradient(spec.variant, d_real, d_fake);
      const auto grads = nn::backward(spec.discriminator, cache, stack_rows(g_real, g_fake));
      nn::adam_step(spec.discriminator, grads, d_state);
      nn::clip_weights_in_place(spec.discriminator, cfg.clip_c);
    }

    const auto idx = sampler.next(batch);
    const Matrix y = conditional ? take_rows(*conditions, idx) : no_conditions;
    const Matrix z = sample_noise(batch, spec, rng);
    const auto g_cache = nn::forward(spec.generator, concat_columns(z, y));
    const auto d_cache = nn::forward(spec.discriminator, concat_columns(g_cache.output, y));
    g_loss = generator_loss(spec.variant, d_cache.output);
    if (!std::isfinite(g_loss)) {
      throw NumericError("train: non-finite generator loss at iteration " + std::to_string(it));
    }
    // Discriminator gradients are computed only to reach its input; its
    // parameters are not updated here.
    const auto d_grads =
        nn::backward(spec.discriminator, d_cache, generator_loss_gradient(spec.variant, d_cache.output));
    const Matrix dx = d_grads.input.leftCols(static_cast<Eigen::Index>(data_dim));
    const auto g_grads = nn::backward(spec.generator, g_cache, dx);
    nn::adam_step(spec.generator, g_grads, g_state);

    const bool checkpoint =
        cfg.track_every > 0 && (it % cfg.track_every == 0 || it == cfg.iterations);
    if (checkpoint) {
      Checkpoint cp;
      cp.iteration = it;
      cp.d_loss = d_loss;
      cp.g_loss = g_loss;
      if (tracker) {
        const auto stats = tracker(spec, it);
        if (result.trace.checkpoints.empty()) {
          for (const auto& [name, value] : stats) result.trace.stat_names.push_back(name);
        } else if (stats.size() != result.trace.stat_names.size()) {
          throw DomainError("train: tracker changed its statistic set");
        }
        for (const auto& [name, value] : stats) cp.stats.push_back(value);
      }
      result.trace.checkpoints.push_back(std::move(cp));
    }
  }
  result.spec = std::move(spec);
  return result;
}

Matrix generate_with_noise(const GanSpec& spec, const Matrix& noise,
                           const std::optional<Matrix>& conditions) {
  if (static_cast<std::size_t>(noise.cols()) != spec.noise_dim) {
    throw ShapeError("generate: noise width does not match noise_dim");
  }
  if (is_conditional(spec.variant)) {
    if (!conditions) throw ShapeError("generate: conditional spec needs conditions");
    if (static_cast<std::size_t>(conditions->cols()) != spec.condition_dim) {
      throw ShapeError("generate: condition width does not match condition_dim");
    }
    if (conditions->rows() != noise.rows() && conditions->rows() != 1) {
      throw ShapeError("generate: need one condition row per sample, or a single row");
    }
    if (noise.rows() == 0) return Matrix(0, static_cast<Eigen::Index>(spec.data_dim()));
    return nn::predict(spec.generator, concat_columns(noise, *conditions));
  }
  if (conditions && conditions->cols() > 0) {
    throw ShapeError("generate: unconditional spec got conditions");
  }
  if (noise.rows() == 0) return Matrix(0, static_cast<Eigen::Index>(spec.data_dim()));
  return nn::predict(spec.generator, noise);
}

Matrix generate(const GanSpec& spec, std::size_t n, const std::optional<Matrix>& conditions,
                Rng& rng) {
  if (is_conditional(spec.variant) && conditions && conditions->rows() != 1 &&
      static_cast<std::size_t>(conditions->rows()) != n) {
    throw ShapeError("generate: need n condition rows, or a single row to broadcast");
  }
  const Matrix z = sample_noise(n, spec, rng);
  return generate_with_noise(spec, z, conditions);
}

}  // namespace cgan
