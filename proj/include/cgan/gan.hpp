#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgan/nn.hpp"
#include "cgan/types.hpp"

namespace cgan {

enum class GanVariant { GAN, CGAN, WGAN, CWGAN };
enum class NoiseDist { Uniform, StandardNormal };

std::string to_string(GanVariant v);
GanVariant parse_variant(const std::string& s);
std::string to_string(NoiseDist d);
NoiseDist parse_noise_dist(const std::string& s);

/// GAN/CGAN use a sigmoid discriminator head and log-likelihood costs;
/// WGAN/CWGAN use an unconstrained critic and Wasserstein costs.
inline bool is_wasserstein(GanVariant v) { return v == GanVariant::WGAN || v == GanVariant::CWGAN; }
inline bool is_conditional(GanVariant v) { return v == GanVariant::CGAN || v == GanVariant::CWGAN; }

/// Sigmoid outputs are clamped to [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-7;

/// The adversarial pair. Generator input is [z | y], discriminator input [x | y].
struct GanSpec {
  nn::Mlp generator;
  nn::Mlp discriminator;
  std::size_t noise_dim = 0;
  NoiseDist noise_dist = NoiseDist::Uniform;
  std::size_t condition_dim = 0;
  GanVariant variant = GanVariant::GAN;

  std::size_t data_dim() const { return generator.out_dim(); }
  /// Throws ShapeError/DomainError when the invariants do not hold.
  void validate() const;
};

struct ArchitectureOptions {
  std::vector<std::size_t> generator_hidden{100, 100, 100};
  std::vector<std::size_t> discriminator_hidden{100, 100, 100};
  nn::Activation hidden_activation = nn::Activation::leaky_relu(0.1);
};

/// Builds G (hidden activations, identity output) and D (hidden activations,
/// sigmoid or identity head depending on the variant).
GanSpec make_gan_spec(GanVariant variant, std::size_t data_dim, std::size_t condition_dim,
                      std::size_t noise_dim, NoiseDist noise_dist,
                      const ArchitectureOptions& arch, std::uint64_t seed);

struct TrainConfig {
  std::size_t iterations = 10000;
  std::size_t n_dis = 1;
  double clip_c = 0.01;
  std::size_t batch_size = 128;
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.9;
  std::size_t track_every = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

using NamedStat = std::pair<std::string, double>;

struct Checkpoint {
  std::size_t iteration = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
  std::vector<double> stats;  // aligned with TrainingTrace::stat_names
};

struct TrainingTrace {
  std::vector<std::string> stat_names;
  std::vector<Checkpoint> checkpoints;

  /// Columns: iteration, d_loss, g_loss, then one column per stat name.
  void write_csv(std::ostream& out) const;
};

/// Called synchronously at each checkpoint with the current networks.
/// Must return the same stat names, in the same order, on every call.
using Tracker = std::function<std::vector<NamedStat>(const GanSpec&, std::size_t iteration)>;

struct TrainResult {
  GanSpec spec;
  TrainingTrace trace;
};

Matrix sample_noise(std::size_t n, const GanSpec& spec, Rng& rng);
Matrix sample_noise(std::size_t n, std::size_t dim, NoiseDist dist, Rng& rng);

/// Loss minimized by the discriminator.
double discriminator_loss(GanVariant variant, const Matrix& d_real, const Matrix& d_fake);
/// Loss minimized by the generator (saturating form for GAN/CGAN).
double generator_loss(GanVariant variant, const Matrix& d_fake);

/// d(discriminator_loss)/d(d_real) and d/d(d_fake).
std::pair<Matrix, Matrix> discriminator_loss_gradient(GanVariant variant, const Matrix& d_real,
                                                      const Matrix& d_fake);
Matrix generator_loss_gradient(GanVariant variant, const Matrix& d_fake);

/// Runs cfg.iterations outer steps: n_dis discriminator updates (each followed
/// by weight clipping) and one generator update through the frozen
/// discriminator. `conditions` must be present iff the variant is conditional.
TrainResult train(GanSpec spec, const TrainConfig& cfg, const Matrix& data,
                  const std::optional<Matrix>& conditions, const Tracker& tracker = {});

/// n samples of G([z | y]). A single condition row is broadcast to n rows.
Matrix generate(const GanSpec& spec, std::size_t n, const std::optional<Matrix>& conditions,
                Rng& rng);

/// G([noise | conditions]) for caller-supplied noise (rows must agree after broadcast).
Matrix generate_with_noise(const GanSpec& spec, const Matrix& noise,
                           const std::optional<Matrix>& conditions);

/// Appends condition columns: [left | right]. A single right row is broadcast.
Matrix concat_columns(const Matrix& left, const Matrix& right);

}  // namespace cgan
