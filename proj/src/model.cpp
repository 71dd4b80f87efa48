#include "cgan/model.hpp"

namespace cgan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

TrainResult build_and_train(const GanSetup& setup, const Matrix& data,
                            const std::optional<Matrix>& conditions, const Tracker& tracker) {
  const auto cond_dim = conditions ? static_cast<std::size_t>(conditions->cols()) : 0;
  GanSpec spec = make_gan_spec(setup.variant, static_cast<std::size_t>(data.cols()), cond_dim,
                               setup.noise_dim, setup.noise_dist, setup.arch, setup.train.seed);
  return train(std::move(spec), setup.train, data, conditions, tracker);
}

Matrix ScaledGenerator::to_original(const Matrix& generated) const {
  return data_scale ? prep::inverse_standardize(generated, *data_scale) : generated;
}

Matrix ScaledGenerator::scale_condition(const Matrix& condition) const {
  return condition_scale ? prep::apply_scale(condition, *condition_scale) : condition;
}

Matrix ScaledGenerator::sample(std::size_t n, const std::optional<Matrix>& condition,
                               Rng& rng) const {
  std::optional<Matrix> c;
  if (condition) c = scale_condition(*condition);
  return to_original(generate(spec, n, c, rng));
}

}  // namespace cgan
