#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cgan/gan.hpp"
#include "cgan/prep.hpp"
#include "cgan/types.hpp"

namespace cgan {

/// Independent sub-stream seed for a named stage of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

/// Everything needed to build and train one adversarial pair.
struct GanSetup {
  GanVariant variant = GanVariant::CGAN;
  ArchitectureOptions arch;
  std::size_t noise_dim = 30;
  NoiseDist noise_dist = NoiseDist::StandardNormal;
  TrainConfig train;
};

/// Builds the pair for the given data/condition widths (initialized from
/// train.seed) and trains it.
TrainResult build_and_train(const GanSetup& setup, const Matrix& data,
                            const std::optional<Matrix>& conditions, const Tracker& tracker = {});

/// A trained generator plus the rescaling applied to its data and conditions.
struct ScaledGenerator {
  GanSpec spec;
  std::optional<prep::ScaleParams> data_scale;
  std::optional<prep::ScaleParams> condition_scale;

  /// n draws in original data units for one condition row in original units.
  Matrix sample(std::size_t n, const std::optional<Matrix>& condition, Rng& rng) const;
  /// Maps a generator-space batch back to original units.
  Matrix to_original(const Matrix& generated) const;
  /// Maps a condition row from original units to generator space.
  Matrix scale_condition(const Matrix& condition) const;
};

}  // namespace cgan
