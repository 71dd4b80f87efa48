#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cgan/types.hpp"

// Data shaping: panels, dummy codes, rescaling, lagged conditions.
namespace cgan::prep {

/// Sample x Time x Series array. Flattened rows use time-major layout:
/// column t * series + i holds series i at time t.
class PanelData {
 public:
  PanelData() = default;
  PanelData(std::size_t samples, std::size_t window, std::size_t series,
            std::vector<std::string> names = {});

  std::size_t samples() const { return samples_; }
  std::size_t window() const { return window_; }
  std::size_t series() const { return series_; }
  const std::vector<std::string>& series_names() const { return names_; }

  double& at(std::size_t s, std::size_t t, std::size_t i);
  double at(std::size_t s, std::size_t t, std::size_t i) const;

  /// One sample as a Time x Series matrix.
  Matrix sample(std::size_t s) const;

  /// samples x (window * series), time-major.
  Matrix flatten() const;
  static PanelData unflatten(const Matrix& flat, std::size_t window, std::size_t series,
                             std::vector<std::string> names = {});

  bool operator==(const PanelData&) const = default;

 private:
  std::size_t samples_ = 0;
  std::size_t window_ = 0;
  std::size_t series_ = 0;
  std::vector<std::string> names_;
  std::vector<double> values_;
};

/// Overlapping stride-1 windows: sample s holds rows [s, s + window).
PanelData sliding_window(const Matrix& series, std::size_t window,
                         std::vector<std::string> names = {});

/// One-hot rows; every label must lie in [0, k).
Matrix dummy_encode(const std::vector<int>& labels, std::size_t k);
/// Index of the unit entry in each one-hot row.
std::vector<int> dummy_decode(const Matrix& codes);

struct ScaleParams {
  Vector mean;
  Vector stddev;  // population convention, all > 0
};

/// Fits per-column mean/stddev (population) from `data`.
ScaleParams fit_scale(const Matrix& data);

/// Standardizes with `params`, fitting them when absent.
std::pair<Matrix, ScaleParams> standardize(const Matrix& data, const ScaleParams* params = nullptr);
Matrix apply_scale(const Matrix& data, const ScaleParams& params);
Matrix inverse_standardize(const Matrix& scaled, const ScaleParams& params);

/// Repeats per-series params across the time steps of a time-major flat panel.
ScaleParams tile_scale(const ScaleParams& per_series, std::size_t window);

struct LaggedPairs {
  Matrix targets;     // rows [lag, end)
  Matrix conditions;  // rows [0, end - lag)
};

/// Aligns each row with the row `lag` steps earlier.
LaggedPairs lag_conditions(const Matrix& series, std::size_t lag);

/// Splits along time: the first `cond_window` steps are the condition panel.
std::pair<PanelData, PanelData> split_condition_target(const PanelData& panel,
                                                       std::size_t cond_window);

/// Concatenates two panels along time (inverse of split_condition_target).
PanelData concat_time(const PanelData& first, const PanelData& second);

enum class StationarityTransform { Level, FirstDifference, LogDifference };

StationarityTransform parse_transform(const std::string& s);
std::string to_string(StationarityTransform t);

/// Level keeps the series; the difference transforms drop the first row.
/// Applies the same row alignment to every column, one transform per column.
Matrix make_stationary(const Matrix& series, const std::vector<StationarityTransform>& transforms);

}  // namespace cgan::prep
