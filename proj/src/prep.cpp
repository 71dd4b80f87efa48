#include "cgan/prep.hpp"

#include <cmath>

#include "cgan/errors.hpp"

namespace cgan::prep {

PanelData::PanelData(std::size_t samples, std::size_t window, std::size_t series,
                     std::vector<std::string> names)
    : samples_(samples), window_(window), series_(series), names_(std::move(names)),
      values_(samples * window * series, 0.0) {
  if (!names_.empty() && names_.size() != series_) {
    throw ShapeError("PanelData: series name count does not match series count");
  }
}

double& PanelData::at(std::size_t s, std::size_t t, std::size_t i) {
  return values_.at((s * window_ + t) * series_ + i);
}

double PanelData::at(std::size_t s, std::size_t t, std::size_t i) const {
  return values_.at((s * window_ + t) * series_ + i);
}

Matrix PanelData::sample(std::size_t s) const {
  if (s >= samples_) throw ShapeError("PanelData::sample: index out of range");
  Matrix m(static_cast<Eigen::Index>(window_), static_cast<Eigen::Index>(series_));
  for (std::size_t t = 0; t < window_; ++t) {
    for (std::size_t i = 0; i < series_; ++i) {
      m(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = at(s, t, i);
    }
  }
  return m;
}

Matrix PanelData::flatten() const {
  Matrix flat(static_cast<Eigen::Index>(samples_), static_cast<Eigen::Index>(window_ * series_));
  std::copy(values_.begin(), values_.end(), flat.data());
  return flat;
}

PanelData PanelData::unflatten(const Matrix& flat, std::size_t window, std::size_t series,
                               std::vector<std::string> names) {
  if (window == 0 || series == 0 || static_cast<std::size_t>(flat.cols()) != window * series) {
    throw ShapeError("unflatten: column count must equal window * series");
  }
  PanelData p(static_cast<std::size_t>(flat.rows()), window, series, std::move(names));
  std::copy(flat.data(), flat.data() + flat.size(), p.values_.begin());
  return p;
}

PanelData sliding_window(const Matrix& series, std::size_t window, std::vector<std::string> names) {
  const auto length = static_cast<std::size_t>(series.rows());
  if (window == 0) throw DomainError("sliding_window: window must be positive");
  if (window > length) throw DomainError("sliding_window: window longer than the series");
  const auto n_series = static_cast<std::size_t>(series.cols());
  PanelData p(length - window + 1, window, n_series, std::move(names));
  for (std::size_t s = 0; s < p.samples(); ++s) {
    for (std::size_t t = 0; t < window; ++t) {
      for (std::size_t i = 0; i < n_series; ++i) {
        p.at(s, t, i) = series(static_cast<Eigen::Index>(s + t), static_cast<Eigen::Index>(i));
      }
    }
  }
  return p;
}

Matrix dummy_encode(const std::vector<int>& labels, std::size_t k) {
  if (k == 0) throw DomainError("dummy_encode: k must be positive");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= k) {
      throw DomainError("dummy_encode: label " + std::to_string(labels[r]) + " outside [0, " +
                        std::to_string(k) + ")");
    }
    out(static_cast<Eigen::Index>(r), labels[r]) = 1.0;
  }
  return out;
}

std::vector<int> dummy_decode(const Matrix& codes) {
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(codes.rows()));
  for (Eigen::Index r = 0; r < codes.rows(); ++r) {
    int found = -1;
    for (Eigen::Index c = 0; c < codes.cols(); ++c) {
      if (codes(r, c) == 1.0) {
        if (found >= 0) throw DomainError("dummy_decode: row has more than one unit entry");
        found = static_cast<int>(c);
      } else if (codes(r, c) != 0.0) {
        throw DomainError("dummy_decode: row is not one-hot");
      }
    }
    if (found < 0) throw DomainError("dummy_decode: row has no unit entry");
    labels.push_back(found);
  }
  return labels;
}

ScaleParams fit_scale(const Matrix& data) {
  if (data.rows() == 0) throw DomainError("standardize: empty data");
  ScaleParams p;
  p.mean = data.colwise().mean().transpose();
  p.stddev = ((data.rowwise() - p.mean.transpose()).array().square().colwise().mean()).sqrt().transpose();
  for (Eigen::Index c = 0; c < p.stddev.size(); ++c) {
    if (!(p.stddev(c) > 0.0)) {
      throw DomainError("standardize: column " + std::to_string(c) + " is constant");
    }
  }
  return p;
}

Matrix apply_scale(const Matrix& data, const ScaleParams& params) {
  if (params.mean.size() != data.cols() || params.stddev.size() != data.cols()) {
    throw ShapeError("standardize: scale params do not match the column count");
  }
  return ((data.rowwise() - params.mean.transpose()).array().rowwise() /
          params.stddev.transpose().array())
      .matrix();
}

std::pair<Matrix, ScaleParams> standardize(const Matrix& data, const ScaleParams* params) {
  ScaleParams p = params ? *params : fit_scale(data);
  Matrix scaled = apply_scale(data, p);
  return {std::move(scaled), std::move(p)};
}

Matrix inverse_standardize(const Matrix& scaled, const ScaleParams& params) {
  if (params.mean.size() != scaled.cols() || params.stddev.size() != scaled.cols()) {
    throw ShapeError("inverse_standardize: scale params do not match the column count");
  }
  return ((scaled.array().rowwise() * params.stddev.transpose().array()).rowwise() +
          params.mean.transpose().array())
      .matrix();
}

ScaleParams tile_scale(const ScaleParams& per_series, std::size_t window) {
  ScaleParams out;
  const auto n = per_series.mean.size();
  out.mean.resize(n * static_cast<Eigen::Index>(window));
  out.stddev.resize(n * static_cast<Eigen::Index>(window));
  for (std::size_t t = 0; t < window; ++t) {
    out.mean.segment(static_cast<Eigen::Index>(t) * n, n) = per_series.mean;
    out.stddev.segment(static_cast<Eigen::Index>(t) * n, n) = per_series.stddev;
  }
  return out;
}

LaggedPairs lag_conditions(const Matrix& series, std::size_t lag) {
  const auto length = static_cast<std::size_t>(series.rows());
  if (lag >= length) throw DomainError("lag_conditions: lag must be shorter than the series");
  const auto n = static_cast<Eigen::Index>(length - lag);
  return {series.bottomRows(n), series.topRows(n)};
}

std::pair<PanelData, PanelData> split_condition_target(const PanelData& panel,
                                                       std::size_t cond_window) {
  if (cond_window == 0 || cond_window >= panel.window()) {
    throw DomainError("split_condition_target: need 0 < cond_window < window");
  }
  const std::size_t target_window = panel.window() - cond_window;
  PanelData cond(panel.samples(), cond_window, panel.series(), panel.series_names());
  PanelData target(panel.samples(), target_window, panel.series(), panel.series_names());
  for (std::size_t s = 0; s < panel.samples(); ++s) {
    for (std::size_t i = 0; i < panel.series(); ++i) {
      for (std::size_t t = 0; t < cond_window; ++t) cond.at(s, t, i) = panel.at(s, t, i);
      for (std::size_t t = 0; t < target_window; ++t) {
        target.at(s, t, i) = panel.at(s, cond_window + t, i);
      }
    }
  }
  return {std::move(cond), std::move(target)};
}

PanelData concat_time(const PanelData& first, const PanelData& second) {
  if (first.samples() != second.samples() || first.series() != second.series()) {
    throw ShapeError("concat_time: panels differ in sample or series count");
  }
  PanelData out(first.samples(), first.window() + second.window(), first.series(),
                first.series_names());
  for (std::size_t s = 0; s < first.samples(); ++s) {
    for (std::size_t i = 0; i < first.series(); ++i) {
      for (std::size_t t = 0; t < first.window(); ++t) out.at(s, t, i) = first.at(s, t, i);
      for (std::size_t t = 0; t < second.window(); ++t) {
        out.at(s, first.window() + t, i) = second.at(s, t, i);
      }
    }
  }
  return out;
}

StationarityTransform parse_transform(const std::string& s) {
  if (s == "level") return StationarityTransform::Level;
  if (s == "diff") return StationarityTransform::FirstDifference;
  if (s == "logdiff") return StationarityTransform::LogDifference;
  throw ConfigError("unknown stationarity transform '" + s + "' (level, diff, logdiff)");
}

std::string to_string(StationarityTransform t) {
  switch (t) {
    case StationarityTransform::Level: return "level";
    case StationarityTransform::FirstDifference: return "diff";
    case StationarityTransform::LogDifference: return "logdiff";
  }
  return "level";
}

Matrix make_stationary(const Matrix& series, const std::vector<StationarityTransform>& transforms) {
  if (transforms.size() != static_cast<std::size_t>(series.cols())) {
    throw ShapeError("make_stationary: need one transform per column");
  }
  if (series.rows() < 2) throw DomainError("make_stationary: need at least 2 rows");
  const Eigen::Index n = series.rows() - 1;
  Matrix out(n, series.cols());
  for (Eigen::Index c = 0; c < series.cols(); ++c) {
    for (Eigen::Index t = 0; t < n; ++t) {
      const double prev = series(t, c);
      const double cur = series(t + 1, c);
      switch (transforms[static_cast<std::size_t>(c)]) {
        case StationarityTransform::Level:
          out(t, c) = cur;
          break;
        case StationarityTransform::FirstDifference:
          out(t, c) = cur - prev;
          break;
        case StationarityTransform::LogDifference:
          if (!(prev > 0.0 && cur > 0.0)) {
            throw DomainError("make_stationary: log difference needs positive values");
          }
          out(t, c) = std::log(cur) - std::log(prev);
          break;
      }
    }
  }
  return out;
}

}  // namespace cgan::prep
