#include "cgan/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cgan/errors.hpp"

namespace cgan::synth {

namespace {

// Draws one mixing factor sqrt(df / chi2_df).
double t_mixing(double df, Rng& rng) {
  std::chi_squared_distribution<double> chi2(df);
  double w = 0.0;
  do {
    w = chi2(rng);
  } while (w <= 0.0);
  return std::sqrt(df / w);
}

Vector standard_normal(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
  return v;
}

// Cholesky factor of the t scale matrix for a target covariance.
Matrix t_scale_factor(const Matrix& cov, double df) { return cholesky(cov * ((df - 2.0) / df)); }

bool is_zero(const Matrix& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

Matrix cholesky(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw ShapeError("cholesky needs a non-empty square matrix");
  }
  if (!cov.allFinite()) throw NumericError("cholesky: non-finite input");
  const Eigen::Index n = cov.rows();
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-12 * scale) {
        throw NumericError("cholesky: matrix is not symmetric");
      }
    }
  }
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = cov(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      throw NumericError("cholesky: matrix is not positive definite (pivot " + std::to_string(j) + ")");
    }
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = cov(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

void MvTSpec::validate() const {
  if (mean.size() == 0) throw ShapeError("MvTSpec: empty mean");
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw ShapeError("MvTSpec: covariance does not match the mean dimension");
  }
  if (!(df > 2.0)) throw DomainError("MvTSpec: df must exceed 2 for the covariance to exist");
}

Matrix sample_mvt(const MvTSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n == 0) throw DomainError("sample_mvt: n must be at least 1");
  const Matrix l = t_scale_factor(spec.cov, spec.df);
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const Vector g = standard_normal(spec.dim(), rng);
    const double w = t_mixing(spec.df, rng);
    out.row(i) = (spec.mean + l * g * w).transpose();
  }
  return out;
}

void VarSpec::validate() const {
  if (a.size() == 0 || c.size() != a.size()) throw ShapeError("VarSpec: c and a must match");
  noise.validate();
  if (noise.dim() != dim()) throw ShapeError("VarSpec: noise dimension does not match");
  if (noise_mode == NoiseMode::Constant) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (!(std::abs(a(i)) < 1.0)) throw DomainError("VarSpec: |a_i| must be < 1 for stationarity");
    }
  }
}

Matrix var_noise_cov(const VarSpec& spec, const Vector& x_prev) {
  switch (spec.noise_mode) {
    case NoiseMode::Constant:
      return spec.noise.cov;
    case NoiseMode::SumAbsScale:
      return spec.noise.cov * x_prev.cwiseAbs().sum();
    case NoiseMode::PerSeriesAbsScale: {
      const Vector d = x_prev.cwiseAbs().cwiseSqrt();
      return d.asDiagonal() * spec.noise.cov * d.asDiagonal();
    }
  }
  return spec.noise.cov;
}

namespace {

// One draw of the VAR noise given the previous state, reusing the base factor.
Vector var_noise_draw(const VarSpec& spec, const Matrix& base_factor, const Vector& x_prev,
                      Rng& rng) {
  const Vector g = standard_normal(spec.dim(), rng);
  const double w = t_mixing(spec.noise.df, rng);
  switch (spec.noise_mode) {
    case NoiseMode::Constant:
      return base_factor * g * w;
    case NoiseMode::SumAbsScale:
      return std::sqrt(x_prev.cwiseAbs().sum()) * (base_factor * g * w);
    case NoiseMode::PerSeriesAbsScale:
      return x_prev.cwiseAbs().cwiseSqrt().asDiagonal() * (base_factor * g * w);
  }
  return base_factor * g * w;
}

}  // namespace

Matrix simulate_var1(const VarSpec& spec, std::size_t n, Rng& rng, std::size_t burn_in) {
  spec.validate();
  if (n == 0) throw DomainError("simulate_var1: n must be at least 1");
  const Matrix base = t_scale_factor(spec.noise.cov, spec.noise.df);
  // Start at the stationary mean when it exists; the state-scaled modes would
  // stay at the origin forever if started there, so they start at ones.
  Vector x = spec.noise_mode == NoiseMode::Constant
                 ? Vector(spec.c.array() / (1.0 - spec.a.array()))
                 : Vector(Vector::Ones(static_cast<Eigen::Index>(spec.dim())));
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim()));
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    const Vector eps = var_noise_draw(spec, base, x, rng);
    x = spec.c + spec.a.cwiseProduct(x) + eps;
    if (!x.allFinite()) throw NumericError("simulate_var1: process diverged");
    if (t >= burn_in) out.row(static_cast<Eigen::Index>(t - burn_in)) = x.transpose();
  }
  return out;
}

RegionSeries simulate_region_switching(const RegionSpec& spec, Rng& rng, std::size_t burn_in) {
  if (spec.regions.empty()) throw DomainError("simulate_region_switching: no regions");
  std::size_t total = 0;
  for (const auto& [var, count] : spec.regions) {
    if (count == 0) throw DomainError("simulate_region_switching: region sample counts must be >= 1");
    total += count;
  }
  const auto dim = spec.regions.front().first.dim();
  RegionSeries out;
  out.series.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dim));
  out.labels.reserve(total);
  Eigen::Index row = 0;
  int label = 0;
  for (const auto& [var, count] : spec.regions) {
    if (var.dim() != dim) throw ShapeError("simulate_region_switching: regions differ in dimension");
    const Matrix seg = simulate_var1(var, count, rng, burn_in);
    out.series.middleRows(row, seg.rows()) = seg;
    row += seg.rows();
    out.labels.insert(out.labels.end(), count, label);
    ++label;
  }
  return out;
}

void GarchSpec::validate() const {
  if (c.size() == 0 || a.size() != c.size() || b.size() != c.size()) {
    throw ShapeError("GarchSpec: c, a, b must have equal length");
  }
  if (!(df > 2.0)) throw DomainError("GarchSpec: df must exceed 2");
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!(c(i) > 0.0) || a(i) < 0.0 || b(i) < 0.0) {
      throw DomainError("GarchSpec: need c > 0 and a, b >= 0");
    }
    if (!(a(i) + b(i) < 1.0)) throw DomainError("GarchSpec: a + b must be < 1");
  }
}

Vector GarchSpec::unconditional_variance() const {
  return (c.array() / (1.0 - a.array() - b.array())).matrix();
}

Vector garch_next_variance(const GarchSpec& spec, const Vector& x_prev, const Vector& sigma2_prev) {
  return spec.c + spec.a.cwiseProduct(x_prev.cwiseAbs2()) + spec.b.cwiseProduct(sigma2_prev);
}

namespace {

Vector garch_draw(const Vector& sigma2, double df, Rng& rng) {
  const Vector g = standard_normal(static_cast<std::size_t>(sigma2.size()), rng);
  const double w = t_mixing(df, rng);
  return (sigma2 * ((df - 2.0) / df)).cwiseSqrt().cwiseProduct(g) * w;
}

}  // namespace

GarchSeries simulate_garch(const GarchSpec& spec, std::size_t n, Rng& rng, std::size_t burn_in) {
  spec.validate();
  if (n == 0) throw DomainError("simulate_garch: n must be at least 1");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(spec.dim());
  GarchSeries out{Matrix(rows, cols), Matrix(rows, cols)};
  Vector sigma2 = spec.unconditional_variance();
  Vector x = garch_draw(sigma2, spec.df, rng);
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    sigma2 = garch_next_variance(spec, x, sigma2);
    x = garch_draw(sigma2, spec.df, rng);
    if (t >= burn_in) {
      const auto r = static_cast<Eigen::Index>(t - burn_in);
      out.x.row(r) = x.transpose();
      out.sigma2.row(r) = sigma2.transpose();
    }
  }
  return out;
}

LabeledSamples gaussian_mixture_clusters(const MixtureSpec& spec, Rng& rng) {
  if (spec.components.empty()) throw DomainError("gaussian_mixture_clusters: no components");
  const auto dim = spec.components.front().mean.size();
  std::size_t total = 0;
  for (const auto& comp : spec.components) {
    if (comp.mean.size() != dim || comp.cov.rows() != dim || comp.cov.cols() != dim) {
      throw ShapeError("gaussian_mixture_clusters: inconsistent component dimensions");
    }
    total += comp.count;
  }
  LabeledSamples out;
  out.samples.resize(static_cast<Eigen::Index>(total), dim);
  out.labels.reserve(total);
  Eigen::Index row = 0;
  for (const auto& comp : spec.components) {
    const Matrix l = is_zero(comp.cov) ? Matrix::Zero(dim, dim) : cholesky(comp.cov);
    for (std::size_t k = 0; k < comp.count; ++k) {
      const Vector g = standard_normal(static_cast<std::size_t>(dim), rng);
      out.samples.row(row++) = (comp.mean + l * g).transpose();
      out.labels.push_back(comp.label);
    }
  }
  return out;
}

MixtureSpec default_four_clusters(std::size_t per_cluster) {
  auto comp = [&](double mx, double my, double sxx, double sxy, double syy, int label) {
    MixtureComponent c;
    c.mean = Vector(2);
    c.mean << mx, my;
    c.cov = Matrix(2, 2);
    c.cov << sxx, sxy, sxy, syy;
    c.count = per_cluster;
    c.label = label;
    return c;
  };
  MixtureSpec spec;
  spec.components = {comp(-4.0, -4.0, 0.5, 0.0, 0.5, 0), comp(4.0, -4.0, 1.0, 0.6, 1.0, 1),
                     comp(-4.0, 4.0, 2.0, -0.5, 1.0, 2), comp(4.0, 4.0, 0.3, 0.0, 1.5, 3)};
  return spec;
}

ConditionedSamples circle_variance_dataset(std::size_t n_points, double radius, double var_lo,
                                           double var_hi, Rng& rng) {
  if (n_points < 2) throw DomainError("circle_variance_dataset: need at least 2 points");
  if (!(var_lo > 0.0) || !(var_lo <= var_hi)) {
    throw DomainError("circle_variance_dataset: need 0 < var_lo <= var_hi");
  }
  const auto n = static_cast<Eigen::Index>(n_points);
  ConditionedSamples out{Matrix(n, 2), Matrix(n, 2), Vector(n)};
  std::normal_distribution<double> g(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    out.conditions(k, 0) = radius * std::cos(theta);
    out.conditions(k, 1) = radius * std::sin(theta);
    out.variances(k) = var_lo + (var_hi - var_lo) * frac;
    const double sd = std::sqrt(out.variances(k));
    out.samples(k, 0) = out.conditions(k, 0) + sd * g(rng);
    out.samples(k, 1) = out.conditions(k, 1) + sd * g(rng);
  }
  return out;
}

ConditionedSamples line_variance_dataset(std::size_t n_points, double x_lo, double x_hi,
                                         double var_slope, double base_var, Rng& rng) {
  if (n_points < 2) throw DomainError("line_variance_dataset: need at least 2 points");
  if (!(x_lo < x_hi)) throw DomainError("line_variance_dataset: need x_lo < x_hi");
  if (var_slope < 0.0 || !(base_var > 0.0)) {
    throw DomainError("line_variance_dataset: need var_slope >= 0 and base_var > 0");
  }
  const auto n = static_cast<Eigen::Index>(n_points);
  ConditionedSamples out{Matrix(n, 2), Matrix(n, 2), Vector(n)};
  std::normal_distribution<double> g(0.0, 1.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    out.conditions(k, 0) = x;
    out.conditions(k, 1) = 0.0;
    out.variances(k) = base_var + var_slope * std::abs(x);
    const double sd = std::sqrt(out.variances(k));
    out.samples(k, 0) = x + sd * g(rng);
    out.samples(k, 1) = sd * g(rng);
  }
  return out;
}

ConditionedSamples clip_ends(const ConditionedSamples& data, double fraction) {
  if (!(fraction >= 0.0 && fraction < 0.5)) throw DomainError("clip_ends: fraction must be in [0, 0.5)");
  const Eigen::Index n = data.samples.rows();
  const auto drop = static_cast<Eigen::Index>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  const Eigen::Index keep = n - 2 * drop;
  return {data.samples.middleRows(drop, keep), data.conditions.middleRows(drop, keep),
          data.variances.segment(drop, keep)};
}

Matrix true_conditional_distribution(const VarSpec& spec, const Vector& condition, std::size_t n,
                                     Rng& rng) {
  spec.validate();
  if (static_cast<std::size_t>(condition.size()) != spec.dim()) {
    throw ShapeError("true_conditional_distribution: condition dimension mismatch");
  }
  const Vector mean = spec.c + spec.a.cwiseProduct(condition);
  const Matrix base = t_scale_factor(spec.noise.cov, spec.noise.df);
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out.row(i) = (mean + var_noise_draw(spec, base, condition, rng)).transpose();
  }
  return out;
}

Matrix true_conditional_distribution(const GarchSpec& spec, const Vector& sigma2, std::size_t n,
                                     Rng& rng) {
  spec.validate();
  if (static_cast<std::size_t>(sigma2.size()) != spec.dim()) {
    throw ShapeError("true_conditional_distribution: condition dimension mismatch");
  }
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out.row(i) = garch_draw(sigma2, spec.df, rng).transpose();
  }
  return out;
}

VarSpec var1_constant_spec() {
  VarSpec s;
  s.c = Vector::Zero(2);
  s.a = Vector(2);
  s.a << 0.8, 0.6;
  s.noise.mean = Vector::Zero(2);
  s.noise.cov = Matrix(2, 2);
  s.noise.cov << 1.0, 0.5, 0.5, 1.0;
  s.noise.df = 6.0;
  s.noise_mode = NoiseMode::Constant;
  return s;
}

VarSpec var1_sum_abs_spec() {
  VarSpec s;
  s.c = Vector::Zero(2);
  s.a = Vector(2);
  s.a << 0.8, 0.6;
  s.noise.mean = Vector::Zero(2);
  s.noise.cov = Matrix::Identity(2, 2);
  s.noise.df = 20.0;
  s.noise_mode = NoiseMode::SumAbsScale;
  return s;
}

VarSpec var1_per_series_abs_spec() {
  VarSpec s = var1_sum_abs_spec();
  s.noise_mode = NoiseMode::PerSeriesAbsScale;
  return s;
}

RegionSpec two_region_spec(std::size_t per_region) {
  VarSpec r1;
  r1.c = Vector(2);
  r1.c << -1.0, 0.0;
  r1.a = Vector(2);
  r1.a << 0.8, 0.8;
  r1.noise.mean = Vector::Zero(2);
  r1.noise.cov = Matrix(2, 2);
  r1.noise.cov << 1.0, 0.5, 0.5, 1.0;
  r1.noise.df = 6.0;

  VarSpec r2;
  r2.c = Vector(2);
  r2.c << 1.0, 0.0;
  r2.a = Vector(2);
  r2.a << 0.5, 0.5;
  r2.noise.mean = Vector::Zero(2);
  r2.noise.cov = Matrix(2, 2);
  r2.noise.cov << 1.0, 0.3, 0.3, 1.0;
  r2.noise.df = 12.0;

  return RegionSpec{{{r1, per_region}, {r2, per_region}}};
}

GarchSpec garch_study_spec() {
  GarchSpec s;
  s.c = Vector::Constant(2, 0.3);
  s.a = Vector::Constant(2, 0.3);
  s.b = Vector::Constant(2, 0.6);
  s.df = 20.0;
  return s;
}

}  // namespace cgan::synth
