#include <algorithm>
#include <ostream>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"
#include "cgan/studies.hpp"

namespace cgan::studies {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

GanSetup seeded(GanSetup setup, std::uint64_t seed) {
  setup.train.seed = derive_seed(seed, "train");
  return setup;
}

Matrix rows_with_label(const Matrix& data, const std::vector<int>& labels, int label) {
  std::vector<Eigen::Index> idx;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] == label) idx.push_back(static_cast<Eigen::Index>(r));
  }
  Matrix out(static_cast<Eigen::Index>(idx.size()), data.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = data.row(idx[k]);
  return out;
}

std::array<stats::QqResult, 2> qq_pair(const Matrix& real, const Matrix& gen, std::size_t points) {
  return {stats::qq_compare(stats::column(real, 0), stats::column(gen, 0), points),
          stats::qq_compare(stats::column(real, 1), stats::column(gen, 1), points)};
}

}  // namespace

SeriesScatterSummary MomentScatter::summary(std::size_t series_index) const {
  std::vector<double> tm, gm, tv, gv, slopes, r2;
  std::size_t positive = 0;
  for (const auto& p : points) {
    if (p.series != series_index) continue;
    tm.push_back(p.truth.mean);
    gm.push_back(p.generated.mean);
    tv.push_back(p.truth.variance);
    gv.push_back(p.generated.variance);
    slopes.push_back(p.qq_slope);
    r2.push_back(p.qq_r_squared);
    if (p.generated.excess_kurtosis > 0.0) ++positive;
  }
  if (tm.size() < 2) throw DomainError("MomentScatter::summary: fewer than 2 conditions");
  SeriesScatterSummary s;
  s.mean_fit = stats::linear_fit(tm, gm);
  s.variance_fit = stats::linear_fit(tv, gv);
  s.positive_kurtosis_share = static_cast<double>(positive) / static_cast<double>(tm.size());
  s.median_qq_slope = median(slopes);
  s.median_qq_r_squared = median(r2);
  return s;
}

void MomentScatter::write_csv(std::ostream& out) const {
  CsvWriter w(out);
  const std::vector<std::string> header{
      "condition", "series", "true_mean", "gen_mean", "true_variance", "gen_variance",
      "true_skewness", "gen_skewness", "true_kurtosis", "gen_kurtosis", "qq_slope", "qq_r2"};
  w.header(header);
  for (const auto& p : points) {
    const std::vector<double> row{static_cast<double>(p.condition), static_cast<double>(p.series),
                                  p.truth.mean, p.generated.mean, p.truth.variance,
                                  p.generated.variance, p.truth.skewness, p.generated.skewness,
                                  p.truth.excess_kurtosis, p.generated.excess_kurtosis,
                                  p.qq_slope, p.qq_r_squared};
    w.row(row);
  }
}

MomentScatter moment_scatter(const Matrix& conditions, const ConditionalSampler& generated,
                             const ConditionalSampler& truth, std::size_t draws,
                             std::size_t qq_points, std::uint64_t seed) {
  MomentScatter out;
  out.conditions = conditions;
  Rng rng(seed);
  for (Eigen::Index k = 0; k < conditions.rows(); ++k) {
    const Matrix cond = conditions.row(k);
    const Matrix t = truth(cond, draws, rng);
    const Matrix g = generated(cond, draws, rng);
    if (t.cols() != g.cols()) throw ShapeError("moment_scatter: sampler widths differ");
    out.series = static_cast<std::size_t>(t.cols());
    for (Eigen::Index s = 0; s < t.cols(); ++s) {
      const auto tc = stats::column(t, s);
      const auto gc = stats::column(g, s);
      MomentPoint p;
      p.condition = static_cast<std::size_t>(k);
      p.series = static_cast<std::size_t>(s);
      p.truth = stats::moments(tc);
      p.generated = stats::moments(gc);
      const auto qq = stats::qq_compare(tc, gc, qq_points);
      p.qq_slope = qq.slope;
      p.qq_r_squared = qq.r_squared;
      out.points.push_back(p);
    }
  }
  return out;
}

Matrix pick_rows(const Matrix& pool, std::size_t count, Rng& rng) {
  if (pool.rows() == 0) throw DomainError("pick_rows: empty pool");
  std::uniform_int_distribution<Eigen::Index> pick(0, pool.rows() - 1);
  Matrix out(static_cast<Eigen::Index>(count), pool.cols());
  for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) = pool.row(pick(rng));
  return out;
}

InverseCdfResult inverse_cdf_study(const InverseCdfOptions& opts) {
  if (is_conditional(opts.setup.variant)) {
    throw ConfigError("inverse-cdf: the variant must be unconditional (gan or wgan)");
  }
  InverseCdfResult r;
  Rng data_rng(derive_seed(opts.seed, "data"));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix data(static_cast<Eigen::Index>(opts.samples), 1);
  for (Eigen::Index i = 0; i < data.rows(); ++i) data(i, 0) = normal(data_rng);
  r.training_data.assign(data.data(), data.data() + data.size());

  const std::uint64_t track_seed = derive_seed(opts.seed, "track");
  const std::size_t track_n = opts.track_samples;
  Tracker tracker = [track_seed, track_n](const GanSpec& spec, std::size_t) {
    Rng rng(track_seed);
    const Matrix g = generate(spec, track_n, std::nullopt, rng);
    const double ks = stats::ks_statistic(stats::column(g, 0), stats::normal_cdf);
    return std::vector<NamedStat>{{"ks", ks}, {"mean", g.mean()}};
  };
  r.trained = build_and_train(seeded(opts.setup, opts.seed), data, std::nullopt, tracker);

  Rng eval_rng(derive_seed(opts.seed, "eval"));
  r.noise = sample_noise(opts.eval_samples, r.trained.spec, eval_rng);
  r.generated = generate_with_noise(r.trained.spec, r.noise, std::nullopt);
  r.ks = stats::ks_statistic(stats::column(r.generated, 0), stats::normal_cdf);

  const auto& g = r.trained.spec.generator;
  if (g.depth() == 2 && g.in_dim() == 1 && g.layer(0).activation.is_relu_family()) {
    r.knots = nn::extract_spline_knots(g);
  }
  return r;
}

MixtureCategoricalResult mixture_categorical_study(const MixtureCategoricalOptions& opts) {
  Rng data_rng(derive_seed(opts.seed, "data"));
  const auto mix = synth::default_four_clusters(opts.per_cluster);
  const auto data = synth::gaussian_mixture_clusters(mix, data_rng);
  const std::size_t k = mix.components.size();

  auto [scaled, scale] = prep::standardize(data.samples);
  const Matrix cond = prep::dummy_encode(data.labels, k);

  MixtureCategoricalResult r;
  r.trained = build_and_train(seeded(opts.setup, opts.seed), scaled, cond);
  const ScaledGenerator model{r.trained.spec, scale, std::nullopt};

  Rng eval_rng(derive_seed(opts.seed, "eval"));
  for (std::size_t c = 0; c < k; ++c) {
    ClusterComparison cc;
    cc.real = rows_with_label(data.samples, data.labels, static_cast<int>(c));
    const Matrix code = prep::dummy_encode({static_cast<int>(c)}, k);
    cc.cgan = model.sample(opts.eval_per_cluster, code, eval_rng);
    cc.bandwidth = stats::kde_fit_cv(cc.real, stats::kde_default_grid(cc.real), opts.kde_folds);
    cc.kde = stats::kde_sample(cc.real, cc.bandwidth, opts.eval_per_cluster, eval_rng);
    cc.qq_cgan = qq_pair(cc.real, cc.cgan, opts.qq_points);
    cc.qq_kde = qq_pair(cc.real, cc.kde, opts.qq_points);
    r.clusters.push_back(std::move(cc));
  }
  return r;
}

MixtureIntegerResult mixture_integer_study(const MixtureIntegerOptions& opts) {
  Rng data_rng(derive_seed(opts.seed, "data"));
  MixtureIntegerResult r;
  r.data = synth::gaussian_mixture_clusters(synth::default_four_clusters(opts.per_cluster), data_rng);
  auto [scaled, scale] = prep::standardize(r.data.samples);
  Matrix cond(static_cast<Eigen::Index>(r.data.labels.size()), 1);
  for (std::size_t i = 0; i < r.data.labels.size(); ++i) {
    cond(static_cast<Eigen::Index>(i), 0) = opts.condition_scale * r.data.labels[i];
  }
  r.trained = build_and_train(seeded(opts.setup, opts.seed), scaled, cond);
  const ScaledGenerator model{r.trained.spec, scale, std::nullopt};

  Rng eval_rng(derive_seed(opts.seed, "eval"));
  for (double label : opts.eval_labels) {
    Matrix c(1, 1);
    c(0, 0) = opts.condition_scale * label;
    r.draws.push_back({label, model.sample(opts.eval_per_label, c, eval_rng)});
  }
  return r;
}

ContinuousConditionResult circle_study(const CircleOptions& opts) {
  Rng data_rng(derive_seed(opts.seed, "data"));
  ContinuousConditionResult r;
  r.full = synth::circle_variance_dataset(opts.points, opts.radius, opts.var_lo, opts.var_hi, data_rng);
  r.training = r.full;
  r.trained = build_and_train(seeded(opts.setup, opts.seed), r.full.samples, r.full.conditions);

  Rng eval_rng(derive_seed(opts.seed, "eval"));
  r.generated = generate(r.trained.spec, opts.points, r.full.conditions, eval_rng);
  r.qq = qq_pair(r.full.samples, r.generated, opts.qq_points);
  if (opts.extrapolation_radius > 0.0) {
    r.extrapolation_truth = synth::circle_variance_dataset(
        opts.points, opts.extrapolation_radius, opts.var_lo, opts.var_hi, data_rng);
    r.extrapolated = generate(r.trained.spec, opts.points, r.extrapolation_truth->conditions, eval_rng);
  }
  return r;
}

ContinuousConditionResult line_study(const LineOptions& opts) {
  Rng data_rng(derive_seed(opts.seed, "data"));
  ContinuousConditionResult r;
  r.full = synth::line_variance_dataset(opts.points, opts.x_lo, opts.x_hi, opts.var_slope,
                                        opts.base_var, data_rng);
  r.training = synth::clip_ends(r.full, opts.clip_fraction);
  r.trained = build_and_train(seeded(opts.setup, opts.seed), r.training.samples, r.training.conditions);

  Rng eval_rng(derive_seed(opts.seed, "eval"));
  r.generated = generate(r.trained.spec, opts.points, r.full.conditions, eval_rng);
  r.qq = qq_pair(r.full.samples, r.generated, opts.qq_points);
  return r;
}

}  // namespace cgan::studies
