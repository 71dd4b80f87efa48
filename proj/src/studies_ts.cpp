#include <cmath>
#include <string>

#include "cgan/errors.hpp"
#include "cgan/studies.hpp"

namespace cgan::studies {

namespace {

GanSetup seeded(GanSetup setup, std::uint64_t seed) {
  setup.train.seed = derive_seed(seed, "train");
  return setup;
}

double lag_correlation(const Matrix& m, Eigen::Index col, std::size_t lag) {
  const auto v = stats::column(m, col);
  const std::span<const double> all(v);
  return stats::correlation(all.subspan(lag), all.first(v.size() - lag));
}

std::array<stats::QqResult, 2> last_step_qq(const Matrix& real, const Matrix& gen,
                                            std::size_t points) {
  const Eigen::Index n = real.cols();
  return {stats::qq_compare(stats::column(real, n - 2), stats::column(gen, n - 2), points),
          stats::qq_compare(stats::column(real, n - 1), stats::column(gen, n - 1), points)};
}

stats::DependencyStats panel_stats(const Matrix& flat_window2) {
  const Eigen::Index s = flat_window2.cols() / 2;
  return stats::dependency_stats_pairs(flat_window2.rightCols(s), flat_window2.leftCols(s));
}

const char* const kStatNames[] = {"cor_t", "cor_s", "cor_st", "vol_t", "vol_s", "vol_st"};

void push_stats(std::vector<NamedStat>& out, const std::string& prefix,
                const stats::DependencyStats& st) {
  const double values[] = {st.cor_t, st.cor_s, st.cor_st, st.vol_t, st.vol_s, st.vol_st};
  for (std::size_t i = 0; i < 6; ++i) out.emplace_back(prefix + kStatNames[i], values[i]);
}

}  // namespace

ChainResult chain_study(const ChainOptions& opts) {
  opts.spec.validate();
  const auto dim = static_cast<Eigen::Index>(opts.spec.dim());
  Rng data_rng(derive_seed(opts.seed, "data"));
  const Matrix x = synth::simulate_var1(opts.spec, opts.samples + 1, data_rng);
  auto [xs, scale] = prep::standardize(x);
  const auto pairs = prep::lag_conditions(xs, 1);

  Rng path_rng(derive_seed(opts.seed, "chain"));
  const Matrix path = prep::apply_scale(synth::simulate_var1(opts.spec, opts.chain_length, path_rng), scale);
  const Matrix track_path = path.topRows(static_cast<Eigen::Index>(
      std::min<std::size_t>(opts.track_chain_length, opts.chain_length)));

  const std::uint64_t track_seed = derive_seed(opts.seed, "track");
  Tracker tracker = [&track_path, track_seed, dim](const GanSpec& spec, std::size_t) {
    Rng rng(track_seed);
    const Matrix b = generate(spec, static_cast<std::size_t>(track_path.rows()), track_path, rng);
    std::vector<NamedStat> out;
    for (Eigen::Index s = 0; s < dim; ++s) {
      out.emplace_back("lag1_s" + std::to_string(s + 1), lag_correlation(b, s, 1));
      out.emplace_back("lag2_s" + std::to_string(s + 1), lag_correlation(b, s, 2));
    }
    return out;
  };

  ChainResult r;
  r.trained = build_and_train(seeded(opts.setup, opts.seed), pairs.targets, pairs.conditions, tracker);
  Rng eval_rng(derive_seed(opts.seed, "eval"));
  const Matrix b = generate(r.trained.spec, static_cast<std::size_t>(path.rows()), path, eval_rng);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const double a = opts.spec.a(s);
    r.lag1.push_back(lag_correlation(b, s, 1));
    r.lag2.push_back(lag_correlation(b, s, 2));
    r.target1.push_back(a * a * a);
    r.target2.push_back(a * a * a * a);
  }
  return r;
}

VarScatterResult var_scatter_study(const VarScatterOptions& opts) {
  opts.spec.validate();
  Rng data_rng(derive_seed(opts.seed, "data"));
  const Matrix x = synth::simulate_var1(opts.spec, opts.samples + 1, data_rng);
  auto [xs, scale] = prep::standardize(x);
  const auto pairs = prep::lag_conditions(xs, 1);

  VarScatterResult r;
  r.trained = build_and_train(seeded(opts.setup, opts.seed), pairs.targets, pairs.conditions);
  r.model = ScaledGenerator{r.trained.spec, scale, scale};

  Rng pick_rng(derive_seed(opts.seed, "conditions"));
  const Matrix conds = pick_rows(x.topRows(static_cast<Eigen::Index>(opts.samples)), opts.conditions, pick_rng);
  const auto& model = r.model;
  const auto& spec = opts.spec;
  r.scatter = moment_scatter(
      conds, [&model](const Matrix& c, std::size_t n, Rng& rng) { return model.sample(n, c, rng); },
      [&spec](const Matrix& c, std::size_t n, Rng& rng) {
        return synth::true_conditional_distribution(spec, c.row(0).transpose(), n, rng);
      },
      opts.draws, opts.qq_points, derive_seed(opts.seed, "eval"));
  return r;
}

RegionContinuousResult region_continuous_study(const RegionContinuousOptions& opts) {
  const auto spec = synth::two_region_spec(opts.per_region);
  Rng data_rng(derive_seed(opts.seed, "data"));
  const auto sim = synth::simulate_region_switching(spec, data_rng);
  auto [xs, scale] = prep::standardize(sim.series);

  std::vector<Eigen::Index> keep;
  for (std::size_t t = 1; t < sim.labels.size(); ++t) {
    if (sim.labels[t] == sim.labels[t - 1]) keep.push_back(static_cast<Eigen::Index>(t));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(keep.size());
  Matrix targets(n, xs.cols()), conds(n, xs.cols());
  for (Eigen::Index k = 0; k < n; ++k) {
    targets.row(k) = xs.row(keep[static_cast<std::size_t>(k)]);
    conds.row(k) = xs.row(keep[static_cast<std::size_t>(k)] - 1);
  }

  RegionContinuousResult r;
  r.trained = build_and_train(seeded(opts.setup, opts.seed), targets, conds);
  const ScaledGenerator model{r.trained.spec, scale, scale};

  Rng pick_rng(derive_seed(opts.seed, "conditions"));
  for (std::size_t region = 0; region < spec.regions.size(); ++region) {
    Matrix pool = Matrix::Zero(0, sim.series.cols());
    for (std::size_t t = 0; t < sim.labels.size(); ++t) {
      if (sim.labels[t] != static_cast<int>(region)) continue;
      pool.conservativeResize(pool.rows() + 1, Eigen::NoChange);
      pool.row(pool.rows() - 1) = sim.series.row(static_cast<Eigen::Index>(t));
    }
    const Matrix picked = pick_rows(pool, opts.conditions_per_region, pick_rng);
    const auto& vs = spec.regions[region].first;
    r.regions.push_back(moment_scatter(
        picked, [&model](const Matrix& c, std::size_t m, Rng& rng) { return model.sample(m, c, rng); },
        [&vs](const Matrix& c, std::size_t m, Rng& rng) {
          return synth::true_conditional_distribution(vs, c.row(0).transpose(), m, rng);
        },
        opts.draws, opts.qq_points, derive_seed(opts.seed, "eval" + std::to_string(region))));
  }
  return r;
}

RegionCategoricalResult region_categorical_study(const RegionCategoricalOptions& opts) {
  const auto spec = synth::two_region_spec(opts.per_region);
  const std::size_t regions = spec.regions.size();
  Rng data_rng(derive_seed(opts.seed, "data"));
  const auto sim = synth::simulate_region_switching(spec, data_rng);

  RegionCategoricalResult r;
  std::vector<prep::ScaleParams> scales;
  Matrix data(0, 0), cond(0, 0);
  std::vector<Matrix> scaled_panels;
  Eigen::Index offset = 0;
  for (std::size_t region = 0; region < regions; ++region) {
    const auto len = static_cast<Eigen::Index>(spec.regions[region].second);
    const Matrix block = sim.series.middleRows(offset, len);
    offset += len;
    auto [zs, sc] = prep::standardize(block);
    scales.push_back(prep::tile_scale(sc, 2));
    scaled_panels.push_back(prep::sliding_window(zs, 2).flatten());
    r.real.push_back(prep::sliding_window(block, 2).flatten());
    r.training_stats.push_back(panel_stats(r.real.back()));
  }
  Eigen::Index total = 0;
  for (const auto& p : scaled_panels) total += p.rows();
  data.resize(total, scaled_panels.front().cols());
  std::vector<int> labels;
  Eigen::Index row = 0;
  for (std::size_t region = 0; region < regions; ++region) {
    data.middleRows(row, scaled_panels[region].rows()) = scaled_panels[region];
    row += scaled_panels[region].rows();
    labels.insert(labels.end(), static_cast<std::size_t>(scaled_panels[region].rows()),
                  static_cast<int>(region));
  }
  cond = prep::dummy_encode(labels, regions);

  const std::uint64_t track_seed = derive_seed(opts.seed, "track");
  const std::size_t track_n = opts.track_samples;
  Tracker tracker = [&scales, regions, track_seed, track_n](const GanSpec& s, std::size_t) {
    std::vector<NamedStat> out;
    for (std::size_t region = 0; region < regions; ++region) {
      Rng rng(track_seed + region);
      const Matrix code = prep::dummy_encode({static_cast<int>(region)}, regions);
      const Matrix g = prep::inverse_standardize(generate(s, track_n, code, rng), scales[region]);
      push_stats(out, "r" + std::to_string(region + 1) + "_", panel_stats(g));
    }
    return out;
  };

  r.trained = build_and_train(seeded(opts.setup, opts.seed), data, cond, tracker);
  Rng eval_rng(derive_seed(opts.seed, "eval"));
  for (std::size_t region = 0; region < regions; ++region) {
    const Matrix code = prep::dummy_encode({static_cast<int>(region)}, regions);
    Matrix g = prep::inverse_standardize(generate(r.trained.spec, opts.eval_samples, code, eval_rng),
                                         scales[region]);
    r.final_stats.push_back(panel_stats(g));
    r.qq.push_back(last_step_qq(r.real[region], g, opts.qq_points));
    r.generated.push_back(std::move(g));
  }
  return r;
}

GarchResult garch_study(const GarchOptions& opts) {
  opts.spec.validate();
  Rng data_rng(opts.data_seed);
  const auto sim = synth::simulate_garch(opts.spec, opts.samples + 1, data_rng);
  const auto n = static_cast<Eigen::Index>(opts.samples);
  const Matrix targets = sim.x.bottomRows(n);
  const Matrix conds = opts.conditioning == GarchConditioning::SigmaT ? Matrix(sim.sigma2.bottomRows(n))
                                                                      : Matrix(sim.sigma2.topRows(n));
  auto [ts, data_scale] = prep::standardize(targets);
  auto [cs, cond_scale] = prep::standardize(conds);

  GarchResult r;
  r.trained = build_and_train(seeded(opts.setup, opts.train_seed), ts, cs);
  const ScaledGenerator model{r.trained.spec, data_scale, cond_scale};

  // Each evaluation row holds [model condition | true sigma_t^2].
  const Eigen::Index dim = sim.x.cols();
  Rng pick_rng(opts.eval_seed);
  std::uniform_int_distribution<Eigen::Index> pick(1, sim.x.rows() - 1);
  Matrix eval(static_cast<Eigen::Index>(opts.conditions), 2 * dim);
  r.sigma2_t.resize(eval.rows(), dim);
  for (Eigen::Index k = 0; k < eval.rows(); ++k) {
    const Eigen::Index t = pick(pick_rng);
    const Vector prev = sim.sigma2.row(t - 1).transpose();
    const Vector next = synth::garch_next_variance(opts.spec, sim.x.row(t - 1).transpose(), prev);
    r.sigma2_t.row(k) = next.transpose();
    eval.row(k).head(dim) =
        (opts.conditioning == GarchConditioning::SigmaT ? next : prev).transpose();
    eval.row(k).tail(dim) = next.transpose();
  }
  const auto& spec = opts.spec;
  r.scatter = moment_scatter(
      eval,
      [&model, dim](const Matrix& c, std::size_t m, Rng& rng) {
        return model.sample(m, Matrix(c.leftCols(dim)), rng);
      },
      [&spec, dim](const Matrix& c, std::size_t m, Rng& rng) {
        return synth::true_conditional_distribution(spec, c.row(0).tail(dim).transpose(), m, rng);
      },
      opts.draws, opts.qq_points, derive_seed(opts.eval_seed, "draws"));

  for (Eigen::Index s = 0; s < dim; ++s) {
    std::vector<double> gv;
    for (const auto& p : r.scatter.points) {
      if (p.series == static_cast<std::size_t>(s)) gv.push_back(p.generated.variance);
    }
    r.variance_correlation.push_back(stats::correlation(gv, stats::column(r.sigma2_t, s)));
  }
  return r;
}

}  // namespace cgan::studies
