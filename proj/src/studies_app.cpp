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

const char* const kPeriodNames[] = {"stressed", "normal"};
const char* const kStatNames[] = {"cor_t", "cor_s", "cor_st", "vol_t", "vol_s", "vol_st"};

Matrix rows_in_period(const EquityData& d, int period) {
  Matrix out(0, d.returns.cols());
  for (std::size_t t = 0; t < d.period.size(); ++t) {
    if (d.period[t] != period) continue;
    out.conservativeResize(out.rows() + 1, Eigen::NoChange);
    out.row(out.rows() - 1) = d.returns.row(static_cast<Eigen::Index>(t));
  }
  return out;
}

stats::DependencyStats panel_stats(const Matrix& flat_window2) {
  const Eigen::Index s = flat_window2.cols() / 2;
  return stats::dependency_stats_pairs(flat_window2.rightCols(s), flat_window2.leftCols(s));
}

}  // namespace

EquityResult equity_study(const EquityData& data, const EquityOptions& opts) {
  const Eigen::Index series = data.returns.cols();
  if (static_cast<std::size_t>(data.returns.rows()) != data.period.size()) {
    throw ShapeError("equity: one period label per return row required");
  }
  if (opts.positions.size() != static_cast<std::size_t>(series)) {
    throw ConfigError("equity: " + std::to_string(opts.positions.size()) + " positions for " +
                      std::to_string(series) + " instruments");
  }
  const risk::Portfolio portfolio{opts.positions};

  std::vector<Matrix> blocks, panels;
  std::vector<prep::ScaleParams> scales;
  Eigen::Index total = 0;
  for (int p = 0; p < 2; ++p) {
    blocks.push_back(rows_in_period(data, p));
    if (blocks.back().rows() < 3) {
      throw DataError(std::string("equity: too few returns in the ") + kPeriodNames[p] + " period");
    }
    auto [z, sc] = prep::standardize(blocks.back());
    scales.push_back(prep::tile_scale(sc, 2));
    panels.push_back(prep::sliding_window(z, 2).flatten());
    total += panels.back().rows();
  }
  Matrix train_data(total, 2 * series);
  std::vector<int> labels;
  Eigen::Index row = 0;
  for (int p = 0; p < 2; ++p) {
    train_data.middleRows(row, panels[p].rows()) = panels[p];
    row += panels[p].rows();
    labels.insert(labels.end(), static_cast<std::size_t>(panels[p].rows()), p);
  }
  const Matrix cond = prep::dummy_encode(labels, 2);

  EquityResult r;
  for (int p = 0; p < 2; ++p) {
    r.training_stats.push_back(panel_stats(prep::sliding_window(blocks[p], 2).flatten()));
  }

  const std::uint64_t track_seed = derive_seed(opts.seed, "track");
  const std::size_t track_n = opts.track_samples;
  Tracker tracker = [&scales, track_seed, track_n](const GanSpec& s, std::size_t) {
    std::vector<NamedStat> out;
    for (int p = 0; p < 2; ++p) {
      Rng rng(track_seed + static_cast<std::uint64_t>(p));
      const Matrix g = prep::inverse_standardize(
          generate(s, track_n, prep::dummy_encode({p}, 2), rng), scales[p]);
      const auto st = panel_stats(g);
      const double values[] = {st.cor_t, st.cor_s, st.cor_st, st.vol_t, st.vol_s, st.vol_st};
      for (std::size_t i = 0; i < 6; ++i) {
        out.emplace_back(std::string(kPeriodNames[p]) + "_" + kStatNames[i], values[i]);
      }
    }
    return out;
  };
  r.trained = build_and_train(seeded(opts.setup, opts.seed), train_data, cond, tracker);

  Rng eval_rng(derive_seed(opts.seed, "eval"));
  std::vector<risk::RiskReport> hs, cg;
  for (int p = 0; p < 2; ++p) {
    const auto pnl = risk::pnl_from_returns(blocks[p], portfolio);
    hs.push_back(risk::hs_var_es(pnl, opts.level));

    const auto& sc = scales[p];
    risk::CganRiskRequest req;
    req.condition = prep::dummy_encode({p}, 2);
    req.original_count = static_cast<std::size_t>(blocks[p].rows());
    req.scale = opts.scale;
    req.level = opts.level;
    req.to_returns = [&sc, series](const Matrix& g) -> Matrix {
      return prep::inverse_standardize(g, sc).rightCols(series);
    };
    Rng replay = eval_rng;
    cg.push_back(risk::cgan_var_es(r.trained.spec, req, portfolio, eval_rng));
    const Matrix draws = generate(r.trained.spec, req.scale * req.original_count, req.condition, replay);
    r.generated.push_back(req.to_returns(draws));
    r.real.push_back(blocks[p]);
    r.qq.push_back({stats::qq_compare(stats::column(blocks[p], 0), stats::column(r.generated.back(), 0),
                                      opts.qq_points),
                    stats::qq_compare(stats::column(blocks[p], 1), stats::column(r.generated.back(), 1),
                                      opts.qq_points)});
  }
  for (int p = 0; p < 2; ++p) r.rows.push_back({"HS", kPeriodNames[p], hs[p], std::nullopt});
  for (int p = 0; p < 2; ++p) r.rows.push_back({"CGAN", kPeriodNames[p], cg[p], std::nullopt});

  const Matrix test = rows_in_period(data, 2);
  if (test.rows() > 0) {
    const auto realized = risk::pnl_from_returns(test, portfolio);
    const auto hs_bt = risk::backtest(hs[1], realized);
    const auto cg_bt = risk::backtest(cg[1], realized);
    r.rows.push_back({"HS", "backtest", hs[1], hs_bt});
    r.rows.push_back({"CGAN", "backtest", cg[1], cg_bt});
    risk::RiskReport actual = risk::hs_var_es(realized, opts.level);
    r.rows.push_back({"actual", "backtest", actual, std::nullopt});
  }
  return r;
}

MacroResult macro_study(const MacroData& data, const MacroOptions& opts) {
  const auto series = static_cast<std::size_t>(data.levels.cols());
  if (data.names.size() != series) throw ShapeError("macro: one name per series required");
  if (opts.tracked_series >= series) throw ConfigError("macro: tracked series index out of range");
  if (opts.shock_variable >= series) throw ConfigError("macro: shock variable index out of range");

  const Matrix stationary = prep::make_stationary(data.levels, data.transforms);
  auto [z, scale] = prep::standardize(stationary);
  const auto panel = prep::sliding_window(z, opts.window, data.names);
  const auto [cond_panel, target_panel] = prep::split_condition_target(panel, opts.condition_window);
  const Matrix cond = cond_panel.flatten();
  const Matrix target = target_panel.flatten();
  const std::size_t quarters = target_panel.window();
  const std::size_t j = opts.tracked_series;

  // mean, sd and lag-1 autocorrelation of one series across target paths
  auto path_moments = [series, quarters, j](const Matrix& flat) {
    std::vector<double> all, cur, prev;
    for (Eigen::Index s = 0; s < flat.rows(); ++s) {
      for (std::size_t q = 0; q < quarters; ++q) {
        const double v = flat(s, static_cast<Eigen::Index>(q * series + j));
        all.push_back(v);
        if (q > 0) {
          cur.push_back(v);
          prev.push_back(flat(s, static_cast<Eigen::Index>((q - 1) * series + j)));
        }
      }
    }
    const auto m = stats::moments(all);
    return std::vector<double>{m.mean, std::sqrt(m.variance), stats::correlation(cur, prev)};
  };

  MacroResult r;
  r.scale = scale;
  r.panel_samples = panel.samples();
  r.training_moments = path_moments(target);

  const std::string tag = data.names[j];
  const std::uint64_t track_seed = derive_seed(opts.seed, "track");
  Tracker tracker = [&cond, &path_moments, track_seed, tag](const GanSpec& s, std::size_t) {
    Rng rng(track_seed);
    const auto m = path_moments(generate(s, static_cast<std::size_t>(cond.rows()), cond, rng));
    return std::vector<NamedStat>{{tag + "_mean", m[0]}, {tag + "_sd", m[1]}, {tag + "_autocorr", m[2]}};
  };
  r.trained = build_and_train(seeded(opts.setup, opts.seed), target, cond, tracker);

  r.latest_condition = z.bottomRows(static_cast<Eigen::Index>(opts.condition_window));
  Rng fan_rng(derive_seed(opts.seed, "fan"));
  r.fan = risk::forecast_paths(r.trained.spec, r.latest_condition, opts.n_paths, fan_rng);
  Rng shock_rng(derive_seed(opts.seed, "shock"));
  r.shock = risk::shock_analysis(r.trained.spec, r.latest_condition, opts.shock_variable,
                                 opts.shock_sd, opts.n_paths, shock_rng);
  return r;
}

}  // namespace cgan::studies
