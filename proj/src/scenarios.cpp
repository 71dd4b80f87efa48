#include "cgan/scenarios.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"
#include "cgan/marketdata.hpp"
#include "cgan/studies.hpp"
#include "json.hpp"

namespace cgan::scenarios {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Output handling

class Output {
 public:
  Output(std::string dir, std::ostream& log) : dir_(std::move(dir)), log_(log) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw DataError("cannot create output directory '" + dir_ + "': " + ec.message());
  }

  std::ostream& log() { return log_; }

  template <typename Fn>
  void write(const std::string& name, Fn&& body) {
    const fs::path path = fs::path(dir_) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    body(out);
    if (!out) throw DataError("write failed for '" + path.string() + "'");
    files_.push_back(name);
  }

  void matrix(const std::string& name, const std::vector<std::string>& header, const Matrix& m) {
    write(name, [&](std::ostream& out) { write_matrix_csv(out, header, m); });
  }

  void metric(const std::string& name, double value) {
    summary_.emplace_back(name, value);
    log_ << "  " << name << " = " << format_double(value) << '\n';
  }

  std::string path_of(const std::string& name) const { return (fs::path(dir_) / name).string(); }
  const std::vector<std::string>& files() const { return files_; }
  const std::vector<std::pair<std::string, double>>& summary() const { return summary_; }

 private:
  std::string dir_;
  std::ostream& log_;
  std::vector<std::string> files_;
  std::vector<std::pair<std::string, double>> summary_;
};

void write_trace(Output& out, const std::string& name, const TrainingTrace& trace) {
  out.write(name, [&](std::ostream& s) { trace.write_csv(s); });
}

void write_qq(Output& out, const std::string& name, const stats::QqResult& qq) {
  out.write(name, [&](std::ostream& s) { qq.write_csv(s); });
}

Matrix with_label(const Matrix& m, double label) {
  Matrix out(m.rows(), m.cols() + 1);
  out.leftCols(m.cols()) = m;
  out.col(m.cols()).setConstant(label);
  return out;
}

Matrix stack_rows(const std::vector<Matrix>& parts) {
  Eigen::Index rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Matrix out(rows, parts.empty() ? 0 : parts.front().cols());
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    out.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared GAN keys

struct GanDefaults {
  std::string variant = "cgan";
  std::string hidden = "100,100,100";
  std::string activation = "leaky_relu";
  std::size_t noise_dim = 30;
  std::string noise_dist = "normal";
  std::size_t iterations = 2000;
  std::size_t n_dis = 5;
  std::size_t batch_size = 128;
  std::size_t track_every = 100;
};

void add_gan_keys(Config& c, const GanDefaults& d) {
  c.set("gan.variant", d.variant);
  c.set("gan.generator_hidden", d.hidden);
  c.set("gan.discriminator_hidden", d.hidden);
  c.set("gan.activation", d.activation);
  c.set("gan.leaky_alpha", "0.1");
  c.set("gan.noise_dim", std::to_string(d.noise_dim));
  c.set("gan.noise_dist", d.noise_dist);
  c.set("train.iterations", std::to_string(d.iterations));
  c.set("train.n_dis", std::to_string(d.n_dis));
  c.set("train.clip_c", "0.01");
  c.set("train.batch_size", std::to_string(d.batch_size));
  c.set("train.learning_rate", "0.0001");
  c.set("train.beta1", "0.5");
  c.set("train.beta2", "0.9");
  c.set("train.track_every", std::to_string(d.track_every));
}

nn::Activation parse_activation(const Config& c) {
  const auto& name = c.get_string("gan.activation");
  if (name == "relu") return nn::Activation::relu();
  if (name == "leaky_relu") return nn::Activation::leaky_relu(c.get_double("gan.leaky_alpha"));
  if (name == "sigmoid") return nn::Activation::sigmoid();
  if (name == "identity") return nn::Activation::identity();
  throw ConfigError("gan.activation: unknown activation '" + name + "'");
}

GanSetup gan_setup(const Config& c, const std::string& iterations_key = "train.iterations") {
  GanSetup s;
  s.variant = parse_variant(c.get_string("gan.variant"));
  s.arch.generator_hidden = c.get_sizes("gan.generator_hidden");
  s.arch.discriminator_hidden = c.get_sizes("gan.discriminator_hidden");
  s.arch.hidden_activation = parse_activation(c);
  s.noise_dim = c.get_size("gan.noise_dim");
  s.noise_dist = parse_noise_dist(c.get_string("gan.noise_dist"));
  s.train.iterations = c.get_size(iterations_key);
  s.train.n_dis = c.get_size("train.n_dis");
  s.train.clip_c = c.get_double("train.clip_c");
  s.train.batch_size = c.get_size("train.batch_size");
  s.train.learning_rate = c.get_double("train.learning_rate");
  s.train.beta1 = c.get_double("train.beta1");
  s.train.beta2 = c.get_double("train.beta2");
  s.train.track_every = c.get_size("train.track_every");
  s.train.validate();
  return s;
}

void require_conditional(const GanSetup& s, const std::string& scenario) {
  if (!is_conditional(s.variant)) {
    throw ConfigError(scenario + ": gan.variant must be conditional (cgan or cwgan)");
  }
}

const char* pick(Preset p, const char* desk, const char* paper) {
  return p == Preset::Desk ? desk : paper;
}

// ---------------------------------------------------------------------------
// inverse-cdf

struct NetVariant {
  std::string label;
  std::size_t layers = 1;
  std::size_t width = 100;
  std::size_t noise_dim = 1;
};

// "<layers>x<width>" with an optional "-z<noise>" suffix.
NetVariant parse_net_variant(const std::string& s) {
  NetVariant v;
  v.label = s;
  std::size_t pos = 0;
  try {
    v.layers = std::stoul(s, &pos);
    if (pos >= s.size() || s[pos] != 'x') throw std::invalid_argument(s);
    std::size_t used = 0;
    v.width = std::stoul(s.substr(pos + 1), &used);
    pos += 1 + used;
    if (pos < s.size()) {
      if (s.compare(pos, 2, "-z") != 0) throw std::invalid_argument(s);
      std::size_t zused = 0;
      v.noise_dim = std::stoul(s.substr(pos + 2), &zused);
      if (pos + 2 + zused != s.size()) throw std::invalid_argument(s);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("inverse.variants: cannot parse '" + s + "' (expected e.g. 1x100 or 1x100-z3)");
  }
  if (v.layers == 0 || v.width == 0 || v.noise_dim == 0) {
    throw ConfigError("inverse.variants: zero size in '" + s + "'");
  }
  return v;
}

Config inverse_cdf_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.variant = "gan";
  g.hidden = "100";
  g.activation = "relu";
  g.noise_dim = 1;
  g.noise_dist = "uniform";
  g.iterations = p == Preset::Desk ? 3000 : 10000;
  g.track_every = p == Preset::Desk ? 250 : 500;
  add_gan_keys(c, g);
  c.erase("gan.generator_hidden");
  c.erase("gan.discriminator_hidden");
  c.erase("gan.noise_dim");
  c.set("inverse.variants", "1x7,1x100,2x100,1x100-z3");
  c.set("data.samples", "10000");
  c.set("eval.samples", "10000");
  c.set("eval.track_samples", "2000");
  c.set("eval.qq_points", "99");
  return c;
}

void run_inverse_cdf(const Config& c, std::uint64_t seed, Output& out) {
  std::vector<NetVariant> variants;
  for (const auto& s : c.get_strings("inverse.variants")) variants.push_back(parse_net_variant(s));
  if (variants.empty()) throw ConfigError("inverse.variants: no variants listed");
  for (const auto& v : variants) {
    Config vc = c;
    vc.set("gan.generator_hidden", "1");
    vc.set("gan.discriminator_hidden", "1");
    vc.set("gan.noise_dim", std::to_string(v.noise_dim));
    studies::InverseCdfOptions opts;
    opts.setup = gan_setup(vc);
    opts.setup.arch.generator_hidden.assign(v.layers, v.width);
    opts.setup.arch.discriminator_hidden.assign(v.layers, v.width);
    opts.samples = c.get_size("data.samples");
    opts.eval_samples = c.get_size("eval.samples");
    opts.track_samples = c.get_size("eval.track_samples");
    opts.seed = derive_seed(seed, v.label);
    out.log() << "training " << v.label << '\n';
    const auto r = studies::inverse_cdf_study(opts);

    write_trace(out, "trace_" + v.label + ".csv", r.trained.trace);
    std::vector<std::string> header;
    for (std::size_t k = 0; k < v.noise_dim; ++k) header.push_back("z" + std::to_string(k + 1));
    header.push_back("x");
    Matrix samples(r.noise.rows(), r.noise.cols() + 1);
    samples << r.noise, r.generated;
    out.matrix("samples_" + v.label + ".csv", header, samples);
    write_qq(out, "qq_" + v.label + ".csv",
             stats::qq_compare(r.training_data, stats::column(r.generated, 0), c.get_size("eval.qq_points")));
    out.metric("ks_" + v.label, r.ks);
    if (r.knots) {
      Matrix k(static_cast<Eigen::Index>(r.knots->size()), 1);
      for (std::size_t i = 0; i < r.knots->size(); ++i) k(static_cast<Eigen::Index>(i), 0) = (*r.knots)[i];
      out.matrix("knots_" + v.label + ".csv", {"knot"}, k);
      out.metric("knots_" + v.label, static_cast<double>(r.knots->size()));
    }
  }
}

// ---------------------------------------------------------------------------
// Gaussian mixtures

Config gmm_categorical_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.noise_dim = 10;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = p == Preset::Desk ? 200 : 500;
  add_gan_keys(c, g);
  c.set("data.per_cluster", "1000");
  c.set("eval.per_cluster", "1000");
  c.set("eval.kde_folds", "5");
  c.set("eval.qq_points", "99");
  return c;
}

void run_gmm_categorical(const Config& c, std::uint64_t seed, Output& out) {
  studies::MixtureCategoricalOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "gmm-categorical");
  o.per_cluster = c.get_size("data.per_cluster");
  o.eval_per_cluster = c.get_size("eval.per_cluster");
  o.kde_folds = c.get_size("eval.kde_folds");
  o.qq_points = c.get_size("eval.qq_points");
  o.seed = seed;
  const auto r = studies::mixture_categorical_study(o);
  write_trace(out, "trace.csv", r.trained.trace);
  std::vector<Matrix> real, cgan, kde;
  for (std::size_t k = 0; k < r.clusters.size(); ++k) {
    const auto& cl = r.clusters[k];
    const auto label = static_cast<double>(k);
    real.push_back(with_label(cl.real, label));
    cgan.push_back(with_label(cl.cgan, label));
    kde.push_back(with_label(cl.kde, label));
    const std::string tag = "c" + std::to_string(k);
    for (std::size_t d = 0; d < 2; ++d) {
      const std::string dt = tag + "_d" + std::to_string(d + 1);
      write_qq(out, "qq_cgan_" + dt + ".csv", cl.qq_cgan[d]);
      write_qq(out, "qq_kde_" + dt + ".csv", cl.qq_kde[d]);
      out.metric("qq_slope_cgan_" + dt, cl.qq_cgan[d].slope);
      out.metric("qq_slope_kde_" + dt, cl.qq_kde[d].slope);
    }
    out.metric("kde_bandwidth_" + tag, cl.bandwidth);
  }
  const std::vector<std::string> header{"x1", "x2", "cluster"};
  out.matrix("data.csv", header, stack_rows(real));
  out.matrix("cgan_samples.csv", header, stack_rows(cgan));
  out.matrix("kde_samples.csv", header, stack_rows(kde));
}

Config gmm_integer_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.noise_dim = 10;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = p == Preset::Desk ? 200 : 500;
  add_gan_keys(c, g);
  c.set("data.per_cluster", "1000");
  c.set("data.condition_scale", "1");
  c.set("eval.labels", "0,0.5,1,1.5,2,2.5,3");
  c.set("eval.per_label", "1000");
  return c;
}

void run_gmm_integer(const Config& c, std::uint64_t seed, Output& out) {
  studies::MixtureIntegerOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "gmm-integer-extrapolation");
  o.per_cluster = c.get_size("data.per_cluster");
  o.condition_scale = c.get_double("data.condition_scale");
  o.eval_labels = c.get_doubles("eval.labels");
  o.eval_per_label = c.get_size("eval.per_label");
  o.seed = seed;
  const auto r = studies::mixture_integer_study(o);
  write_trace(out, "trace.csv", r.trained.trace);
  Matrix data(r.data.samples.rows(), 3);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    data.row(i) << r.data.samples(i, 0), r.data.samples(i, 1), r.data.labels[static_cast<std::size_t>(i)];
  }
  out.matrix("data.csv", {"x1", "x2", "label"}, data);
  std::vector<Matrix> gen;
  for (const auto& d : r.draws) {
    gen.push_back(with_label(d.samples, d.label));
    const Eigen::RowVectorXd mean = d.samples.colwise().mean();
    std::ostringstream tag;
    tag << d.label;
    out.metric("mean_x1_label_" + tag.str(), mean(0));
    out.metric("mean_x2_label_" + tag.str(), mean(1));
  }
  out.matrix("generated.csv", {"x1", "x2", "label"}, stack_rows(gen));
}

void write_conditioned(Output& out, const std::string& name, const synth::ConditionedSamples& d) {
  Matrix m(d.samples.rows(), 5);
  m << d.conditions, d.samples, d.variances;
  out.matrix(name, {"cond1", "cond2", "x1", "x2", "variance"}, m);
}

void write_generated(Output& out, const std::string& name, const Matrix& conditions, const Matrix& gen) {
  Matrix m(gen.rows(), 4);
  m << conditions, gen;
  out.matrix(name, {"cond1", "cond2", "x1", "x2"}, m);
}

void report_continuous(const studies::ContinuousConditionResult& r, Output& out) {
  write_trace(out, "trace.csv", r.trained.trace);
  write_conditioned(out, "data.csv", r.full);
  write_conditioned(out, "training_data.csv", r.training);
  write_generated(out, "generated.csv", r.full.conditions, r.generated);
  for (std::size_t d = 0; d < 2; ++d) {
    const std::string dt = "d" + std::to_string(d + 1);
    write_qq(out, "qq_" + dt + ".csv", r.qq[d]);
    out.metric("qq_slope_" + dt, r.qq[d].slope);
    out.metric("qq_r2_" + dt, r.qq[d].r_squared);
  }
  if (r.extrapolated) {
    write_conditioned(out, "extrapolation_truth.csv", *r.extrapolation_truth);
    write_generated(out, "extrapolated.csv", r.extrapolation_truth->conditions, *r.extrapolated);
  }
}

Config circle_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.noise_dim = 10;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = p == Preset::Desk ? 200 : 500;
  add_gan_keys(c, g);
  c.set("data.points", "1000");
  c.set("data.radius", "2");
  c.set("data.var_lo", "0.05");
  c.set("data.var_hi", "0.5");
  c.set("eval.extrapolation_radius", "3");
  c.set("eval.qq_points", "99");
  return c;
}

void run_circle(const Config& c, std::uint64_t seed, Output& out) {
  studies::CircleOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "gmm-circle");
  o.points = c.get_size("data.points");
  o.radius = c.get_double("data.radius");
  o.var_lo = c.get_double("data.var_lo");
  o.var_hi = c.get_double("data.var_hi");
  o.extrapolation_radius = c.get_double("eval.extrapolation_radius");
  o.qq_points = c.get_size("eval.qq_points");
  o.seed = seed;
  report_continuous(studies::circle_study(o), out);
}

Config line_defaults(Preset p, double slope) {
  Config c;
  GanDefaults g;
  g.noise_dim = 10;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = p == Preset::Desk ? 200 : 500;
  add_gan_keys(c, g);
  c.set("data.points", "1000");
  c.set("data.x_lo", "-4");
  c.set("data.x_hi", "4");
  c.set("data.var_slope", format_double(slope));
  c.set("data.base_var", "0.05");
  c.set("data.clip_fraction", "0.2");
  c.set("eval.qq_points", "99");
  return c;
}

void run_line(const Config& c, std::uint64_t seed, Output& out) {
  studies::LineOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "gmm-line");
  o.points = c.get_size("data.points");
  o.x_lo = c.get_double("data.x_lo");
  o.x_hi = c.get_double("data.x_hi");
  o.var_slope = c.get_double("data.var_slope");
  o.base_var = c.get_double("data.base_var");
  o.clip_fraction = c.get_double("data.clip_fraction");
  o.qq_points = c.get_size("eval.qq_points");
  o.seed = seed;
  report_continuous(studies::line_study(o), out);
}

// ---------------------------------------------------------------------------
// VAR(1)

synth::VarSpec var_spec_for(const std::string& mode) {
  if (mode == "sum_abs") return synth::var1_sum_abs_spec();
  if (mode == "per_series_abs") return synth::var1_per_series_abs_spec();
  if (mode == "constant") return synth::var1_constant_spec();
  throw ConfigError("unknown noise mode '" + mode + "' (constant, sum_abs, per_series_abs)");
}

void report_scatter(const studies::MomentScatter& s, const std::string& prefix, Output& out) {
  out.write(prefix + "moments.csv", [&](std::ostream& o) { s.write_csv(o); });
  for (std::size_t k = 0; k < s.series; ++k) {
    const auto sum = s.summary(k);
    const std::string tag = prefix + "s" + std::to_string(k + 1) + "_";
    out.metric(tag + "mean_slope", sum.mean_fit.slope);
    out.metric(tag + "mean_r2", sum.mean_fit.r_squared);
    out.metric(tag + "variance_slope", sum.variance_fit.slope);
    out.metric(tag + "variance_r2", sum.variance_fit.r_squared);
    out.metric(tag + "positive_kurtosis_share", sum.positive_kurtosis_share);
    out.metric(tag + "median_qq_slope", sum.median_qq_slope);
    out.metric(tag + "median_qq_r2", sum.median_qq_r_squared);
  }
}

Config var1_continuous_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.track_every = 250;
  add_gan_keys(c, g);
  c.erase("train.iterations");
  c.set("chain.samples", pick(p, "5000", "1000"));
  c.set("chain.iterations", pick(p, "5000", "10000"));
  c.set("chain.length", "20000");
  c.set("chain.track_length", "4000");
  c.set("scatter.samples", pick(p, "5000", "1000"));
  c.set("scatter.iterations", pick(p, "1500", "10000"));
  c.set("scatter.noise_mode", "sum_abs");
  c.set("scatter.conditions", pick(p, "100", "500"));
  c.set("scatter.draws", pick(p, "2000", "10000"));
  c.set("eval.qq_points", "99");
  return c;
}

void run_var1_continuous(const Config& c, std::uint64_t seed, Output& out) {
  studies::ChainOptions ch;
  ch.setup = gan_setup(c, "chain.iterations");
  require_conditional(ch.setup, "var1-continuous");
  ch.samples = c.get_size("chain.samples");
  ch.chain_length = c.get_size("chain.length");
  ch.track_chain_length = c.get_size("chain.track_length");
  ch.seed = derive_seed(seed, "chain");
  out.log() << "training the lag-dependence model\n";
  const auto cr = studies::chain_study(ch);
  write_trace(out, "chain_trace.csv", cr.trained.trace);
  for (std::size_t s = 0; s < cr.lag1.size(); ++s) {
    const std::string tag = "s" + std::to_string(s + 1);
    out.metric("chain_lag1_" + tag, cr.lag1[s]);
    out.metric("chain_lag1_target_" + tag, cr.target1[s]);
    out.metric("chain_lag2_" + tag, cr.lag2[s]);
    out.metric("chain_lag2_target_" + tag, cr.target2[s]);
  }

  studies::VarScatterOptions sc;
  sc.setup = gan_setup(c, "scatter.iterations");
  sc.spec = var_spec_for(c.get_string("scatter.noise_mode"));
  sc.samples = c.get_size("scatter.samples");
  sc.conditions = c.get_size("scatter.conditions");
  sc.draws = c.get_size("scatter.draws");
  sc.qq_points = c.get_size("eval.qq_points");
  sc.seed = derive_seed(seed, "scatter");
  out.log() << "training the conditional-moment model\n";
  const auto sr = studies::var_scatter_study(sc);
  write_trace(out, "scatter_trace.csv", sr.trained.trace);
  report_scatter(sr.scatter, "scatter_", out);
}

Config var1_large_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = 250;
  add_gan_keys(c, g);
  c.set("data.samples", "20000");
  c.set("data.noise_mode", "sum_abs");
  c.set("eval.conditions", pick(p, "100", "500"));
  c.set("eval.draws", pick(p, "2000", "10000"));
  c.set("eval.qq_points", "99");
  return c;
}

void run_var1_large(const Config& c, std::uint64_t seed, Output& out) {
  studies::VarScatterOptions sc;
  sc.setup = gan_setup(c);
  require_conditional(sc.setup, "var1-large");
  sc.spec = var_spec_for(c.get_string("data.noise_mode"));
  sc.samples = c.get_size("data.samples");
  sc.conditions = c.get_size("eval.conditions");
  sc.draws = c.get_size("eval.draws");
  sc.qq_points = c.get_size("eval.qq_points");
  sc.seed = seed;
  const auto sr = studies::var_scatter_study(sc);
  write_trace(out, "trace.csv", sr.trained.trace);
  report_scatter(sr.scatter, "", out);
}

Config region_continuous_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = 250;
  add_gan_keys(c, g);
  c.set("data.per_region", pick(p, "5000", "10000"));
  c.set("eval.conditions_per_region", pick(p, "100", "500"));
  c.set("eval.draws", pick(p, "2000", "10000"));
  c.set("eval.qq_points", "99");
  return c;
}

void run_region_continuous(const Config& c, std::uint64_t seed, Output& out) {
  studies::RegionContinuousOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "region-continuous");
  o.per_region = c.get_size("data.per_region");
  o.conditions_per_region = c.get_size("eval.conditions_per_region");
  o.draws = c.get_size("eval.draws");
  o.qq_points = c.get_size("eval.qq_points");
  o.seed = seed;
  const auto r = studies::region_continuous_study(o);
  write_trace(out, "trace.csv", r.trained.trace);
  for (std::size_t k = 0; k < r.regions.size(); ++k) {
    report_scatter(r.regions[k], "r" + std::to_string(k + 1) + "_", out);
  }
}

void stat_metrics(Output& out, const std::string& prefix, const stats::DependencyStats& st) {
  out.metric(prefix + "cor_t", st.cor_t);
  out.metric(prefix + "cor_s", st.cor_s);
  out.metric(prefix + "cor_st", st.cor_st);
  out.metric(prefix + "vol_t", st.vol_t);
  out.metric(prefix + "vol_s", st.vol_s);
  out.metric(prefix + "vol_st", st.vol_st);
}

Config region_categorical_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.iterations = p == Preset::Desk ? 3000 : 10000;
  g.track_every = p == Preset::Desk ? 250 : 500;
  add_gan_keys(c, g);
  c.set("data.per_region", pick(p, "5000", "10000"));
  c.set("eval.track_samples", pick(p, "2000", "5000"));
  c.set("eval.samples", "5000");
  c.set("eval.qq_points", "99");
  return c;
}

void run_region_categorical(const Config& c, std::uint64_t seed, Output& out) {
  studies::RegionCategoricalOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "region-categorical");
  o.per_region = c.get_size("data.per_region");
  o.track_samples = c.get_size("eval.track_samples");
  o.eval_samples = c.get_size("eval.samples");
  o.qq_points = c.get_size("eval.qq_points");
  o.seed = seed;
  const auto r = studies::region_categorical_study(o);
  write_trace(out, "trace.csv", r.trained.trace);
  const std::vector<std::string> header{"t0_s1", "t0_s2", "t1_s1", "t1_s2"};
  for (std::size_t k = 0; k < r.real.size(); ++k) {
    const std::string tag = "r" + std::to_string(k + 1);
    out.matrix("real_" + tag + ".csv", header, r.real[k]);
    out.matrix("generated_" + tag + ".csv", header, r.generated[k]);
    write_qq(out, "qq_" + tag + "_s1.csv", r.qq[k][0]);
    write_qq(out, "qq_" + tag + "_s2.csv", r.qq[k][1]);
    stat_metrics(out, tag + "_train_", r.training_stats[k]);
    stat_metrics(out, tag + "_final_", r.final_stats[k]);
  }
}

// ---------------------------------------------------------------------------
// GARCH

Config garch_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = 250;
  add_gan_keys(c, g);
  c.set("data.samples", "10000");
  c.set("eval.conditions", pick(p, "100", "500"));
  c.set("eval.draws", pick(p, "2000", "10000"));
  c.set("eval.qq_points", "99");
  return c;
}

void run_garch(const Config& c, std::uint64_t seed, Output& out, studies::GarchConditioning cond) {
  studies::GarchOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "garch");
  o.conditioning = cond;
  o.samples = c.get_size("data.samples");
  o.conditions = c.get_size("eval.conditions");
  o.draws = c.get_size("eval.draws");
  o.qq_points = c.get_size("eval.qq_points");
  // Data, evaluation conditions and initial weights depend only on the run
  // seed, so the two conditioning choices are compared on equal footing.
  o.data_seed = derive_seed(seed, "garch-data");
  o.eval_seed = derive_seed(seed, "garch-eval");
  o.train_seed = derive_seed(seed, "garch-train");
  const auto r = studies::garch_study(o);
  write_trace(out, "trace.csv", r.trained.trace);
  report_scatter(r.scatter, "", out);
  out.matrix("sigma2_t.csv", {"sigma2_s1", "sigma2_s2"}, r.sigma2_t);
  for (std::size_t s = 0; s < r.variance_correlation.size(); ++s) {
    out.metric("variance_correlation_s" + std::to_string(s + 1), r.variance_correlation[s]);
  }
}

// ---------------------------------------------------------------------------
// Equity

Config equity_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.iterations = p == Preset::Desk ? 2000 : 10000;
  g.track_every = p == Preset::Desk ? 200 : 500;
  add_gan_keys(c, g);
  c.set("data.prices", "");
  c.set("data.return_mode", "difference");
  c.set("periods.stressed_start", "2007-11-01");
  c.set("periods.stressed_end", "2009-11-01");
  c.set("periods.normal_start", "2009-11-01");
  c.set("periods.normal_end", "2011-11-01");
  c.set("periods.backtest_start", "2011-11-01");
  c.set("periods.backtest_end", "2015-11-01");
  c.set("risk.positions", "1,1");
  c.set("risk.scale", "50");
  c.set("risk.level", "0.99");
  c.set("eval.track_samples", "2000");
  c.set("eval.qq_points", "99");
  return c;
}

void run_equity(const Config& c, std::uint64_t seed, Output& out) {
  market::DatedTable prices;
  const std::string path = c.get_string("data.prices");
  if (path.empty()) {
    Rng rng(derive_seed(seed, "standin"));
    prices = market::synthetic_equity_prices(c.get_string("periods.stressed_start"),
                                             c.get_string("periods.backtest_end"),
                                             c.get_string("periods.normal_start"), rng);
    out.write("prices_input.csv", [&](std::ostream& s) { prices.write_csv(s); });
  } else {
    prices = market::ingest_prices(path);
  }
  const auto returns = market::returns_from_prices(prices, market::parse_return_mode(c.get_string("data.return_mode")));
  const std::vector<market::Period> periods{
      {"stressed", c.get_string("periods.stressed_start"), c.get_string("periods.stressed_end")},
      {"normal", c.get_string("periods.normal_start"), c.get_string("periods.normal_end")},
      {"backtest", c.get_string("periods.backtest_start"), c.get_string("periods.backtest_end")}};

  studies::EquityData data;
  data.names = returns.names;
  data.returns = returns.values;
  data.period = market::label_periods(returns.dates, periods);

  studies::EquityOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "equity-backtest");
  o.positions = c.get_doubles("risk.positions");
  o.scale = c.get_size("risk.scale");
  o.level = c.get_double("risk.level");
  o.track_samples = c.get_size("eval.track_samples");
  o.qq_points = c.get_size("eval.qq_points");
  o.seed = seed;
  const auto r = studies::equity_study(data, o);

  write_trace(out, "trace.csv", r.trained.trace);
  out.write("comparison.csv", [&](std::ostream& s) { risk::write_comparison_csv(s, r.rows); });
  const char* const names[] = {"stressed", "normal"};
  for (std::size_t p = 0; p < r.generated.size(); ++p) {
    out.matrix(std::string("generated_") + names[p] + ".csv", data.names, r.generated[p]);
    for (std::size_t s = 0; s < 2; ++s) {
      write_qq(out, std::string("qq_") + names[p] + "_" + data.names[s] + ".csv", r.qq[p][s]);
    }
    stat_metrics(out, std::string(names[p]) + "_train_", r.training_stats[p]);
  }
  for (const auto& row : r.rows) {
    const std::string tag = row.method + "_" + row.period + "_";
    out.metric(tag + "var", row.report.var);
    out.metric(tag + "es", row.report.es);
    if (row.backtest) {
      out.metric(tag + "breaches", static_cast<double>(row.backtest->breaches));
      out.metric(tag + "expected", row.backtest->expected_breaches);
      out.metric(tag + "realized_es", row.backtest->realized_es);
    }
  }
}

// ---------------------------------------------------------------------------
// Macro

Config macro_defaults(Preset p) {
  Config c;
  GanDefaults g;
  g.iterations = p == Preset::Desk ? 2000 : 30000;
  g.batch_size = 100;
  g.track_every = p == Preset::Desk ? 200 : 500;
  add_gan_keys(c, g);
  c.set("data.path", "");
  c.set("data.quarters", "243");
  c.set("data.transforms", "logdiff,diff,diff,logdiff,diff");
  c.set("forecast.window", "13");
  c.set("forecast.condition_window", "4");
  c.set("forecast.paths", "100");
  c.set("forecast.tracked_series", "gdp");
  c.set("shock.series", "fedfunds");
  c.set("shock.sd", "1");
  return c;
}

std::size_t series_index(const std::vector<std::string>& names, const std::string& key,
                         const std::string& wanted) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == wanted) return i;
  }
  throw ConfigError(key + ": no series named '" + wanted + "'");
}

void run_macro(const Config& c, std::uint64_t seed, Output& out) {
  market::DatedTable levels;
  const std::string path = c.get_string("data.path");
  if (path.empty()) {
    Rng rng(derive_seed(seed, "standin"));
    levels = market::synthetic_macro_levels(c.get_size("data.quarters"), rng);
    out.write("macro_input.csv", [&](std::ostream& s) { levels.write_csv(s); });
  } else {
    levels = market::ingest_series(path);
  }
  studies::MacroData data;
  data.names = levels.names;
  data.levels = levels.values;
  for (const auto& t : c.get_strings("data.transforms")) data.transforms.push_back(prep::parse_transform(t));
  if (data.transforms.size() != data.names.size()) {
    throw ConfigError("data.transforms: need one transform per series (" +
                      std::to_string(data.names.size()) + ")");
  }
  studies::MacroOptions o;
  o.setup = gan_setup(c);
  require_conditional(o.setup, "macro-forecast");
  o.window = c.get_size("forecast.window");
  o.condition_window = c.get_size("forecast.condition_window");
  o.n_paths = c.get_size("forecast.paths");
  o.tracked_series = series_index(data.names, "forecast.tracked_series", c.get_string("forecast.tracked_series"));
  o.shock_variable = series_index(data.names, "shock.series", c.get_string("shock.series"));
  o.shock_sd = c.get_double("shock.sd");
  o.seed = seed;
  const auto r = studies::macro_study(data, o);

  write_trace(out, "trace.csv", r.trained.trace);
  out.write("fan.csv", [&](std::ostream& s) { r.fan.write_csv(s, data.names); });
  out.write("shock.csv", [&](std::ostream& s) { r.shock.write_csv(s, data.names); });
  const Matrix mean = r.fan.mean_path();
  const Matrix lo = r.fan.quantile_path(0.01);
  const Matrix mid = r.fan.quantile_path(0.5);
  const Matrix hi = r.fan.quantile_path(0.99);
  Matrix summary(static_cast<Eigen::Index>(r.fan.quarters * r.fan.series), 6);
  Eigen::Index row = 0;
  for (Eigen::Index q = 0; q < mean.rows(); ++q) {
    for (Eigen::Index s = 0; s < mean.cols(); ++s) {
      summary.row(row++) << static_cast<double>(q + 1), static_cast<double>(s), mean(q, s), lo(q, s),
          mid(q, s), hi(q, s);
    }
  }
  out.matrix("fan_summary.csv", {"quarter", "series", "mean", "p01", "p50", "p99"}, summary);
  out.metric("panel_samples", static_cast<double>(r.panel_samples));
  out.metric("train_" + data.names[o.tracked_series] + "_mean", r.training_moments[0]);
  out.metric("train_" + data.names[o.tracked_series] + "_sd", r.training_moments[1]);
  out.metric("train_" + data.names[o.tracked_series] + "_autocorr", r.training_moments[2]);
  for (std::size_t s = 0; s < data.names.size(); ++s) {
    const auto col = static_cast<Eigen::Index>(s);
    out.metric("shock_effect_mean_" + data.names[s],
               (r.shock.shocked_mean.col(col) - r.shock.baseline_mean.col(col)).mean());
  }
}

// ---------------------------------------------------------------------------
// Registry

struct Entry {
  ScenarioInfo info;
  std::function<Config(Preset)> defaults;
  std::function<void(const Config&, std::uint64_t, Output&)> body;
};

const std::vector<Entry>& registry() {
  using studies::GarchConditioning;
  static const std::vector<Entry> entries{
      {{"inverse-cdf", "Learn N(0,1) from uniform noise with 1x7, 1x100, 2x100 and 3-noise nets"},
       inverse_cdf_defaults, run_inverse_cdf},
      {{"gmm-categorical", "Four Gaussian clusters with one-hot conditions, KDE benchmark"},
       gmm_categorical_defaults, run_gmm_categorical},
      {{"gmm-integer-extrapolation", "Integer cluster labels; fractional labels interpolate"},
       gmm_integer_defaults, run_gmm_integer},
      {{"gmm-circle", "Means on a circle as continuous conditions, variance growing along it"},
       circle_defaults, run_circle},
      {{"gmm-line-slow", "Variance growing slowly along a line; train on the middle, extrapolate ends"},
       [](Preset p) { return line_defaults(p, 0.1); }, run_line},
      {{"gmm-line-fast", "Variance growing quickly along a line; train on the middle, extrapolate ends"},
       [](Preset p) { return line_defaults(p, 0.5); }, run_line},
      {{"var1-continuous", "VAR(1) with lag-1 conditions: a^3/a^4 chain check and conditional moments"},
       var1_continuous_defaults, run_var1_continuous},
      {{"var1-large", "Conditional moments with 20,000 training samples"}, var1_large_defaults,
       run_var1_large},
      {{"region-continuous", "Two-region VAR(1) with lag-1 conditions"}, region_continuous_defaults,
       run_region_continuous},
      {{"region-categorical", "Two-region VAR(1) window-2 panels with one-hot region conditions"},
       region_categorical_defaults, run_region_categorical},
      {{"garch-sigma-t", "GARCH(1,1) conditioned on sigma_t^2"}, garch_defaults,
       [](const Config& c, std::uint64_t s, Output& o) { run_garch(c, s, o, GarchConditioning::SigmaT); }},
      {{"garch-sigma-t-1", "GARCH(1,1) conditioned on sigma_{t-1}^2"}, garch_defaults,
       [](const Config& c, std::uint64_t s, Output& o) {
         run_garch(c, s, o, GarchConditioning::SigmaTMinus1);
       }},
      {{"equity-backtest", "Two-instrument VaR/ES: historical simulation vs CGAN, with backtest"},
       equity_defaults, run_equity},
      {{"macro-forecast", "Five-series quarterly forecast fan and rate shock"}, macro_defaults,
       run_macro},
  };
  return entries;
}

const Entry& find_entry(const std::string& name) {
  // The window-2 regional study also goes by its VAR(1) name.
  const std::string key = name == "var1-categorical" ? std::string("region-categorical") : name;
  for (const auto& e : registry()) {
    if (e.info.name == key) return e;
  }
  throw UnknownScenario("unknown scenario '" + name + "' (see 'list')");
}

}  // namespace

Preset parse_preset(const std::string& s) {
  if (s == "desk") return Preset::Desk;
  if (s == "paper") return Preset::Paper;
  throw ConfigError("unknown preset '" + s + "' (desk, paper)");
}

std::string to_string(Preset p) { return p == Preset::Desk ? "desk" : "paper"; }

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& e : registry()) out.push_back(e.info);
  return out;
}

Config default_config(const std::string& scenario, Preset preset) {
  Config c = find_entry(scenario).defaults(preset);
  c.set("seed", "1");
  return c;
}

RunOutcome run(const RunRequest& request, std::ostream& log) {
  const Entry& entry = find_entry(request.scenario);
  Config overrides = request.overrides;
  if (overrides.has("scenario")) {
    if (&find_entry(overrides.get_string("scenario")) != &entry) {
      throw ConfigError("config is for scenario '" + overrides.get_string("scenario") + "', not '" +
                        request.scenario + "'");
    }
    overrides.erase("scenario");
  }
  RunOutcome outcome;
  outcome.effective = default_config(request.scenario, request.preset);
  outcome.effective.merge_known(overrides);
  if (request.seed) outcome.effective.set("seed", std::to_string(*request.seed));
  outcome.seed = outcome.effective.get_u64("seed");

  log << "scenario " << entry.info.name << " (" << to_string(request.preset) << ", seed "
      << outcome.seed << ")\n";
  Output out(request.out_dir, log);
  entry.body(outcome.effective, outcome.seed, out);

  out.write("summary.csv", [&](std::ostream& s) {
    s << "metric,value\n";
    for (const auto& [k, v] : out.summary()) s << k << ',' << format_double(v) << '\n';
  });

  nlohmann::ordered_json manifest;
  manifest["scenario"] = entry.info.name;
  manifest["preset"] = to_string(request.preset);
  manifest["seed"] = outcome.seed;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : outcome.effective.entries()) {
    if (k != "seed") cfg[k] = v;
  }
  manifest["config"] = cfg;
  manifest["outputs"] = out.files();
  out.write("manifest.json", [&](std::ostream& s) { s << manifest.dump(2) << '\n'; });

  outcome.files = out.files();
  outcome.summary = out.summary();
  return outcome;
}

}  // namespace cgan::scenarios
