#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cgan/config.hpp"
#include "cgan/csv.hpp"
#include "cgan/errors.hpp"
#include "cgan/scenarios.hpp"
#include "json.hpp"

using namespace cgan;
using namespace cgan::scenarios;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cgan_scenario_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunRequest tiny(const std::string& scenario, const fs::path& out) {
  RunRequest r;
  r.scenario = scenario;
  r.out_dir = out.string();
  r.seed = 5;
  r.overrides.set("train.iterations", "6");
  r.overrides.set("train.track_every", "3");
  return r;
}

std::ostringstream quiet;

}  // namespace

TEST(Registry, ListsEveryScenario) {
  std::set<std::string> names;
  for (const auto& s : list_scenarios()) names.insert(s.name);
  for (const char* n : {"inverse-cdf", "gmm-categorical", "gmm-integer-extrapolation", "gmm-circle",
                        "gmm-line-slow", "gmm-line-fast", "var1-continuous", "var1-large",
                        "region-continuous", "region-categorical", "garch-sigma-t", "garch-sigma-t-1",
                        "equity-backtest", "macro-forecast"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  EXPECT_EQ(names.size(), 14u);
}

TEST(Registry, PresetsShareKeysAndDeskIsSmaller) {
  for (const auto& s : list_scenarios()) {
    const auto desk = default_config(s.name, Preset::Desk);
    const auto paper = default_config(s.name, Preset::Paper);
    std::set<std::string> dk, pk;
    for (const auto& [k, v] : desk.entries()) dk.insert(k);
    for (const auto& [k, v] : paper.entries()) pk.insert(k);
    EXPECT_EQ(dk, pk) << s.name;
    if (desk.has("train.iterations")) {
      EXPECT_LE(desk.get_size("train.iterations"), paper.get_size("train.iterations")) << s.name;
    }
  }
  EXPECT_EQ(parse_preset("paper"), Preset::Paper);
  EXPECT_THROW(parse_preset("huge"), ConfigError);
}

TEST(Run, UnknownScenarioAndKeys) {
  RunRequest r;
  r.scenario = "no-such-thing";
  EXPECT_THROW(run(r, quiet), UnknownScenario);
  auto bad = tiny("gmm-circle", scratch("badkey"));
  bad.overrides.set("train.iteratons", "3");
  EXPECT_THROW(run(bad, quiet), ConfigError);
  auto wrong = tiny("gmm-circle", scratch("wrongvariant"));
  wrong.overrides.set("gan.variant", "gan");
  EXPECT_THROW(run(wrong, quiet), ConfigError);
  auto other = tiny("gmm-circle", scratch("otherscenario"));
  other.overrides.set("scenario", "gmm-line-slow");
  EXPECT_THROW(run(other, quiet), ConfigError);
}

TEST(Registry, Var1CategoricalNamesTheRegionalStudy) {
  EXPECT_EQ(default_config("var1-categorical", Preset::Desk).entries(),
            default_config("region-categorical", Preset::Desk).entries());
}

TEST(Run, UnreadablePriceFileIsDataError) {
  auto r = tiny("equity-backtest", scratch("noprices"));
  r.overrides.set("data.prices", "/nonexistent/prices.csv");
  EXPECT_THROW(run(r, quiet), DataError);
}

TEST(Run, InverseCdfWritesTraceSamplesAndKs) {
  const auto out = scratch("inverse");
  auto r = tiny("inverse-cdf", out);
  r.overrides.set("inverse.variants", "1x7");
  r.overrides.set("data.samples", "200");
  r.overrides.set("eval.samples", "200");
  r.overrides.set("eval.track_samples", "100");
  const auto o = run(r, quiet);
  EXPECT_TRUE(fs::exists(out / "trace_1x7.csv"));
  EXPECT_TRUE(fs::exists(out / "samples_1x7.csv"));
  EXPECT_TRUE(fs::exists(out / "knots_1x7.csv"));
  bool has_ks = false;
  for (const auto& [k, v] : o.summary) has_ks |= k == "ks_1x7" && v >= 0.0 && v <= 1.0;
  EXPECT_TRUE(has_ks);
  EXPECT_EQ(o.files.back(), "manifest.json");
}

TEST(Run, RegionCategoricalTracksSixStatisticsPerRegion) {
  const auto out = scratch("regioncat");
  auto r = tiny("region-categorical", out);
  r.overrides.set("data.per_region", "300");
  r.overrides.set("eval.track_samples", "200");
  r.overrides.set("eval.samples", "200");
  run(r, quiet);
  std::ifstream in(out / "trace.csv");
  const auto t = read_csv(in);
  for (const char* region : {"r1", "r2"}) {
    for (const char* stat : {"cor_t", "cor_s", "cor_st", "vol_t", "vol_s", "vol_st"}) {
      EXPECT_NO_THROW(t.column(std::string(region) + "_" + stat)) << region << stat;
    }
  }
}

TEST(Run, ManifestReproducesTheRun) {
  const auto a = scratch("manifest_a");
  const auto b = scratch("manifest_b");
  auto r = tiny("gmm-circle", a);
  r.overrides.set("data.points", "120");
  run(r, quiet);
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["scenario"], "gmm-circle");
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["config"]["train.iterations"], "6");

  RunRequest again;
  again.scenario = "gmm-circle";
  again.out_dir = b.string();
  again.overrides = load_config_file((a / "manifest.json").string());
  run(again, quiet);
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
  }
}

TEST(Run, OutputsCarryHeadersAndFullPrecision) {
  const auto out = scratch("headers");
  auto r = tiny("gmm-line-fast", out);
  r.overrides.set("data.points", "100");
  const auto o = run(r, quiet);
  for (const auto& f : o.files) {
    if (fs::path(f).extension() != ".csv") continue;
    std::ifstream in(out / f);
    const auto t = read_csv(in);
    EXPECT_FALSE(t.header.empty()) << f;
    for (const auto& h : t.header) {
      EXPECT_THROW(parse_double(h), DataError) << f << " header cell " << h;
    }
  }
  std::ifstream in(out / "generated.csv");
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_NE(line.find('.'), std::string::npos);
}
