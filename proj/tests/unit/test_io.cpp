#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgan/config.hpp"
#include "cgan/csv.hpp"
#include "cgan/errors.hpp"
#include "cgan/marketdata.hpp"

using namespace cgan;
using namespace cgan::market;

namespace {

std::string temp_file(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "cgan_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / name).string();
  std::ofstream(path) << body;
  return path;
}

DatedTable table(const std::string& csv) {
  std::istringstream in(csv);
  return read_dated_table(in, true);
}

}  // namespace

TEST(Csv, SeventeenDigitRoundTrip) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 123456789.123456789, 0.0}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_THROW(parse_double("1.5x"), DataError);
  EXPECT_THROW(parse_double(""), DataError);
}

TEST(Csv, WriteThenReadMatrix) {
  Matrix m(2, 2);
  m << 1.5, -2, 1.0 / 3.0, 4e10;
  std::stringstream ss;
  const std::vector<std::string> names{"a", "b"};
  write_matrix_csv(ss, names, m);
  const auto t = read_csv(ss);
  EXPECT_EQ(t.header, names);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(parse_double(t.rows[1][0]), 1.0 / 3.0);
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_THROW(t.column("c"), DataError);
}

TEST(Csv, CommentsBlankLinesAndRaggedRows) {
  std::istringstream ok("# note\nx,y\n\n1,2\n# skip\n3,4\n");
  EXPECT_EQ(read_csv(ok).rows.size(), 2u);
  std::istringstream ragged("x,y\n1,2,3\n");
  EXPECT_THROW(read_csv(ragged), DataError);
  EXPECT_THROW(read_csv_file("/nonexistent/file.csv"), DataError);
}

TEST(Config, SectionsCommentsAndTypes) {
  std::istringstream in(
      "seed = 7   # top level\n"
      "[train]\n"
      "iterations = 2000\n"
      "learning_rate = 1e-4\n"
      "[gan]\n"
      "generator_hidden = 100, 100,100\n"
      "variant = cgan\n"
      "[risk]\n"
      "positions = 1,-0.5\n"
      "flag = yes\n");
  const auto c = parse_config(in);
  EXPECT_EQ(c.get_u64("seed"), 7u);
  EXPECT_EQ(c.get_size("train.iterations"), 2000u);
  EXPECT_DOUBLE_EQ(c.get_double("train.learning_rate"), 1e-4);
  EXPECT_EQ(c.get_sizes("gan.generator_hidden"), (std::vector<std::size_t>{100, 100, 100}));
  EXPECT_EQ(c.get_string("gan.variant"), "cgan");
  EXPECT_EQ(c.get_doubles("risk.positions"), (std::vector<double>{1.0, -0.5}));
  EXPECT_TRUE(c.get_bool("risk.flag"));
  EXPECT_THROW(c.get_string("train.missing"), ConfigError);
  EXPECT_THROW(c.get_size("gan.variant"), ConfigError);
  EXPECT_THROW(c.get_double("gan.variant"), ConfigError);
  EXPECT_THROW(c.get_bool("gan.variant"), ConfigError);
}

TEST(Config, MalformedInputsRejected) {
  for (const char* bad : {"[train\nx = 1\n", "just words\n", "a = 1\na = 2\n", "[bad name]\n", "= 3\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(parse_config(in), ConfigError) << bad;
  }
  std::istringstream neg("n = -3\n");
  EXPECT_THROW(parse_config(neg).get_size("n"), ConfigError);
}

TEST(Config, WriteParsesBack) {
  Config c;
  c.set("seed", "3");
  c.set("train.iterations", "10");
  c.set("gan.variant", "wgan");
  std::stringstream ss;
  c.write(ss);
  EXPECT_EQ(parse_config(ss).entries(), c.entries());
}

TEST(Config, MergeKnownRejectsUnknownKeys) {
  Config base;
  base.set("train.iterations", "10");
  Config good;
  good.set("train.iterations", "20");
  base.merge_known(good);
  EXPECT_EQ(base.get_size("train.iterations"), 20u);
  Config bad;
  bad.set("train.iteratons", "20");
  EXPECT_THROW(base.merge_known(bad), ConfigError);
  EXPECT_EQ(base.get_size("train.iterations"), 20u);
}

TEST(Config, LoadsManifestJson) {
  const auto path = temp_file("manifest.json",
                              R"({"scenario":"gmm-circle","seed":42,"config":{"train.iterations":"5"}})");
  const auto c = load_config_file(path);
  EXPECT_EQ(c.get_u64("seed"), 42u);
  EXPECT_EQ(c.get_string("scenario"), "gmm-circle");
  EXPECT_EQ(c.get_size("train.iterations"), 5u);
  EXPECT_THROW(load_config_file(temp_file("broken.json", "{not json")), ConfigError);
  EXPECT_THROW(load_config_file(temp_file("noconfig.json", "{}")), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/run.cfg"), ConfigError);
}

TEST(Dates, Validation) {
  EXPECT_EQ(parse_date("2008-02-29"), "2008-02-29");
  for (const char* bad : {"2007-02-29", "2007-13-01", "07/11/2007", "2007-1-01", ""}) {
    EXPECT_THROW(parse_date(bad), DataError) << bad;
  }
}

TEST(Prices, SortedDroppedAndValidated) {
  const auto t = table("date,A,B\n2020-01-03,101,50\n2020-01-02,100,49\n2020-01-06,,51\n2020-01-07,99,52\n");
  EXPECT_EQ(t.dates, (std::vector<std::string>{"2020-01-02", "2020-01-03", "2020-01-07"}));
  EXPECT_EQ(t.names, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(t.values(0, 0), 100);
  EXPECT_THROW(table("date,A\n2020-01-02,1\n2020-01-02,2\n"), DataError);
  EXPECT_THROW(table("date,A\n2020-01-02,-1\n"), DataError);
  EXPECT_THROW(table("date,A\n2020-01-02,abc\n"), DataError);
  EXPECT_THROW(table("day,A\n2020-01-02,1\n"), DataError);
  std::istringstream neg("date,A\n2020-01-02,-1\n");
  EXPECT_EQ(read_dated_table(neg, false).values(0, 0), -1);
  EXPECT_THROW(ingest_prices("/nonexistent/prices.csv"), DataError);
}

TEST(Returns, ModesOnHandSeries) {
  const auto p = table("date,A\n2020-01-01,100\n2020-01-02,101\n2020-01-03,99\n");
  const auto d = returns_from_prices(p, ReturnMode::Difference);
  EXPECT_EQ(d.dates, (std::vector<std::string>{"2020-01-02", "2020-01-03"}));
  EXPECT_EQ(d.values(0, 0), 1);
  EXPECT_EQ(d.values(1, 0), -2);
  EXPECT_NEAR(returns_from_prices(p, ReturnMode::Simple).values(0, 0), 0.01, 1e-15);
  EXPECT_NEAR(returns_from_prices(p, ReturnMode::Log).values(1, 0), std::log(99.0 / 101.0), 1e-15);
  for (auto m : {ReturnMode::Difference, ReturnMode::Simple, ReturnMode::Log}) {
    EXPECT_EQ(parse_return_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_return_mode("pct"), ConfigError);
}

TEST(Returns, MergeAlignsOnDateIntersection) {
  const auto a = table("date,A\n2020-01-01,1\n2020-01-02,2\n2020-01-03,3\n");
  const auto b = table("date,B\n2020-01-02,20\n2020-01-03,30\n2020-01-04,40\n");
  const auto m = merge_on_dates(a, b);
  EXPECT_EQ(m.dates, (std::vector<std::string>{"2020-01-02", "2020-01-03"}));
  EXPECT_EQ(m.names, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.values(1, 0), 3);
  EXPECT_EQ(m.values(1, 1), 30);
  EXPECT_EQ(returns_from_prices(m, ReturnMode::Difference).values.cols(), 2);
}

TEST(Periods, BoundariesSplitStressedAndNormal) {
  const std::vector<Period> periods{{"stressed", "2007-11-01", "2009-11-01"},
                                    {"normal", "2009-11-01", "2011-11-01"}};
  const std::vector<std::string> dates{"2007-10-31", "2007-11-01", "2009-10-30",
                                       "2009-11-02", "2011-10-31", "2011-11-01"};
  EXPECT_EQ(label_periods(dates, periods), (std::vector<int>{-1, 0, 0, 1, 1, -1}));
  EXPECT_THROW(label_periods(dates, {{"bad", "2010-01-01", "2009-01-01"}}), ConfigError);
}

TEST(StandIn, EquityPricesAreBusinessDaysAndPositive) {
  Rng rng(1);
  const auto t = synthetic_equity_prices("2007-11-01", "2008-01-01", "2007-12-01", rng);
  EXPECT_EQ(t.dates.front(), "2007-11-01");
  EXPECT_EQ(t.dates.size(), 43u);
  EXPECT_GT(t.values.minCoeff(), 0.0);
  std::stringstream ss;
  t.write_csv(ss);
  const auto back = read_dated_table(ss, true);
  EXPECT_EQ(back.dates, t.dates);
  EXPECT_EQ(back.values, t.values);
}

TEST(StandIn, MacroLevelsShape) {
  Rng rng(2);
  const auto t = synthetic_macro_levels(243, rng);
  EXPECT_EQ(t.values.rows(), 243);
  EXPECT_EQ(t.names.size(), 5u);
  EXPECT_EQ(t.dates.front(), "1956-01-01");
  EXPECT_EQ(t.dates[5], "1957-04-01");
  EXPECT_GT(t.values.col(0).minCoeff(), 0.0);
  EXPECT_GT(t.values.col(3).minCoeff(), 0.0);
}
