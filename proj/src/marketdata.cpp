#include "cgan/marketdata.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"

namespace cgan::market {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(const std::string& iso) {
  const std::string d = parse_date(iso);
  const int y = std::stoi(d.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(d.substr(5, 2)));
  const unsigned day = static_cast<unsigned>(std::stoi(d.substr(8, 2)));
  return chr::year_month_day{chr::year{y}, chr::month{m}, chr::day{day}};
}

std::string to_iso(chr::year_month_day ymd) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

// Unit-variance Student-t pair with correlation rho.
std::pair<double, double> t_pair(double rho, double df, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::chi_squared_distribution<double> chi(df);
  const double z1 = g(rng);
  const double z2 = g(rng);
  const double w = std::sqrt((df - 2.0) / chi(rng));
  return {w * z1, w * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2)};
}

DatedTable read_file(const std::string& path, bool require_positive) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return read_dated_table(in, require_positive);
}

}  // namespace

void DatedTable::write_csv(std::ostream& out) const {
  std::vector<std::string> header{"date"};
  header.insert(header.end(), names.begin(), names.end());
  CsvWriter w(out);
  w.header(header);
  std::vector<std::string> cells;
  for (std::size_t t = 0; t < dates.size(); ++t) {
    cells.assign(1, dates[t]);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      cells.push_back(format_double(values(static_cast<Eigen::Index>(t), c)));
    }
    w.text_row(cells);
  }
}

std::string parse_date(const std::string& cell) {
  const bool shape = cell.size() == 10 && cell[4] == '-' && cell[7] == '-' &&
                     std::all_of(cell.begin(), cell.end(), [](char c) {
                       return c == '-' || (c >= '0' && c <= '9');
                     });
  if (!shape) throw DataError("unparseable date '" + cell + "' (expected YYYY-MM-DD)");
  const chr::year_month_day ymd{chr::year{std::stoi(cell.substr(0, 4))},
                                chr::month{static_cast<unsigned>(std::stoi(cell.substr(5, 2)))},
                                chr::day{static_cast<unsigned>(std::stoi(cell.substr(8, 2)))}};
  if (!ymd.ok()) throw DataError("invalid calendar date '" + cell + "'");
  return cell;
}

DatedTable read_dated_table(std::istream& in, bool require_positive) {
  const CsvTable raw = read_csv(in);
  if (raw.header.size() < 2 || raw.header.front() != "date") {
    throw DataError("dated CSV must start with a 'date' column followed by series columns");
  }
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& cells = raw.rows[r];
    if (std::any_of(cells.begin(), cells.end(), [](const std::string& c) { return c.empty(); })) {
      continue;
    }
    std::vector<double> v;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double x = parse_double(cells[c]);
      if (require_positive && !(x > 0.0)) {
        throw DataError("non-positive price " + cells[c] + " on " + cells[0]);
      }
      v.push_back(x);
    }
    rows.emplace_back(parse_date(cells[0]), std::move(v));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].first == rows[r - 1].first) throw DataError("duplicate date " + rows[r].first);
  }
  DatedTable t;
  t.names.assign(raw.header.begin() + 1, raw.header.end());
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    t.dates.push_back(rows[r].first);
    for (std::size_t c = 0; c < t.names.size(); ++c) {
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r].second[c];
    }
  }
  return t;
}

DatedTable ingest_prices(const std::string& path) { return read_file(path, true); }

DatedTable ingest_series(const std::string& path) { return read_file(path, false); }

DatedTable merge_on_dates(const DatedTable& a, const DatedTable& b) {
  std::unordered_map<std::string, Eigen::Index> in_b;
  for (std::size_t r = 0; r < b.dates.size(); ++r) in_b[b.dates[r]] = static_cast<Eigen::Index>(r);
  DatedTable out;
  out.names = a.names;
  out.names.insert(out.names.end(), b.names.begin(), b.names.end());
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (std::size_t r = 0; r < a.dates.size(); ++r) {
    const auto it = in_b.find(a.dates[r]);
    if (it == in_b.end()) continue;
    pairs.emplace_back(static_cast<Eigen::Index>(r), it->second);
    out.dates.push_back(a.dates[r]);
  }
  out.values.resize(static_cast<Eigen::Index>(pairs.size()), a.values.cols() + b.values.cols());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    out.values.row(row).head(a.values.cols()) = a.values.row(pairs[k].first);
    out.values.row(row).tail(b.values.cols()) = b.values.row(pairs[k].second);
  }
  return out;
}

ReturnMode parse_return_mode(const std::string& s) {
  if (s == "difference") return ReturnMode::Difference;
  if (s == "simple") return ReturnMode::Simple;
  if (s == "log") return ReturnMode::Log;
  throw ConfigError("unknown return mode '" + s + "' (difference, simple, log)");
}

std::string to_string(ReturnMode m) {
  switch (m) {
    case ReturnMode::Difference: return "difference";
    case ReturnMode::Simple: return "simple";
    case ReturnMode::Log: return "log";
  }
  return "difference";
}

DatedTable returns_from_prices(const DatedTable& prices, ReturnMode mode) {
  const Eigen::Index n = prices.values.rows();
  if (n < 2) throw DataError("returns_from_prices: need at least 2 price rows");
  DatedTable out;
  out.names = prices.names;
  out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
  out.values.resize(n - 1, prices.values.cols());
  for (Eigen::Index t = 1; t < n; ++t) {
    for (Eigen::Index c = 0; c < prices.values.cols(); ++c) {
      const double prev = prices.values(t - 1, c);
      const double cur = prices.values(t, c);
      switch (mode) {
        case ReturnMode::Difference: out.values(t - 1, c) = cur - prev; break;
        case ReturnMode::Simple: out.values(t - 1, c) = cur / prev - 1.0; break;
        case ReturnMode::Log: out.values(t - 1, c) = std::log(cur / prev); break;
      }
    }
  }
  return out;
}

std::vector<int> label_periods(const std::vector<std::string>& dates, const std::vector<Period>& periods) {
  for (const auto& p : periods) {
    parse_date(p.start);
    parse_date(p.end);
    if (!(p.start < p.end)) throw ConfigError("period '" + p.name + "' must start before it ends");
  }
  std::vector<int> labels;
  labels.reserve(dates.size());
  for (const auto& d : dates) {
    int label = -1;
    for (std::size_t k = 0; k < periods.size(); ++k) {
      if (d >= periods[k].start && d < periods[k].end) {
        label = static_cast<int>(k);
        break;
      }
    }
    labels.push_back(label);
  }
  return labels;
}

DatedTable synthetic_equity_prices(const std::string& start, const std::string& end,
                                   const std::string& calm_from, Rng& rng) {
  const chr::sys_days first{to_ymd(start)};
  const chr::sys_days last{to_ymd(end)};
  const std::string calm = parse_date(calm_from);
  DatedTable t;
  t.names = {"BANK_A", "BANK_B"};
  std::vector<std::array<double, 2>> rows;
  std::array<double, 2> price{30.0, 40.0};
  for (chr::sys_days d = first; d < last; d += chr::days{1}) {
    const chr::weekday wd{d};
    if (wd == chr::Saturday || wd == chr::Sunday) continue;
    const std::string iso = to_iso(chr::year_month_day{d});
    if (!rows.empty()) {
      const bool turbulent = iso < calm;
      const auto [e1, e2] = turbulent ? t_pair(0.8, 4.0, rng) : t_pair(0.6, 6.0, rng);
      const double vol = turbulent ? 0.035 : 0.014;
      price[0] *= std::exp(vol * e1 - 0.5 * vol * vol);
      price[1] *= std::exp(vol * e2 - 0.5 * vol * vol);
    }
    t.dates.push_back(iso);
    rows.push_back(price);
  }
  t.values.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    t.values(static_cast<Eigen::Index>(r), 0) = rows[r][0];
    t.values(static_cast<Eigen::Index>(r), 1) = rows[r][1];
  }
  return t;
}

DatedTable synthetic_macro_levels(std::size_t quarters, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  DatedTable t;
  t.names = {"gdp", "unemp", "fedfunds", "cpi", "t10"};
  t.values.resize(static_cast<Eigen::Index>(quarters), 5);
  double growth = 0.0075, unemp = 6.0, rate = 4.0, infl = 0.008, t10 = 5.5;
  double log_gdp = std::log(2000.0), log_cpi = std::log(30.0);
  for (std::size_t q = 0; q < quarters; ++q) {
    const double gap = growth - 0.0075;
    growth = 0.0075 + 0.3 * gap - 0.0008 * (rate - 4.0) + 0.008 * g(rng);
    unemp = std::max(2.0, 6.0 + 0.9 * (unemp - 6.0) - 25.0 * (growth - 0.0075) + 0.2 * g(rng));
    infl = 0.008 + 0.6 * (infl - 0.008) + 0.1 * gap + 0.003 * g(rng);
    rate = std::max(0.1, 4.0 + 0.85 * (rate - 4.0) + 40.0 * (growth - 0.0075) +
                             60.0 * (infl - 0.008) + 0.5 * g(rng));
    t10 = 0.8 * t10 + 0.2 * (rate + 1.5) + 0.3 * g(rng);
    log_gdp += growth;
    log_cpi += infl;
    const auto row = static_cast<Eigen::Index>(q);
    t.values.row(row) << std::exp(log_gdp), unemp, rate, std::exp(log_cpi), t10;
    const int year = 1956 + static_cast<int>(q / 4);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-01", year, static_cast<int>(q % 4) * 3 + 1);
    t.dates.emplace_back(buf);
  }
  return t;
}

}  // namespace cgan::market
