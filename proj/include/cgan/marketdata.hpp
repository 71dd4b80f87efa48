#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cgan/types.hpp"

// Dated CSV tables (equity closes, macro series), return construction and
// period labelling, plus synthetic stand-ins for offline runs.
namespace cgan::market {

/// Dates are ISO "YYYY-MM-DD" strings, strictly increasing.
struct DatedTable {
  std::vector<std::string> dates;
  std::vector<std::string> names;
  Matrix values;  // dates x names

  void write_csv(std::ostream& out) const;
};

/// Validates and normalizes a date cell ("YYYY-MM-DD"); throws DataError.
std::string parse_date(const std::string& cell);

/// First column "date", then one numeric column per series. Rows with an
/// empty cell are dropped; rows are sorted by date. Throws DataError on
/// unparseable cells, duplicate dates, or (when require_positive) a value <= 0.
DatedTable read_dated_table(std::istream& in, bool require_positive);
/// Reads a close-price CSV (positive values required).
DatedTable ingest_prices(const std::string& path);
/// Reads a series CSV without the positivity requirement.
DatedTable ingest_series(const std::string& path);

/// Keeps only dates present in both tables; columns of `a` then `b`.
DatedTable merge_on_dates(const DatedTable& a, const DatedTable& b);

enum class ReturnMode { Difference, Simple, Log };
ReturnMode parse_return_mode(const std::string& s);
std::string to_string(ReturnMode m);

/// Row t holds the return from date t-1 to date t, dated t (first date dropped).
DatedTable returns_from_prices(const DatedTable& prices, ReturnMode mode);

struct Period {
  std::string name;
  std::string start;  // inclusive
  std::string end;    // exclusive
};

/// Index of the first period containing each date, or -1.
std::vector<int> label_periods(const std::vector<std::string>& dates, const std::vector<Period>& periods);

/// Business-day closes for two instruments, calm except for a turbulent
/// stretch before `calm_from`.
DatedTable synthetic_equity_prices(const std::string& start, const std::string& end,
                                   const std::string& calm_from, Rng& rng);

/// Quarterly levels of five interlinked macro series (gdp, unemp, fedfunds,
/// cpi, t10) starting in 1956.
DatedTable synthetic_macro_levels(std::size_t quarters, Rng& rng);

}  // namespace cgan::market
