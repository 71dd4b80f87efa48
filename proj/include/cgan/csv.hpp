#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cgan/types.hpp"

namespace cgan {

/// Doubles are written with 17 significant digits ("%.17g").
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::span<const std::string> names);
  void row(std::span<const double> values);
  /// Mixed row: text cells as given, numeric cells already formatted by the caller.
  void text_row(std::span<const std::string> cells);

 private:
  std::ostream& out_;
};

/// Writes a header row followed by each matrix row.
void write_matrix_csv(std::ostream& out, std::span<const std::string> names, const Matrix& m);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws DataError when absent.
  std::size_t column(const std::string& name) const;
};

/// Comma-separated, first line is the header. Blank lines and lines starting
/// with '#' are skipped. Throws DataError on ragged rows.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Parses a full-cell double; throws DataError otherwise.
double parse_double(const std::string& cell);

}  // namespace cgan
