#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ntn {

/// Column contract of a CSV file produced by one module.
struct CsvSchema {
  std::string_view name;
  std::vector<std::string_view> columns;
  /// Significant digits for floating-point cells.
  int significant_digits = 6;

  std::string header() const;
};

using CsvCell = std::variant<std::int64_t, double>;

/// Writes a header and rows, checking every row against the schema: column
/// count must match and floating cells must be finite. Violations throw
/// std::logic_error before anything is written for that row. LF endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const CsvSchema& schema);

  void row(std::initializer_list<CsvCell> cells);
  void row(const std::vector<CsvCell>& cells);

  std::size_t rows_written() const { return rows_; }

 private:
  std::ostream& out_;
  const CsvSchema& schema_;
  std::size_t rows_ = 0;
};

std::string format_significant(double value, int digits);

/// Re-reads a CSV file and checks it against the schema (header text,
/// column count, numeric cells). Returns an empty string when valid,
/// otherwise a description of the first violation.
std::string check_csv_file(const std::filesystem::path& path, const CsvSchema& schema);

}  // namespace ntn
