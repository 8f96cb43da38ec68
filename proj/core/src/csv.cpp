#include "ntnlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntn {

std::string CsvSchema::header() const {
  std::string h;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) h += ',';
    h += columns[i];
  }
  return h;
}

std::string format_significant(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const CsvSchema& schema) : out_(out), schema_(schema) {
  out_ << schema_.header() << '\n';
}

void CsvWriter::row(std::initializer_list<CsvCell> cells) {
  row(std::vector<CsvCell>(cells));
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != schema_.columns.size()) {
    throw std::logic_error(std::string(schema_.name) + ": row has " +
                           std::to_string(cells.size()) + " cells, schema has " +
                           std::to_string(schema_.columns.size()));
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    if (const auto* d = std::get_if<double>(&cells[i])) {
      if (!std::isfinite(*d)) {
        throw std::logic_error(std::string(schema_.name) + ": non-finite value in column " +
                               std::string(schema_.columns[i]));
      }
      line += format_significant(*d, schema_.significant_digits);
    } else {
      line += std::to_string(std::get<std::int64_t>(cells[i]));
    }
  }
  out_ << line << '\n';
  ++rows_;
}

std::string check_csv_file(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "cannot open " + path.string();
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find('\r') != std::string::npos) return "CR line ending present";
  if (!text.empty() && text.back() != '\n') return "missing final LF";

  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line) || line != schema.header()) {
    return "header mismatch: expected '" + schema.header() + "'";
  }
  std::size_t lineno = 1;
  while (std::getline(lines, line)) {
    ++lineno;
    std::size_t fields = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string cell =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        return "line " + std::to_string(lineno) + ": non-numeric cell '" + cell + "'";
      }
      ++fields;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields != schema.columns.size()) {
      return "line " + std::to_string(lineno) + ": " + std::to_string(fields) + " fields";
    }
  }
  return {};
}

}  // namespace ntn
