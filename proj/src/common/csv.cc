#include "pcbody/common/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pcbody/common/errors.h"

namespace pcbody::csv {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double ParseNumber(std::string_view field, int line_number) {
  if (field.empty() || field == "nan" || field == "NaN" || field == "-nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("csv line " + std::to_string(line_number) +
                      ": not a number: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

int Table::Column(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw FormatError("csv: missing column '" + std::string(name) + "'");
}

bool Table::HasColumn(std::string_view name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

void WriteHeader(std::ostream& out, const std::vector<std::string>& header) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
}

void WriteRow(std::ostream& out, const std::vector<double>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << FormatNumber(row[i]);
  }
  out << '\n';
}

void Write(std::ostream& out, const Table& table) {
  WriteHeader(out, table.header);
  for (const auto& row : table.rows) WriteRow(out, row);
}

void WriteFile(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  Write(out, table);
  if (!out) throw FormatError("write failed: " + path);
}

Table Read(std::istream& in) {
  Table table;
  std::string line;
  int line_number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = Trim(line);
    if (line_number == 1 && view.size() >= 3 &&
        static_cast<unsigned char>(view[0]) == 0xEF) {
      view.remove_prefix(3);  // UTF-8 BOM
    }
    if (view.empty()) continue;
    auto fields = SplitFields(view);
    if (!have_header) {
      for (auto f : fields) table.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw FormatError("csv line " + std::to_string(line_number) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(ParseNumber(f, line_number));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw FormatError("csv: empty input (no header row)");
  return table;
}

Table ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open for reading: " + path);
  return Read(in);
}

}  // namespace pcbody::csv
