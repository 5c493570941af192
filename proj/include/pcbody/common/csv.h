#ifndef PCBODY_COMMON_CSV_H_
#define PCBODY_COMMON_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pcbody::csv {

// A numeric table with a header row. Missing values are stored as NaN.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of `name` in the header; throws FormatError when absent.
  int Column(std::string_view name) const;
  bool HasColumn(std::string_view name) const;
};

// Shortest decimal text that parses back to exactly `value`; "nan" for NaN.
std::string FormatNumber(double value);

void WriteRow(std::ostream& out, const std::vector<double>& row);
void WriteHeader(std::ostream& out, const std::vector<std::string>& header);
void Write(std::ostream& out, const Table& table);
void WriteFile(const std::string& path, const Table& table);

Table Read(std::istream& in);
Table ReadFile(const std::string& path);

}  // namespace pcbody::csv

#endif  // PCBODY_COMMON_CSV_H_
