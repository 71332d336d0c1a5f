#pragma once

#include <string>
#include <vector>

namespace ctd {

// Formats a double with 10 significant digits (the project-wide CSV float
// convention).
std::string csv_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Parses comma-separated text with a header row. Throws std::runtime_error
// mentioning the 1-based line number on ragged rows.
CsvTable parse_csv(const std::string& text);

std::string to_csv(const CsvTable& table);

// Field accessor that reports the column name and line number on bad
// numeric fields.
double csv_field(const CsvTable& table, std::size_t row,
                 const std::string& column);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ctd
