#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace schedge::csv {

// Shortest decimal form that round-trips the exact double value.
std::string format_double(double value);

std::string format_u64(uint64_t value);

// Split a CSV line on commas. No quoting: all schedge identifiers are
// alphanumeric and list fields use ';' as the inner separator.
std::vector<std::string> split_fields(std::string_view line);

std::vector<std::string> split_list(std::string_view field, char sep = ';');

// Numeric field parsing; `context` is "file:line: field" for error messages.
uint64_t parse_u64(std::string_view field, const std::string& context);
double parse_double(std::string_view field, const std::string& context);

// A parsed CSV file with a verified header.
struct Table {
  std::vector<std::vector<std::string>> rows; // data rows only
  std::vector<size_t> line_numbers;           // 1-based source line per row
};

// Reads `path`, checks the header matches `expected_header` exactly
// (schema mismatch otherwise), and returns the data rows. Blank trailing
// lines are ignored; every row must have the same field count as the header.
Table read_table(const std::filesystem::path& path, const std::string& expected_header);

// Line-buffered writer with '\n' endings and UTF-8 passthrough.
class Writer {
public:
  explicit Writer(const std::filesystem::path& path);
  void row(const std::vector<std::string>& fields);
  void line(const std::string& text);
  void close();

private:
  std::ofstream out_;
  std::string path_;
};

} // namespace schedge::csv
