#include "schedge/csv.hpp"

#include <charconv>
#include <system_error>

#include "schedge/error.hpp"

namespace schedge::csv {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_u64(uint64_t value) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view field, char sep) {
  std::vector<std::string> out;
  if (field.empty()) return out;
  size_t start = 0;
  while (true) {
    size_t pos = field.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(field.substr(start));
      break;
    }
    out.emplace_back(field.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

uint64_t parse_u64(std::string_view field, const std::string& context) {
  uint64_t value = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw config_error("parse error: " + context + ": expected unsigned integer, got '" +
                       std::string(field) + "'");
  }
  return value;
}

double parse_double(std::string_view field, const std::string& context) {
  double value = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw config_error("parse error: " + context + ": expected number, got '" +
                       std::string(field) + "'");
  }
  return value;
}

Table read_table(const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw config_error("schema mismatch: " + path.string() + " is empty, expected header '" +
                       expected_header + "'");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw config_error("schema mismatch: " + path.string() + ": header '" + line +
                       "' does not match '" + expected_header + "'");
  }
  size_t field_count = split_fields(expected_header).size();

  Table table;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != field_count) {
      throw config_error("parse error: " + path.string() + ":" + std::to_string(line_no) +
                         ": expected " + std::to_string(field_count) + " fields, got " +
                         std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

Writer::Writer(const std::filesystem::path& path) : out_(path), path_(path.string()) {
  if (!out_) throw io_error("cannot write " + path_);
}

void Writer::row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void Writer::line(const std::string& text) { out_ << text << '\n'; }

void Writer::close() {
  out_.close();
  if (out_.fail()) throw io_error("write failed: " + path_);
}

} // namespace schedge::csv
