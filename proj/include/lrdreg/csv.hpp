#pragma once

// Minimal CSV reading and writing: comma separated, dot decimal, LF endings,
// no quoting (no field ever contains a comma). Doubles are written in the
// shortest form that parses back to the same value.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lrdreg/error.hpp"

namespace lrdreg::csv {

inline std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

inline std::string format(std::uint64_t v) { return std::to_string(v); }

inline double parse_double(std::string_view s) {
  double v = 0.0;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc{} && res.ptr == s.data() + s.size(), ErrorCategory::data,
          "csv: cannot parse number '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  require(res.ec == std::errc{} && res.ptr == s.data() + s.size(), ErrorCategory::data,
          "csv: cannot parse integer '" + std::string(s) + "'");
  return v;
}

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    fail(ErrorCategory::data, "csv: missing column '" + std::string(name) + "'");
  }
};

inline std::string join(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += row[i];
  }
  return out;
}

inline std::string render(const Table& t) {
  std::string out = join(t.header) + '\n';
  for (const auto& r : t.rows) out += join(r) + '\n';
  return out;
}

inline Row split(std::string_view line) {
  Row out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline Table parse(std::string_view text) {
  Table t;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
    } else {
      t.rows.push_back(split(line));
      require(t.rows.back().size() == t.header.size(), ErrorCategory::data, "csv: ragged row");
    }
  }
  return t;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot open '" + path + "' for writing");
  out << content;
  out.close();
  require(static_cast<bool>(out), ErrorCategory::io, "failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lrdreg::csv
