#pragma once

// Internal CSV helpers shared by the graph and signal readers/writers.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "pgl/error.hpp"

namespace pgl::csv {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

inline double parse_double(std::string_view cell, const std::filesystem::path& path,
                           std::size_t line) {
  cell = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error(ErrorKind::Parse, where(path, line) + "non-numeric cell '" + std::string(cell) + "'");
  return v;
}

inline std::vector<double> parse_row(std::string_view text, const std::filesystem::path& path,
                                     std::size_t line) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    row.push_back(parse_double(text.substr(start, comma - start), path, line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return row;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace pgl::csv
