#pragma once

// Shared matrix text format: first line "rows cols", then `rows` lines of
// `cols` space-separated decimals. Lines whose first non-blank character is
// '#' are comments. Scientific notation accepted; NaN/Inf rejected.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "opline/errors.hpp"
#include "opline/linalg.hpp"

namespace opline {

namespace detail {

inline bool is_blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;  // all whitespace
}

inline bool next_payload_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_blank_or_comment(line)) return true;
  }
  return false;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

inline Matrix read_matrix(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  if (!detail::next_payload_line(in, line))
    throw parse_error(source + ": missing header line \"rows cols\"");

  auto header = detail::split_fields(line);
  if (header.size() != 2)
    throw parse_error(source + ": header must be \"rows cols\", got \"" + line + "\"");

  long rows = -1, cols = -1;
  try {
    size_t used = 0;
    rows = std::stol(header[0], &used);
    if (used != header[0].size()) throw std::invalid_argument(header[0]);
    cols = std::stol(header[1], &used);
    if (used != header[1].size()) throw std::invalid_argument(header[1]);
  } catch (const std::exception&) {
    throw parse_error(source + ": non-integer dimensions in header \"" + line + "\"");
  }
  if (rows < 0 || cols < 0)
    throw parse_error(source + ": negative dimensions in header \"" + line + "\"");

  Matrix m(rows, cols);
  if (cols == 0) return m;  // no payload rows to read
  for (long r = 0; r < rows; ++r) {
    if (!detail::next_payload_line(in, line))
      throw parse_error(source + ": expected " + std::to_string(rows) +
                        " data rows, found " + std::to_string(r));
    auto fields = detail::split_fields(line);
    if (static_cast<long>(fields.size()) != cols)
      throw parse_error(source + ": row " + std::to_string(r + 1) + " has " +
                        std::to_string(fields.size()) + " values, expected " +
                        std::to_string(cols));
    for (long c = 0; c < cols; ++c) {
      char* end = nullptr;
      double v = std::strtod(fields[c].c_str(), &end);
      if (end == fields[c].c_str() || *end != '\0')
        throw parse_error(source + ": bad number \"" + fields[c] + "\" at row " +
                          std::to_string(r + 1));
      if (!std::isfinite(v))
        throw parse_error(source + ": non-finite value \"" + fields[c] + "\" at row " +
                          std::to_string(r + 1));
      m(r, c) = v;
    }
  }
  return m;
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open \"" + path + "\" for reading");
  return read_matrix(in, path);
}

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  if (m.cols() == 0) return;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

inline void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open \"" + path + "\" for writing");
  write_matrix(out, m);
  if (!out) throw io_error("write to \"" + path + "\" failed");
}

}  // namespace opline
