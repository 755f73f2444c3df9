#pragma once

// Dense matrices from MatrixMarket (coordinate or array, real general) or
// CSV, and vectors from plain number lists.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "conenorm/matrix.hpp"

namespace conenorm {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline double parse_number(const std::string& tok, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": bad number '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(where + ": bad number '" + tok + "'");
  return v;
}

inline std::size_t parse_index(const std::string& tok, const std::string& where) {
  const double v = parse_number(tok, where);
  if (v < 0.0 || v != std::floor(v)) throw ParseError(where + ": bad integer '" + tok + "'");
  return static_cast<std::size_t>(v);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::string s = line;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::replace(s.begin(), s.end(), ';', ' ');
  std::replace(s.begin(), s.end(), '\t', ' ');
  std::istringstream ss(s);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

inline NonnegMatrix parse_matrix_market(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  const auto h = split_fields(lowercase(header));
  if (h.size() < 5 || h[1] != "matrix") throw ParseError("MatrixMarket: bad header");
  const std::string& layout = h[2];
  const std::string& field = h[3];
  const std::string& symmetry = h[4];
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError("MatrixMarket: unsupported field '" + field + "'");
  }
  if (symmetry != "general") throw ParseError("MatrixMarket: only general matrices are supported");

  std::vector<std::string> tokens;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] == '%') continue;
    for (auto& t : split_fields(line)) tokens.push_back(std::move(t));
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw ParseError("MatrixMarket: unexpected end of data");
    return tokens[pos++];
  };

  if (layout == "coordinate") {
    const std::size_t m = parse_index(next(), "MatrixMarket size");
    const std::size_t n = parse_index(next(), "MatrixMarket size");
    const std::size_t nnz = parse_index(next(), "MatrixMarket size");
    Vector data(m * n, 0.0);
    for (std::size_t e = 0; e < nnz; ++e) {
      const std::size_t i = parse_index(next(), "MatrixMarket entry");
      const std::size_t j = parse_index(next(), "MatrixMarket entry");
      const double v = parse_number(next(), "MatrixMarket entry");
      if (i == 0 || j == 0 || i > m || j > n) throw ParseError("MatrixMarket: index out of range");
      data[(i - 1) * n + (j - 1)] += v;
    }
    if (pos != tokens.size()) throw ParseError("MatrixMarket: trailing data");
    return NonnegMatrix(m, n, std::move(data));
  }
  if (layout == "array") {
    const std::size_t m = parse_index(next(), "MatrixMarket size");
    const std::size_t n = parse_index(next(), "MatrixMarket size");
    Vector data(m * n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) data[i * n + j] = parse_number(next(), "MatrixMarket entry");
    if (pos != tokens.size()) throw ParseError("MatrixMarket: trailing data");
    return NonnegMatrix(m, n, std::move(data));
  }
  throw ParseError("MatrixMarket: unsupported layout '" + layout + "'");
}

inline NonnegMatrix parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::size_t cols = 0;
  std::size_t rows = 0;
  Vector data;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_fields(line);
    if (rows == 0) {
      cols = fields.size();
    } else if (fields.size() != cols) {
      throw ParseError("CSV: row " + std::to_string(rows + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " + std::to_string(cols));
    }
    for (const auto& f : fields) data.push_back(parse_number(f, "CSV"));
    ++rows;
  }
  if (rows == 0) throw ParseError("CSV: no data");
  return NonnegMatrix(rows, cols, std::move(data));
}

}  // namespace detail

/// Parses MatrixMarket when the text starts with the %%MatrixMarket banner,
/// CSV otherwise. Negative entries are rejected.
inline NonnegMatrix parse_matrix(const std::string& text) {
  try {
    if (text.rfind("%%MatrixMarket", 0) == 0) return detail::parse_matrix_market(text);
    return detail::parse_csv(text);
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline NonnegMatrix read_matrix(const std::string& path) { return parse_matrix(read_text_file(path)); }

/// A single row or column of either matrix format, flattened.
inline Vector read_vector(const std::string& path) {
  const std::string text = read_text_file(path);
  if (text.rfind("%%MatrixMarket", 0) == 0) {
    const NonnegMatrix m = detail::parse_matrix_market(text);
    if (m.rows() != 1 && m.cols() != 1) throw ParseError("vector file must have one row or column");
    return Vector(m.data().begin(), m.data().end());
  }
  Vector out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (const auto& f : detail::split_fields(line)) out.push_back(detail::parse_number(f, "vector"));
  }
  if (out.empty()) throw ParseError("vector file is empty");
  return out;
}

}  // namespace conenorm
