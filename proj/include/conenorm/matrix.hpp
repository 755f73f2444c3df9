#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conenorm {

using Vector = std::vector<double>;

/// Thrown when two operands have incompatible shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_size(std::span<const double> x, std::span<const double> y,
                              const char* what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  }
}

inline bool is_nonnegative(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; });
}

inline bool is_positive(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double inf_distance(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "inf_distance");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

inline Vector scaled(std::span<const double> x, double c) {
  Vector out(x.begin(), x.end());
  for (double& v : out) v *= c;
  return out;
}

inline Vector ones(std::size_t n) { return Vector(n, 1.0); }

/// Dense row-major matrix with entrywise-nonnegative entries.
///
/// The nonnegativity invariant is checked on construction and maintained by
/// every operation in this header (products and sums of nonnegative
/// matrices stay nonnegative).
class NonnegMatrix {
 public:
  NonnegMatrix() = default;

  NonnegMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (fill < 0.0 || std::isnan(fill)) throw std::invalid_argument("NonnegMatrix: negative fill");
  }

  NonnegMatrix(std::size_t rows, std::size_t cols, Vector entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("NonnegMatrix: rows*cols != number of entries");
    }
    for (double v : data_) {
      if (!(v >= 0.0) || std::isinf(v)) {
        throw std::invalid_argument("NonnegMatrix: entries must be finite and >= 0");
      }
    }
  }

  NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("NonnegMatrix: ragged initializer");
      for (double v : r) {
        if (!(v >= 0.0) || std::isinf(v)) {
          throw std::invalid_argument("NonnegMatrix: entries must be finite and >= 0");
        }
        data_.push_back(v);
      }
    }
  }

  static NonnegMatrix identity(std::size_t n) {
    NonnegMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> data() const { return data_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  NonnegMatrix transpose() const {
    NonnegMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::size_t nnz() const {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(),
                                                  [](double v) { return v != 0.0; }));
  }

  bool is_positive() const { return conenorm::is_positive(data_); }

  /// y = A x (x may have any sign).
  Vector apply(std::span<const double> x) const {
    if (x.size() != cols_) throw DimensionError("NonnegMatrix::apply: dimension mismatch");
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  /// y = A^T x.
  Vector apply_transpose(std::span<const double> x) const {
    if (x.size() != rows_) {
      throw DimensionError("NonnegMatrix::apply_transpose: dimension mismatch");
    }
    Vector y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) y[j] += (*this)(i, j) * xi;
    }
    return y;
  }

  friend bool operator==(const NonnegMatrix&, const NonnegMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

inline NonnegMatrix operator*(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: dimension mismatch");
  NonnegMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline NonnegMatrix operator+(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix sum: dimension mismatch");
  }
  NonnegMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

inline NonnegMatrix operator*(double s, const NonnegMatrix& a) {
  if (s < 0.0) throw std::invalid_argument("NonnegMatrix: negative scalar");
  NonnegMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

inline double max_abs_difference(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_difference: dimension mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

/// Horizontal concatenation [a b].
inline NonnegMatrix hconcat(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hconcat: row mismatch");
  NonnegMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

/// Vertical concatenation [a; b].
inline NonnegMatrix vconcat(const NonnegMatrix& a, const NonnegMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("vconcat: column mismatch");
  NonnegMatrix c(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
  return c;
}

}  // namespace conenorm
