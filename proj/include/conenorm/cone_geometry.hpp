#pragma once

// Hilbert's projective metric on the nonnegative orthant, projective
// diameters of nonnegative matrices and Birkhoff contraction ratios.
//
// Extended reals are plain doubles: +infinity is a legitimate value for
// d_H, M(x/y) and the diameter, never an error.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "conenorm/matrix.hpp"

namespace conenorm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ConeOptions {
  /// Entries <= zero_tol count as exact zeros. The default keeps zero
  /// patterns exact.
  double zero_tol = 0.0;
};

namespace detail {

inline bool is_zero(double v, const ConeOptions& opt) { return v <= opt.zero_tol; }

inline void require_nonnegative(std::span<const double> x, const char* what) {
  if (!is_nonnegative(x)) throw std::invalid_argument(std::string(what) + ": negative entry");
}

// ln M(x/y) restricted to a common support; +inf when x has mass outside
// supp(y), -inf when x == 0.
inline double log_sup_ratio(std::span<const double> x, std::span<const double> y,
                            const ConeOptions& opt) {
  double best = -kInfinity;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_zero(x[i], opt)) continue;
    if (is_zero(y[i], opt)) return kInfinity;
    best = std::max(best, std::log(x[i]) - std::log(y[i]));
  }
  return best;
}

}  // namespace detail

/// x ~ y: identical zero patterns.
inline bool comparable(std::span<const double> x, std::span<const double> y,
                       const ConeOptions& opt = {}) {
  require_same_size(x, y, "comparable");
  detail::require_nonnegative(x, "comparable");
  detail::require_nonnegative(y, "comparable");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (detail::is_zero(x[i], opt) != detail::is_zero(y[i], opt)) return false;
  }
  return true;
}

/// M(x/y) = inf{C > 0 : x <= C y}; 0 when x = 0.
inline double sup_ratio(std::span<const double> x, std::span<const double> y,
                        const ConeOptions& opt = {}) {
  require_same_size(x, y, "sup_ratio");
  detail::require_nonnegative(x, "sup_ratio");
  detail::require_nonnegative(y, "sup_ratio");
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (detail::is_zero(x[i], opt)) continue;
    if (detail::is_zero(y[i], opt)) return kInfinity;
    best = std::max(best, x[i] / y[i]);
  }
  return best;
}

/// Hilbert projective distance, computed as a sum of log ratios.
inline double hilbert_distance(std::span<const double> x, std::span<const double> y,
                               const ConeOptions& opt = {}) {
  require_same_size(x, y, "hilbert_distance");
  detail::require_nonnegative(x, "hilbert_distance");
  detail::require_nonnegative(y, "hilbert_distance");
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool zx = detail::is_zero(x[i], opt);
    if (zx != detail::is_zero(y[i], opt)) return kInfinity;
    any = any || !zx;
  }
  if (!any) return 0.0;
  const double d = detail::log_sup_ratio(x, y, opt) + detail::log_sup_ratio(y, x, opt);
  return std::max(d, 0.0);
}

/// Projective diameter via the pairwise column formula.
///
/// Zero columns are ignored. If the nonzero columns are not mutually
/// comparable the diameter is +inf.
inline double projective_diameter(const NonnegMatrix& a, const ConeOptions& opt = {}) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!detail::is_zero(a(i, j), opt)) {
        live.push_back(j);
        break;
      }
    }
  }
  if (live.size() <= 1) return 0.0;

  const std::size_t ref = live.front();
  for (std::size_t j : live) {
    for (std::size_t i = 0; i < m; ++i) {
      if (detail::is_zero(a(i, j), opt) != detail::is_zero(a(i, ref), opt)) return kInfinity;
    }
  }

  // Log entries on the common support, column-major for locality.
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < m; ++i)
    if (!detail::is_zero(a(i, ref), opt)) support.push_back(i);
  const std::size_t s = support.size();
  std::vector<double> logs(live.size() * s);
  for (std::size_t c = 0; c < live.size(); ++c)
    for (std::size_t r = 0; r < s; ++r) logs[c * s + r] = std::log(a(support[r], live[c]));

  double diam = 0.0;
  for (std::size_t ci = 0; ci < live.size(); ++ci) {
    for (std::size_t cj = ci + 1; cj < live.size(); ++cj) {
      double up = -kInfinity;
      double down = -kInfinity;
      for (std::size_t r = 0; r < s; ++r) {
        const double diff = logs[ci * s + r] - logs[cj * s + r];
        up = std::max(up, diff);
        down = std::max(down, -diff);
      }
      diam = std::max(diam, up + down);
    }
  }
  return diam;
}

/// Projective diameter of a strictly positive matrix through the
/// cross-ratio formula ln max a_ki a_lj / (a_kj a_li). Independent of the
/// pairwise-column route; O(m^2 n^2).
inline double projective_diameter_cross_ratio(const NonnegMatrix& a) {
  if (!a.is_positive()) {
    throw std::invalid_argument("projective_diameter_cross_ratio: matrix must be positive");
  }
  double best = 1.0;
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < a.rows(); ++k)
        for (std::size_t l = 0; l < a.rows(); ++l) {
          const double ratio = (a(k, i) * a(l, j)) / (a(k, j) * a(l, i));
          if (ratio > best) best = ratio;
        }
  return std::log(best);
}

/// True when every pair of nonzero columns is comparable.
inline bool columns_comparable(const NonnegMatrix& a, const ConeOptions& opt = {}) {
  return std::isfinite(projective_diameter(a, opt));
}

/// tanh(delta / 4) with tanh(inf) = 1.
inline double birkhoff_from_diameter(double delta) {
  if (std::isinf(delta)) return 1.0;
  return std::tanh(delta / 4.0);
}

/// ln tanh(delta / 4), accurate when the ratio is close to 1 (large delta).
inline double log_birkhoff_from_diameter(double delta) {
  if (std::isinf(delta)) return 0.0;
  if (delta == 0.0) return -kInfinity;
  const double u = std::exp(-delta / 2.0);
  return std::log1p(-u) - std::log1p(u);
}

/// Birkhoff contraction ratio kappa_H(A) in [0, 1].
inline double birkhoff_ratio(const NonnegMatrix& a, const ConeOptions& opt = {}) {
  return birkhoff_from_diameter(projective_diameter(a, opt));
}

}  // namespace conenorm
