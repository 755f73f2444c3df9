#pragma once

// Six structured norm problems whose contraction ratio has a closed form.
// Each builder returns the instance, the closed-form tau and the generic
// certificate tau; the two must coincide.

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "conenorm/cone_geometry.hpp"
#include "conenorm/matrix.hpp"
#include "conenorm/norm_spec.hpp"
#include "conenorm/power_method.hpp"

namespace conenorm {

/// ||Ax||_{w,p} / ||x||_{v,q}.
struct WeightedPairConfig {
  NonnegMatrix A;
  Vector w;
  double p;
  Vector v;
  double q;
};

/// (2||Ax||_p + 3||Bx||_q) / ||x||_r.
struct StackedSumConfig {
  NonnegMatrix A, B;
  double p, q, r;
};

/// ||A(x+y)||_p / sqrt(||x||_q^2 + ||y||_r^2), q, r >= 2.
struct SplitInputConfig {
  NonnegMatrix A;
  double p, q, r;
};

/// (||Ax||_p^th + ||By||_q^th) / (||x||_r^th + ||y||_s^th), 1 < s <= th <= p, q, r.
struct ThetaBlockConfig {
  NonnegMatrix A, B;
  double p, q, r, s, theta;
};

/// min of ||A(x+y)+B(u+v)||_p over ||(x,u)||_q and ||(y,v)||_r.
struct OverlapMinConfig {
  NonnegMatrix A, B;
  double p, q, r;
};

/// max ||A sigma_p(Bx)||_q over ||x||_r = 1.
struct PowerCompositionConfig {
  NonnegMatrix A, B;
  double p, q, r;
};

using CorollaryConfig = std::variant<WeightedPairConfig, StackedSumConfig, SplitInputConfig,
                                     ThetaBlockConfig, OverlapMinConfig, PowerCompositionConfig>;

struct CorollaryResult {
  std::string name;
  ProblemInstance instance;
  double tau_closed;
  double tau_generic;
};

namespace detail {

inline void need_square_positive(const NonnegMatrix& a, const char* who) {
  if (a.rows() != a.cols() || !a.is_positive()) {
    throw std::invalid_argument(std::string(who) + ": matrices must be square and positive");
  }
}

inline void need_open(double p, const char* who) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw std::invalid_argument(std::string(who) + ": exponents must lie in (1, inf)");
  }
}

// kappa_H through the cross-ratio route, independent of the certificate's.
inline double kappa_cross(const NonnegMatrix& a) {
  return birkhoff_from_diameter(projective_diameter_cross_ratio(a));
}

inline Vector block_weights(std::size_t total, std::size_t from, std::size_t to, double value) {
  Vector w(total, 0.0);
  for (std::size_t i = from; i < to; ++i) w[i] = value;
  return w;
}

inline CorollaryResult finish(std::string name, ProblemInstance inst, double closed) {
  const double generic = certificate(inst).tau;
  return {std::move(name), std::move(inst), closed, generic};
}

inline CorollaryResult build(const WeightedPairConfig& c) {
  const char* who = "weighted pair";
  need_square_positive(c.A, who);
  need_open(c.p, who);
  need_open(c.q, who);
  const double k = kappa_cross(c.A);
  ProblemInstance inst(c.A, WeightedPNorm(c.w, c.p), WeightedPNorm(c.v, c.q));
  return finish(who, std::move(inst), k * k * (c.p - 1.0) / (c.q - 1.0));
}

inline CorollaryResult build(const StackedSumConfig& c) {
  const char* who = "stacked sum";
  need_square_positive(c.A, who);
  need_square_positive(c.B, who);
  if (c.A.rows() != c.B.rows() || c.A.rows() < 2) {
    throw std::invalid_argument("stacked sum: A and B must share a size n >= 2");
  }
  need_open(c.p, who);
  need_open(c.q, who);
  need_open(c.r, who);
  const std::size_t n = c.A.rows();
  const NonnegMatrix m = vconcat(c.A, c.B);
  ComposedNorm alpha({{block_weights(2 * n, 0, n, std::pow(2.0, c.p)), c.p},
                      {block_weights(2 * n, n, 2 * n, std::pow(3.0, c.q)), c.q}},
                     1.0);
  const double k = kappa_cross(m);
  ProblemInstance inst(m, alpha, WeightedPNorm::plain(n, c.r));
  return finish(who, std::move(inst), k * k * (c.p + c.q - 2.0) / (c.r - 1.0));
}

inline CorollaryResult build(const SplitInputConfig& c) {
  const char* who = "split input";
  need_square_positive(c.A, who);
  need_open(c.p, who);
  if (!(c.q >= 2.0) || !(c.r >= 2.0) || std::isinf(c.q) || std::isinf(c.r)) {
    throw std::invalid_argument("split input: q and r must lie in [2, inf)");
  }
  const std::size_t n = c.A.rows();
  DualComposedNorm beta({{ones(n), c.q}, {ones(n), c.r}}, 2.0);
  const double k = kappa_cross(c.A);
  ProblemInstance inst(c.A, WeightedPNorm::plain(n, c.p), beta);
  return finish(who, std::move(inst), k * k * (c.p - 1.0));
}

inline CorollaryResult build(const ThetaBlockConfig& c) {
  const char* who = "theta block";
  need_square_positive(c.A, who);
  need_square_positive(c.B, who);
  if (c.A.rows() != c.B.rows()) throw std::invalid_argument("theta block: A and B must share a size");
  need_open(c.s, who);
  if (!(c.s <= c.theta && c.theta <= c.p && c.theta <= c.q && c.theta <= c.r) ||
      std::isinf(c.p) || std::isinf(c.q) || std::isinf(c.r)) {
    throw std::invalid_argument("theta block: need 1 < s <= theta <= p, q, r < inf");
  }
  const std::size_t n = c.A.rows();
  const NonnegMatrix m = hconcat(c.A, c.B);
  ComposedNorm alpha({{ones(n), c.p}, {ones(n), c.q}}, c.theta);
  DualComposedNorm beta({{block_weights(2 * n, 0, n, 1.0), c.r},
                         {block_weights(2 * n, n, 2 * n, 1.0), c.s}},
                        c.theta);
  const double k = kappa_cross(m);
  ProblemInstance inst(m, alpha, beta);
  return finish(who, std::move(inst), k * k * (c.p + c.q - c.theta - 1.0) / (c.s - 1.0));
}

inline CorollaryResult build(const OverlapMinConfig& c) {
  const char* who = "overlap min";
  need_square_positive(c.A, who);
  need_square_positive(c.B, who);
  if (c.A.rows() != c.B.rows()) throw std::invalid_argument("overlap min: A and B must share a size");
  need_open(c.p, who);
  need_open(c.q, who);
  need_open(c.r, who);
  const std::size_t n = c.A.rows();
  const NonnegMatrix zero(n, n);
  const NonnegMatrix m = vconcat(hconcat(hconcat(c.A, c.A), zero), hconcat(hconcat(zero, c.B), c.B));
  Vector xz = block_weights(3 * n, 0, n, 1.0);
  for (std::size_t i = 2 * n; i < 3 * n; ++i) xz[i] = 1.0;
  const Vector yz = block_weights(3 * n, n, 3 * n, 1.0);
  DualComposedNorm beta({{xz, c.q}, {yz, c.r}}, std::numeric_limits<double>::infinity());
  ProblemInstance inst(m, WeightedPNorm::plain(2 * n, c.p), beta);
  return finish(who, std::move(inst), (c.p - 1.0) / (c.q - 1.0) + (c.p - 1.0) / (c.r - 1.0));
}

inline CorollaryResult build(const PowerCompositionConfig& c) {
  const char* who = "power composition";
  need_square_positive(c.A, who);
  need_square_positive(c.B, who);
  if (c.A.rows() != c.B.rows()) {
    throw std::invalid_argument("power composition: A and B must share a size");
  }
  need_open(c.p, who);
  need_open(c.q, who);
  need_open(c.r, who);
  const std::size_t n = c.A.rows();
  std::vector<WeightedPTerm> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = c.A.row(i);
    terms.push_back({Vector(row.begin(), row.end()), c.p});
  }
  ComposedNorm alpha(std::move(terms), c.p * c.q);
  const double closed =
      (c.p * c.q - 1.0) / (c.r - 1.0) * kappa_cross(c.B) * kappa_cross(c.B.transpose());
  ProblemInstance inst(c.B, alpha, WeightedPNorm::plain(n, c.r));
  return finish(who, std::move(inst), closed);
}

}  // namespace detail

/// Builds the structured instance and returns both contraction ratios.
/// Throws std::invalid_argument when a parameter leaves its admissible range.
inline CorollaryResult corollary_tau(const CorollaryConfig& config) {
  return std::visit([](const auto& c) { return detail::build(c); }, config);
}

/// ||A sigma_p(x)||_q^{1/p}, the closed form of the composed norm built by
/// PowerCompositionConfig.
inline double power_composition_norm(const NonnegMatrix& a, double p, double q,
                                     std::span<const double> x) {
  Vector sp(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sp[i] = std::pow(std::abs(x[i]), p);
  const Vector y = a.apply(sp);
  double acc = 0.0;
  for (double v : y) acc += std::pow(v, q);
  return std::pow(acc, 1.0 / (p * q));
}

}  // namespace conenorm
