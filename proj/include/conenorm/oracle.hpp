#pragma once

// Independent checks for the power method: direct ascent on f_A, the l2
// Gram-eigenvalue value and the 2x2 critical-point census.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "conenorm/matrix.hpp"
#include "conenorm/norm_spec.hpp"
#include "conenorm/power_method.hpp"

namespace conenorm {

struct BruteForceOptions {
  std::size_t restarts = 8;
  std::size_t steps = 4000;
  std::uint64_t seed = 7;
};

namespace detail {

inline double ascent_value(const ProblemInstance& inst, std::span<const double> x) {
  return eval(inst.alpha(), inst.matrix().apply(x)) / eval(inst.beta(), x);
}

// Projected gradient ascent of f_A from x; returns the best value seen.
inline double ascend(const ProblemInstance& inst, Vector x, std::size_t steps) {
  const NonnegMatrix& a = inst.matrix();
  if (max_abs(a.apply(x)) == 0.0) return 0.0;
  x = scaled(x, 1.0 / eval(inst.beta(), x));
  double f = ascent_value(inst, x);
  double h = 1.0;
  for (std::size_t it = 0; it < steps; ++it) {
    const Vector ax = a.apply(x);
    const Vector up = a.apply_transpose(duality_map(inst.alpha(), ax, Side::primal));
    const Vector jb = duality_map(inst.beta(), x, Side::primal);
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = up[i] - f * jb[i];
    if (max_abs(g) == 0.0) break;

    bool moved = false;
    while (h > 1e-18) {
      Vector y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(0.0, x[i] + h * g[i]);
      if (max_abs(y) > 0.0 && max_abs(a.apply(y)) > 0.0) {
        y = scaled(y, 1.0 / eval(inst.beta(), y));
        const double fy = ascent_value(inst, y);
        if (fy > f) {
          x = std::move(y);
          f = fy;
          h *= 2.0;
          moved = true;
          break;
        }
      }
      h *= 0.5;
    }
    if (!moved) break;
  }
  return f;
}

}  // namespace detail

/// max f_A over the nonnegative orthant by projected gradient ascent from
/// random, coordinate and uniform starts. Requires evaluable alpha and beta
/// with a differentiable beta.
inline double brute_force_norm(const ProblemInstance& inst, const BruteForceOptions& opt = {}) {
  if (!is_evaluable(inst.alpha()) || !is_evaluable(inst.beta())) {
    throw NotEvaluable("brute_force_norm: both norms must be evaluable");
  }
  if (!is_differentiable(inst.beta(), Side::primal)) {
    throw NonDifferentiable("brute_force_norm: beta must be differentiable");
  }
  const std::size_t n = inst.matrix().cols();
  std::vector<Vector> starts;
  starts.push_back(ones(n));
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    starts.push_back(e);
  }
  std::mt19937_64 gen(opt.seed);
  for (std::size_t r = 0; r < opt.restarts; ++r) {
    Vector x(n);
    for (double& v : x) v = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    starts.push_back(x);
  }
  double best = 0.0;
  for (const auto& x : starts) best = std::max(best, detail::ascend(inst, x, opt.steps));
  return best;
}

/// ||A||_{2->2} = sqrt(lambda_max(A^T A)).
inline double gram_spectral_norm(const NonnegMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  const Eigen::MatrixXd gram = m.transpose() * m;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

// A_eps = [[eps, 1], [1, eps]] with l^p output and l^q input.

/// psi(t) = t^{q-1} [(t eps + 1 - t)^{p-1} + eps (eps + t - t eps)^{p-1}].
inline double census_psi(double eps, double p, double q, double t) {
  const double u = t * eps + 1.0 - t;
  const double v = eps + t - t * eps;
  return std::pow(t, q - 1.0) * (std::pow(u, p - 1.0) + eps * std::pow(v, p - 1.0));
}

/// h(t) = psi(1 - t) - psi(t); critical points correspond to roots of h.
inline double census_h(double eps, double p, double q, double t) {
  return census_psi(eps, p, q, 1.0 - t) - census_psi(eps, p, q, t);
}

/// psi'(1/2) = 2^{3-p-q} (1+eps)^{p-2} [(q-1)(1+eps)^2 - (p-1)(1-eps)^2].
inline double census_psi_prime_half(double eps, double p, double q) {
  return std::pow(2.0, 3.0 - p - q) * std::pow(1.0 + eps, p - 2.0) *
         ((q - 1.0) * (1.0 + eps) * (1.0 + eps) - (p - 1.0) * (1.0 - eps) * (1.0 - eps));
}

/// ((1-eps)/(1+eps))^2 (p-1)/(q-1).
inline double census_tau(double eps, double p, double q) {
  const double k = (1.0 - eps) / (1.0 + eps);
  return k * k * (p - 1.0) / (q - 1.0);
}

/// Number of distinct positive critical points of f_{A_eps} on the simplex.
///
/// t = 1/2 is always one. The other roots of h on (0, 1/2) come from sign
/// changes of g(t) = h(t)/(1/2 - t), refined by bisection; each contributes
/// t and 1 - t. The scan is uniform with `grid` cells on (0, 1/2], plus one
/// point per decade below the first cell, since for q near 1 a root can sit
/// at t ~ 1e-9 or closer to 0.
inline std::size_t critical_point_census_2x2(double eps, double p, double q, std::size_t grid = 4000) {
  if (!(eps > 0.0)) throw std::invalid_argument("census: eps must be positive");
  if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q)) {
    throw std::invalid_argument("census: p, q must lie in (1, inf)");
  }
  if (grid < 1000) throw std::invalid_argument("census: grid must be >= 1000");

  auto g = [&](double t) {
    if (t >= 0.5) return 2.0 * census_psi_prime_half(eps, p, q);
    return census_h(eps, p, q, t) / (0.5 - t);
  };

  const double step = 0.5 / static_cast<double>(grid);
  std::vector<double> ts;
  for (int e = -300; std::pow(10.0, e) < step; ++e) ts.push_back(std::pow(10.0, e));
  for (std::size_t i = 1; i <= grid; ++i) ts.push_back(step * static_cast<double>(i));

  std::vector<double> roots;
  double t0 = ts.front();
  double g0 = g(t0);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double t1 = ts[i];
    const double g1 = g(t1);
    if (g0 == 0.0 && t0 < 0.5) roots.push_back(t0);
    if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
      double lo = t0, hi = t1, glo = g0;
      while (hi - lo > 1e-12 * hi) {
        const double mid = hi > 2.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0) && gm != 0.0) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      const double r = 0.5 * (lo + hi);
      if (r < 0.5 - 1e-9) roots.push_back(r);
    }
    t0 = t1;
    g0 = g1;
  }
  std::sort(roots.begin(), roots.end());
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i == 0 || roots[i] - roots[i - 1] > 1e-9 * roots[i]) ++distinct;
  }
  return 1 + 2 * distinct;
}

}  // namespace conenorm
