#pragma once

// Finite Markov chains: semigroups H_t = exp(-t(I - K)), Birkhoff-ratio
// estimates of the log-Sobolev constant, the spectral gap, and the
// hypercontractive identity ||M||_{pi,2->q} = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conenorm/cone_geometry.hpp"
#include "conenorm/matrix.hpp"
#include "conenorm/norm_spec.hpp"
#include "conenorm/power_method.hpp"

namespace conenorm {

/// Thrown when K + K* is reducible.
class ReducibleChain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kChainTol = 1e-10;

/// Stationary distribution of a row-stochastic K by power iteration on the
/// lazy chain (I + K)/2, which converges for every irreducible K.
inline Vector stationary_distribution(const NonnegMatrix& k, double tol = 1e-14,
                                      std::size_t max_iters = 1000000) {
  const std::size_t n = k.rows();
  Vector pi(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Vector kp = k.apply_transpose(pi);
    Vector next(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 0.5 * (pi[i] + kp[i]);
      total += next[i];
    }
    for (double& v : next) v /= total;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff += std::abs(next[i] - pi[i]);
    pi = std::move(next);
    if (diff <= tol) break;
  }
  return pi;
}

/// (K, pi) with K row-stochastic and pi a positive stationary distribution.
class MarkovChain {
 public:
  MarkovChain(NonnegMatrix k, std::optional<Vector> pi = std::nullopt) : k_(std::move(k)) {
    const std::size_t n = k_.rows();
    if (k_.cols() != n || n == 0) throw DimensionError("MarkovChain: kernel must be square");
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : k_.row(i)) s += v;
      if (std::abs(s - 1.0) > kChainTol) {
        throw std::invalid_argument("MarkovChain: row " + std::to_string(i) + " sums to " +
                                    std::to_string(s));
      }
    }
    pi_ = pi ? std::move(*pi) : stationary_distribution(k_);
    if (pi_.size() != n) throw DimensionError("MarkovChain: pi has wrong dimension");
    if (!is_positive(pi_)) throw std::invalid_argument("MarkovChain: pi must be positive");
    double total = 0.0;
    for (double v : pi_) total += v;
    if (std::abs(total - 1.0) > kChainTol) throw std::invalid_argument("MarkovChain: pi must sum to 1");
    const Vector pk = k_.apply_transpose(pi_);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += std::abs(pk[i] - pi_[i]);
    if (err > kChainTol) throw std::invalid_argument("MarkovChain: pi is not stationary for K");
  }

  const NonnegMatrix& kernel() const { return k_; }
  const Vector& pi() const { return pi_; }
  std::size_t size() const { return k_.rows(); }

 private:
  NonnegMatrix k_;
  Vector pi_;
};

/// K = [[1-a, a], [b, 1-b]] with pi = (b, a)/(a+b).
inline MarkovChain two_state_chain(double a, double b) {
  if (!(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0)) {
    throw std::invalid_argument("two_state_chain: a, b must lie in (0, 1]");
  }
  return MarkovChain(NonnegMatrix{{1.0 - a, a}, {b, 1.0 - b}}, Vector{b / (a + b), a / (a + b)});
}

/// M* = D_pi^{-1} M^T D_pi.
inline NonnegMatrix adjoint(const MarkovChain& chain, const NonnegMatrix& m) {
  const std::size_t n = chain.size();
  if (m.rows() != n || m.cols() != n) throw DimensionError("adjoint: dimension mismatch");
  const Vector& pi = chain.pi();
  NonnegMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(j, i) * pi[j] / pi[i];
  return out;
}

/// (K + K*)/2, the reversibilization; stochastic with the same pi.
inline MarkovChain reversibilized(const MarkovChain& chain) {
  const NonnegMatrix sum = chain.kernel() + adjoint(chain, chain.kernel());
  return MarkovChain(0.5 * sum, chain.pi());
}

/// Connectivity of the support graph of K + K*.
inline bool reversibilization_irreducible(const MarkovChain& chain) {
  const std::size_t n = chain.size();
  const NonnegMatrix& k = chain.kernel();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[j] || (k(i, j) == 0.0 && k(j, i) == 0.0)) continue;
      seen[j] = true;
      ++count;
      stack.push_back(j);
    }
  }
  return count == n;
}

struct SemigroupOptions {
  /// Bound on the truncated Poisson tail.
  double tol = 1e-15;
  /// Make the tail bound relative to the smallest entry of the partial sum
  /// and take at least n - 1 terms, so tiny positive entries stay accurate.
  bool relative = false;
};

/// H_t = e^{-t} sum_j t^j/j! K^j, truncated once the Poisson tail is below
/// tol. Every K^j is stochastic, so the entrywise error is at most the tail.
inline NonnegMatrix semigroup(const MarkovChain& chain, double t, const SemigroupOptions& opt = {}) {
  if (!(t >= 0.0) || std::isinf(t)) throw std::invalid_argument("semigroup: t must be finite and >= 0");
  const std::size_t n = chain.size();
  if (t == 0.0) return NonnegMatrix::identity(n);
  const NonnegMatrix& k = chain.kernel();
  const double lt = std::log(t);
  auto weight = [&](std::size_t j) {
    const double jd = static_cast<double>(j);
    return std::exp(-t + jd * lt - std::lgamma(jd + 1.0));
  };

  NonnegMatrix power = NonnegMatrix::identity(n);
  NonnegMatrix sum(n, n);
  for (std::size_t j = 0;; ++j) {
    if (j > 0) power = power * k;
    const double w = weight(j);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) sum(a, b) += w * power(a, b);

    const double next = static_cast<double>(j + 2);
    if (next <= t) continue;
    const double tail = weight(j + 1) / (1.0 - t / next);
    double scale = 1.0;
    if (opt.relative) {
      if (j + 1 < n) continue;
      scale = *std::min_element(sum.data().begin(), sum.data().end());
      if (scale == 0.0) {
        if (j > 4 * n + static_cast<std::size_t>(4.0 * t) + 64) break;  // structurally zero entries
        continue;
      }
    }
    if (tail <= opt.tol * scale) break;
  }
  return sum;
}

/// Delta(M_t) with M_t = exp(-t(I - (K + K*)/2)).
inline double reversibilized_diameter(const MarkovChain& chain, double t, double tol = 1e-14) {
  if (!(t > 0.0)) throw std::invalid_argument("rho: t must be positive");
  if (!reversibilization_irreducible(chain)) throw ReducibleChain("rho: K + K* is reducible");
  const NonnegMatrix mt = semigroup(reversibilized(chain), t, {tol, true});
  return projective_diameter(mt);
}

/// ln rho(t), rho(t) = kappa_H(exp(t/2 (K + K*))) = kappa_H(M_t).
inline double log_rho(const MarkovChain& chain, double t, double tol = 1e-14) {
  return log_birkhoff_from_diameter(reversibilized_diameter(chain, t, tol));
}

inline double rho(const MarkovChain& chain, double t, double tol = 1e-14) {
  return std::exp(log_rho(chain, t, tol));
}

/// rho(t) for the two-state chain in closed form.
inline double two_state_rho(double a, double b, double t) {
  const double xi = a + b;
  const double c2 = a / b;
  const double e = std::exp(-xi * t);
  const double root = std::sqrt((1.0 + c2 * e) * (1.0 + e / c2));
  return (root + e - 1.0) / (root - e + 1.0);
}

/// sigma = (a - b)/(ln a - ln b), or a when a = b.
inline double two_state_sigma(double a, double b) {
  if (!(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0)) {
    throw std::invalid_argument("two_state_sigma: a, b must lie in (0, 1]");
  }
  if (a == b) return a;
  const double d = std::log(a) - std::log(b);
  if (std::abs(d) < 1e-8) {
    // (a-b)/ln(a/b) = m (1 - d^2/24 + ...) around the geometric mean.
    const double m = std::sqrt(a * b);
    return m * (1.0 - d * d / 24.0);
  }
  return (a - b) / d;
}

/// Smallest nonzero eigenvalue of I - (K + K*)/2.
inline double spectral_gap(const MarkovChain& chain) {
  if (!reversibilization_irreducible(chain)) throw ReducibleChain("spectral_gap: K + K* is reducible");
  const std::size_t n = chain.size();
  const Vector& pi = chain.pi();
  const NonnegMatrix& k = chain.kernel();
  Eigen::MatrixXd s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // D^{1/2} (K + K*)/2 D^{-1/2} = (D^{1/2} K D^{-1/2} + its transpose)/2
      const double kij = k(i, j) * std::sqrt(pi[i] / pi[j]);
      const double kji = k(j, i) * std::sqrt(pi[j] / pi[i]);
      s(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * (kij + kji);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double cut = kChainTol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::size_t zeros = 0;
  double gap = kInfinity;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= cut) {
      ++zeros;
    } else {
      gap = std::min(gap, ev[i]);
    }
  }
  if (zeros != 1) throw ReducibleChain("spectral_gap: eigenvalue 0 is not simple");
  return std::isinf(gap) ? 0.0 : gap;
}

struct DirichletEntropy {
  double dirichlet;
  double entropy;
};

/// D(x,x) = <x, (I-K)x>_pi and E(x) = sum pi_i x_i^2 ln(x_i^2/||x||_{pi,2}^2).
inline DirichletEntropy dirichlet_and_entropy(const MarkovChain& chain, std::span<const double> x) {
  if (x.size() != chain.size()) throw DimensionError("dirichlet_and_entropy: dimension mismatch");
  if (max_abs(x) == 0.0) throw std::invalid_argument("dirichlet_and_entropy: x = 0");
  const Vector& pi = chain.pi();
  const Vector kx = chain.kernel().apply(x);
  double d = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += pi[i] * x[i] * (x[i] - kx[i]);
    norm2 += pi[i] * x[i] * x[i];
  }
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double sq = x[i] * x[i];
    e += pi[i] * sq * std::log(sq / norm2);
  }
  return {d, e};
}

/// D(x,x) through the reversibilization (K + K*)/2.
inline double dirichlet_symmetrized(const MarkovChain& chain, std::span<const double> x) {
  return dirichlet_and_entropy(reversibilized(chain), x).dirichlet;
}

struct LscPoint {
  double t;
  double rho;
  double sigma_lb;
  /// False for t below kReliableT, or once M_t is numerically rank one
  /// (Delta below kReliableDiameter) and rounding dominates rho.
  bool reliable;
};

struct LscReport {
  /// Minimum of sigma_lb over the reliable grid points; approaches the
  /// t -> 0 limit of -ln rho(t)/(2t) as the grid is refined.
  double sigma_lower;
  double best_t;
  /// lambda / 2.
  double sigma_upper;
  std::vector<double> t_grid;
  std::vector<LscPoint> per_t;
};

inline constexpr double kReliableT = 1e-6;
inline constexpr double kReliableDiameter = 1e-6;

/// {2^-k : k = 0..20}.
inline std::vector<double> default_t_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

/// Geometric grid of `count` points from start to stop inclusive.
inline std::vector<double> log_grid(double start, double stop, std::size_t count) {
  if (!(start > 0.0 && stop > 0.0) || count == 0) {
    throw std::invalid_argument("log_grid: need positive endpoints and count >= 1");
  }
  std::vector<double> grid;
  if (count == 1) return {start};
  const double a = std::log(start);
  const double b = std::log(stop);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return grid;
}

/// sigma_LB(t) = -ln rho(t)/(2t).
inline double sigma_lb(const MarkovChain& chain, double t) { return -log_rho(chain, t) / (2.0 * t); }

inline LscReport sigma_lower_bound(const MarkovChain& chain,
                                   std::vector<double> t_grid = default_t_grid()) {
  if (t_grid.empty()) throw std::invalid_argument("sigma_lower_bound: empty grid");
  for (double t : t_grid) {
    if (!(t > 0.0) || std::isinf(t)) throw std::invalid_argument("sigma_lower_bound: grid must be positive");
  }
  if (!reversibilization_irreducible(chain)) {
    throw ReducibleChain("sigma_lower_bound: K + K* is reducible");
  }
  LscReport rep;
  rep.t_grid = std::move(t_grid);
  rep.sigma_upper = spectral_gap(chain) / 2.0;
  rep.sigma_lower = kInfinity;
  rep.best_t = rep.t_grid.front();
  for (double t : rep.t_grid) {
    const double delta = reversibilized_diameter(chain, t);
    const double lr = log_birkhoff_from_diameter(delta);
    const LscPoint pt{t, std::exp(lr), -lr / (2.0 * t), t >= kReliableT && delta >= kReliableDiameter};
    rep.per_t.push_back(pt);
    if (pt.reliable && pt.sigma_lb < rep.sigma_lower) {
      rep.sigma_lower = pt.sigma_lb;
      rep.best_t = t;
    }
  }
  if (std::isinf(rep.sigma_lower)) {
    // No reliable point: fall back to the flagged values.
    for (const auto& pt : rep.per_t) {
      if (pt.sigma_lb < rep.sigma_lower) {
        rep.sigma_lower = pt.sigma_lb;
        rep.best_t = pt.t;
      }
    }
  }
  return rep;
}

struct HypercontractiveResult {
  double norm;
  double q_max;
  PowerResult run;
};

/// ||M||_{pi,2->q} computed as ||M*||_{pi,q*->2}. On that adjoint problem
/// the power step is x -> Phi_q(M M* x) up to scale, with contraction ratio
/// at most (q-1) kappa_H(M M*).
inline HypercontractiveResult hypercontractive_check(const MarkovChain& chain, const NonnegMatrix& m,
                                                     double q, const SolveOptions& base = {}) {
  const std::size_t n = chain.size();
  if (m.rows() != n || m.cols() != n) throw DimensionError("hypercontractive_check: dimension mismatch");
  static_cast<void>(MarkovChain(m, chain.pi()));  // M stochastic with pi^T M = pi^T
  const NonnegMatrix ms = adjoint(chain, m);
  const NonnegMatrix mms = m * ms;
  if (!reversibilization_irreducible(MarkovChain(mms, chain.pi()))) {
    throw ReducibleChain("hypercontractive_check: M M* is reducible");
  }
  const double kappa = birkhoff_ratio(mms);
  const double q_max = kappa == 0.0 ? kInfinity : 1.0 + 1.0 / kappa;
  if (!(q >= 2.0) || q > q_max * (1.0 + 1e-12)) {
    throw std::domain_error("hypercontractive_check: q = " + std::to_string(q) +
                            " outside [2, " + std::to_string(q_max) + "]");
  }
  ProblemInstance inst(ms, WeightedPNorm(chain.pi(), 2.0), WeightedPNorm(chain.pi(), dual_exponent(q)));
  SolveOptions opt = base;
  opt.tau_override = (q - 1.0) * kappa;
  opt.force = true;
  PowerResult run = solve(inst, opt);
  return {run.norm_estimate, q_max, std::move(run)};
}

}  // namespace conenorm
