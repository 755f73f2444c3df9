#pragma once

// Certified nonlinear power iteration for ||A||_{beta -> alpha}, A >= 0.
//
//   x_{k+1} = S_A(x_k) = J_{beta*}(A^T J_alpha(A x_k))
//
// S_A is a strict contraction in Hilbert's metric whenever
//   tau = kappa_H(A) kappa_H(A^T) kappa_H(J_alpha) kappa_H(J_beta*) < 1,
// which yields a unique positive maximizer and computable error bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conenorm/cone_geometry.hpp"
#include "conenorm/matrix.hpp"
#include "conenorm/norm_spec.hpp"

namespace conenorm {

/// The contraction certificate does not hold (tau >= 1) and the caller did
/// not ask for an uncertified run.
class NoCertificate : public std::runtime_error {
 public:
  NoCertificate(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

/// A together with the output norm alpha (on R^m) and input norm beta (on R^n).
class ProblemInstance {
 public:
  ProblemInstance(NonnegMatrix a, NormSpec alpha, NormSpec beta)
      : a_(std::move(a)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (dimension(alpha_) != a_.rows()) {
      throw DimensionError("ProblemInstance: alpha has dimension " +
                           std::to_string(dimension(alpha_)) + ", matrix has " +
                           std::to_string(a_.rows()) + " rows");
    }
    if (dimension(beta_) != a_.cols()) {
      throw DimensionError("ProblemInstance: beta has dimension " +
                           std::to_string(dimension(beta_)) + ", matrix has " +
                           std::to_string(a_.cols()) + " columns");
    }
    if (!is_differentiable(alpha_, Side::primal)) {
      throw NonDifferentiable("ProblemInstance: alpha must be differentiable with explicit J");
    }
    if (!is_differentiable(beta_, Side::dual)) {
      throw NonDifferentiable("ProblemInstance: dual of beta must be differentiable with explicit J");
    }
  }

  const NonnegMatrix& matrix() const { return a_; }
  const NormSpec& alpha() const { return alpha_; }
  const NormSpec& beta() const { return beta_; }

  /// f_A(x) = ||Ax||_alpha / ||x||_beta. Requires an evaluable beta.
  double objective(std::span<const double> x) const {
    return eval(alpha_, a_.apply(x)) / eval(beta_, x);
  }

 private:
  NonnegMatrix a_;
  NormSpec alpha_;
  NormSpec beta_;
};

/// Connectivity of the support graph of A^T A (columns adjacent when they
/// share a nonzero row). False if A has a zero column.
inline bool check_gram_irreducible(const NonnegMatrix& a) {
  const std::size_t n = a.cols();
  if (n == 0) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<bool> touched(n, false);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::optional<std::size_t> first;
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) == 0.0) continue;
      touched[j] = true;
      if (!first) {
        first = j;
      } else {
        parent[find(j)] = find(*first);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!touched[j] || find(j) != find(0)) return false;
  }
  return true;
}

/// S_A(x) = J_{beta*}(A^T J_alpha(Ax)). The output lies on the unit
/// beta-sphere and is invariant under positive rescaling of x.
inline Vector apply_S(const ProblemInstance& inst, std::span<const double> x) {
  const Vector ax = inst.matrix().apply(x);
  if (max_abs(ax) == 0.0) throw std::domain_error("apply_S: Ax = 0");
  const Vector ja = duality_map(inst.alpha(), ax, Side::primal);
  const Vector y = inst.matrix().apply_transpose(ja);
  return duality_map(inst.beta(), y, Side::dual);
}

struct Certificate {
  double kappa_A = 1.0;
  double kappa_At = 1.0;
  double bound_J_alpha = 0.0;
  double bound_J_beta_star = 0.0;
  /// kappa_A * kappa_At * bound_J_alpha * bound_J_beta_star.
  double tau = 1.0;
  /// max_i 1 / ||e_i||_beta; bounds ||x - y||_inf / d_H(x, y) on the unit sphere.
  double r = 1.0;
  /// max ||x||_beta / ||x||_inf = ||1||_beta (an upper bound when gamma_exact is false).
  double gamma = 1.0;
  bool gamma_exact = true;
  /// ||1||_alpha, the constant printed in the a-priori statement; logged only.
  double gamma_alpha = 1.0;
  /// sum nnz(w_k) + sum nnz(varpi_k) + nnz(A): arithmetic cost of one step.
  std::size_t cost_per_iteration = 0;
};

inline Certificate certificate(const ProblemInstance& inst) {
  Certificate c;
  const NonnegMatrix& a = inst.matrix();
  c.kappa_A = birkhoff_ratio(a);
  c.kappa_At = birkhoff_ratio(a.transpose());
  c.bound_J_alpha = birkhoff_bound_J(inst.alpha(), Side::primal);
  c.bound_J_beta_star = birkhoff_bound_J(inst.beta(), Side::dual);
  c.tau = c.kappa_A * c.kappa_At * c.bound_J_alpha * c.bound_J_beta_star;

  const Vector basis = unit_basis_norms(inst.beta());
  c.r = 0.0;
  for (double e : basis) c.r = std::max(c.r, 1.0 / e);
  const Vector one = ones(a.cols());
  c.gamma_exact = is_evaluable(inst.beta());
  c.gamma = norm_upper_bound(inst.beta(), one);
  c.gamma_alpha = eval(inst.alpha(), ones(a.rows()));
  c.cost_per_iteration = weight_nnz(inst.alpha()) + weight_nnz(inst.beta()) + a.nnz();
  return c;
}

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iters = 100000;
  /// Run even when tau >= 1; the result then carries no enclosure.
  bool force = false;
  /// Strictly positive start; defaults to the all-ones vector.
  std::optional<Vector> x0;
  /// A caller-proven upper bound on kappa_H(S_A) that replaces the
  /// certificate's product tau.
  std::optional<double> tau_override;
  bool record_iterates = false;
};

struct PowerResult {
  double norm_estimate = 0.0;
  /// Final iterate; unit beta-norm whenever beta is evaluable.
  Vector maximizer;
  std::size_t iterations = 0;
  /// tau^k * C_tilde.
  double a_priori_gap = kInfinity;
  /// gamma * r * tau / (1 - tau) * d_H(x_{k-1}, x_k).
  double a_posteriori_gap = kInfinity;
  bool converged = false;
  /// True when tau < 1 so the enclosure below is rigorous.
  bool certified = false;
  double tau = 1.0;
  double C = kInfinity;
  double C_tilde = kInfinity;
  /// (1 - gap) ||A|| <= norm_estimate <= ||A||  =>  ||A|| in [lower, upper].
  double lower = 0.0;
  double upper = kInfinity;
  Certificate cert;
  /// d_H(x_{k-1}, x_k) for k = 1..iterations.
  std::vector<double> residual_history;
  /// f_A along the iterates (||A x_k||_alpha / ||x_k||_beta when evaluable).
  std::vector<double> objective_history;
  /// x_0..x_k when SolveOptions::record_iterates is set.
  std::vector<Vector> iterates;
};

inline PowerResult solve(const ProblemInstance& inst, const SolveOptions& opt = {}) {
  const NonnegMatrix& a = inst.matrix();
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  if (!check_gram_irreducible(a)) {
    throw std::domain_error("solve: A^T A is not irreducible; no positive maximizer is guaranteed");
  }

  PowerResult res;
  res.cert = certificate(inst);
  res.tau = opt.tau_override ? *opt.tau_override : res.cert.tau;
  res.certified = res.tau < 1.0;
  if (!res.certified && !opt.force) {
    throw NoCertificate("solve: tau = " + std::to_string(res.tau) +
                            " >= 1, global convergence is not certified",
                        res.tau);
  }

  Vector x = opt.x0 ? *opt.x0 : ones(a.cols());
  if (x.size() != a.cols()) throw DimensionError("solve: x0 has wrong dimension");
  if (!is_positive(x)) throw std::invalid_argument("solve: x0 must be strictly positive");
  const bool beta_evaluable = is_evaluable(inst.beta());
  if (beta_evaluable) x = scaled(x, 1.0 / eval(inst.beta(), x));
  if (opt.record_iterates) res.iterates.push_back(x);

  const double r = res.cert.r;
  const double contraction = res.certified ? res.tau / (1.0 - res.tau) : kInfinity;
  double d_first = 0.0;
  double d_last = kInfinity;

  for (std::size_t k = 1; k <= opt.max_iters; ++k) {
    Vector next = apply_S(inst, x);
    d_last = hilbert_distance(x, next);
    if (k == 1) d_first = d_last;
    x = std::move(next);
    res.iterations = k;
    res.residual_history.push_back(d_last);
    const double ax = eval(inst.alpha(), a.apply(x));
    res.objective_history.push_back(beta_evaluable ? ax / eval(inst.beta(), x) : ax);
    if (opt.record_iterates) res.iterates.push_back(x);

    const bool done = res.certified ? (r * contraction * d_last <= opt.tol) : (d_last <= opt.tol);
    if (done) {
      res.converged = true;
      break;
    }
  }

  res.maximizer = x;
  // S_A lands on the unit beta-sphere, so ||Ax||_alpha is f_A(x).
  res.norm_estimate = eval(inst.alpha(), a.apply(x));

  if (res.certified) {
    res.C = r * d_first / (1.0 - res.tau);
    res.C_tilde = res.C * res.cert.gamma;
    res.a_priori_gap = std::pow(res.tau, static_cast<double>(res.iterations)) * res.C_tilde;
    res.a_posteriori_gap = res.cert.gamma * r * contraction * d_last;
    const double gap = std::min(res.a_priori_gap, res.a_posteriori_gap);
    res.lower = res.norm_estimate;
    res.upper = gap < 1.0 ? res.norm_estimate / (1.0 - gap) : kInfinity;
  } else {
    res.lower = res.norm_estimate;
    res.upper = kInfinity;
  }
  return res;
}

}  // namespace conenorm
