#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "conenorm/log_sobolev.hpp"
#include "test_util.hpp"

using namespace conenorm;

namespace {

MarkovChain random_chain(std::mt19937_64& g, std::size_t n, double sparsity = 0.0) {
  NonnegMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool drop = i != j && testutil::uniform(g, 0, 1) < sparsity && j != (i + 1) % n;
      k(i, j) = drop ? 0.0 : testutil::uniform(g, 0.05, 1.0);
      s += k(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) k(i, j) /= s;
  }
  return MarkovChain(k);
}

double max_row_sum_error(const NonnegMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace

TEST(MarkovChain, Validation) {
  EXPECT_THROW(MarkovChain(NonnegMatrix{{0.5, 0.4}, {0.5, 0.5}}), std::invalid_argument);
  EXPECT_THROW(MarkovChain(NonnegMatrix{{0.5, 0.5}, {0.2, 0.8}}, Vector{0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(MarkovChain(NonnegMatrix{{1.0}}, Vector{1.0, 0.0}), DimensionError);
  const MarkovChain c(NonnegMatrix{{0.8, 0.2}, {0.8, 0.2}});
  EXPECT_NEAR(c.pi()[0], 0.8, 1e-13);
  EXPECT_NEAR(c.pi()[1], 0.2, 1e-13);
}

TEST(Adjoint, Examples) {
  const NonnegMatrix sym{{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}};
  const MarkovChain uni(sym, Vector{1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_LE(max_abs_difference(adjoint(uni, sym), sym), 1e-15);
  const MarkovChain two = two_state_chain(0.2, 0.7);
  EXPECT_LE(max_abs_difference(adjoint(two, two.kernel()), two.kernel()), 1e-15);
  EXPECT_LE(max_abs_difference(adjoint(two, NonnegMatrix::identity(2)), NonnegMatrix::identity(2)), 0.0);

  std::mt19937_64 g(1);
  const MarkovChain c = random_chain(g, 4);
  const NonnegMatrix ks = adjoint(c, c.kernel());
  EXPECT_LE(max_abs_difference(adjoint(c, ks), c.kernel()), 1e-15);
  EXPECT_LE(max_row_sum_error(ks), 1e-12);
  EXPECT_THROW(adjoint(c, NonnegMatrix::identity(3)), DimensionError);
}

TEST(Semigroup, Examples) {
  const MarkovChain c = two_state_chain(0.3, 0.3);
  EXPECT_EQ(semigroup(c, 0.0), NonnegMatrix::identity(2));
  for (double t : {0.1, 1.0, 7.5, 40.0}) {
    const NonnegMatrix h = semigroup(c, t);
    const double e = std::exp(-0.6 * t);
    EXPECT_NEAR(h(0, 0), (1 + e) / 2, 1e-14);
    EXPECT_NEAR(h(0, 1), (1 - e) / 2, 1e-14);
    EXPECT_NEAR(h(1, 0), (1 - e) / 2, 1e-14);
    EXPECT_NEAR(h(1, 1), (1 + e) / 2, 1e-14);
  }
}

TEST(Semigroup, StochasticAndGroupLaw) {
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 10; ++trial) {
    const MarkovChain c = random_chain(g, 4, 0.5);
    const double t = testutil::uniform(g, 0.1, 3), s = testutil::uniform(g, 0.1, 3);
    EXPECT_LE(max_row_sum_error(semigroup(c, t)), 4e-15 * 4);
    EXPECT_LE(max_abs_difference(semigroup(c, t + s), semigroup(c, t) * semigroup(c, s)), 1e-13);
  }
  // Large t: the Poisson weights are formed in log space and do not overflow.
  const MarkovChain c = random_chain(g, 3);
  const NonnegMatrix h = semigroup(c, 900.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(h(i, j), c.pi()[j], 1e-12);
}

TEST(Rho, TwoStateClosedForm) {
  for (auto [a, b] : {std::pair{0.2, 0.8}, std::pair{0.3, 0.3}, std::pair{1.0, 0.05}, std::pair{0.6, 0.9}}) {
    const MarkovChain c = two_state_chain(a, b);
    for (double t : log_grid(0.01, 10.0, 25)) {
      EXPECT_NEAR(rho(c, t), two_state_rho(a, b, t), 1e-9) << a << " " << b << " " << t;
    }
  }
  const MarkovChain c = two_state_chain(0.3, 0.3);
  for (double t : {0.05, 0.5, 2.0}) EXPECT_NEAR(rho(c, t), std::exp(-0.6 * t), 1e-12);
}

TEST(Rho, MonotoneAndSubmultiplicative) {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 5; ++trial) {
    const MarkovChain c = random_chain(g, 4, 0.4);
    double prev = 1.0;
    for (double t : log_grid(1e-3, 5.0, 15)) {
      const double r = rho(c, t);
      EXPECT_LE(r, prev + 1e-12);
      prev = r;
    }
    const double t = testutil::uniform(g, 0.05, 1), s = testutil::uniform(g, 0.05, 1);
    EXPECT_LE(log_rho(c, t + s), log_rho(c, t) + log_rho(c, s) + 1e-10);
  }
  EXPECT_GT(rho(two_state_chain(0.4, 0.5), 1e-6), 1 - 1e-5);
}

TEST(Rho, ReducibleRejected) {
  const MarkovChain c(NonnegMatrix{{0.5, 0.5, 0, 0}, {0.5, 0.5, 0, 0}, {0, 0, 0.5, 0.5}, {0, 0, 0.5, 0.5}},
                      Vector{0.25, 0.25, 0.25, 0.25});
  EXPECT_THROW(rho(c, 1.0), ReducibleChain);
  EXPECT_THROW(spectral_gap(c), ReducibleChain);
  EXPECT_THROW(sigma_lower_bound(c), ReducibleChain);
}

TEST(TwoStateSigma, Values) {
  EXPECT_DOUBLE_EQ(two_state_sigma(0.3, 0.3), 0.3);
  EXPECT_NEAR(two_state_sigma(0.2, 0.8), 0.43280851226668904, 1e-15);
  EXPECT_DOUBLE_EQ(two_state_sigma(0.2, 0.8), two_state_sigma(0.8, 0.2));
  EXPECT_NEAR(two_state_sigma(0.3, 0.3 * (1 + 1e-10)), 0.3, 1e-10);
  EXPECT_THROW(two_state_sigma(0.0, 0.5), std::invalid_argument);
}

TEST(SpectralGap, Examples) {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = testutil::uniform(g, 0.01, 1), b = testutil::uniform(g, 0.01, 1);
    const double gap = spectral_gap(two_state_chain(a, b));
    EXPECT_NEAR(gap, a + b, 1e-13);
    EXPECT_LE(two_state_sigma(a, b), gap / 2 + 1e-15);
  }
  const std::size_t n = 5;
  const MarkovChain complete(NonnegMatrix(n, n, 1.0 / n));
  EXPECT_NEAR(spectral_gap(complete), 1.0, 1e-13);
}

TEST(SigmaLowerBound, TwoStateReports) {
  const LscReport eq = sigma_lower_bound(two_state_chain(0.3, 0.3));
  EXPECT_NEAR(eq.sigma_lower, 0.3, 1e-9);
  EXPECT_NEAR(eq.sigma_upper, 0.3, 1e-13);
  for (const auto& pt : eq.per_t) EXPECT_NEAR(pt.sigma_lb, 0.3, 1e-7);

  const LscReport r = sigma_lower_bound(two_state_chain(0.2, 0.8));
  EXPECT_EQ(r.per_t.size(), 21u);
  EXPECT_NEAR(r.sigma_lower, 0.4, 1e-5);
  EXPECT_NEAR(r.sigma_upper, 0.5, 1e-13);
  EXPECT_LE(r.sigma_lower, two_state_sigma(0.2, 0.8));
  EXPECT_FALSE(r.per_t.back().reliable);
  EXPECT_TRUE(r.per_t.front().reliable);
  for (const auto& pt : r.per_t) EXPECT_LE(pt.sigma_lb, two_state_sigma(0.2, 0.8) + 1e-10);
}

TEST(SigmaLowerBound, SmallTimeLimit) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = testutil::uniform(g, 0.05, 1), b = testutil::uniform(g, 0.05, 1);
    const MarkovChain c = two_state_chain(a, b);
    EXPECT_NEAR(sigma_lb(c, 1e-5), std::sqrt(a * b), 1e-4);
  }
}

TEST(SigmaLowerBound, LargeTimesCanExceedExactConstant) {
  // Away from t -> 0 the per-t value is only a diagnostic.
  const MarkovChain c = two_state_chain(0.2, 0.8);
  EXPECT_GT(sigma_lb(c, 5.0), two_state_sigma(0.2, 0.8));
  EXPECT_NEAR(sigma_lb(c, 20.0), 0.488842821940705, 1e-6);
  // M_t is rank one to working precision here.
  const LscReport r = sigma_lower_bound(c, {0.5, 60.0});
  EXPECT_TRUE(r.per_t[0].reliable);
  EXPECT_FALSE(r.per_t[1].reliable);
  EXPECT_EQ(r.best_t, 0.5);
}

TEST(SigmaLowerBound, GridValidation) {
  const MarkovChain c = two_state_chain(0.2, 0.8);
  EXPECT_THROW(sigma_lower_bound(c, {}), std::invalid_argument);
  EXPECT_THROW(sigma_lower_bound(c, {0.5, -1.0}), std::invalid_argument);
}

TEST(DirichletEntropy, Properties) {
  const MarkovChain c = two_state_chain(0.2, 0.8);
  const DirichletEntropy z = dirichlet_and_entropy(c, Vector{2, 2});
  EXPECT_NEAR(z.dirichlet, 0.0, 1e-15);
  EXPECT_NEAR(z.entropy, 0.0, 1e-15);
  EXPECT_THROW(dirichlet_and_entropy(c, Vector{0, 0}), std::invalid_argument);

  std::mt19937_64 g(6);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = testutil::uniform(g, 0.05, 1), b = testutil::uniform(g, 0.05, 1);
    const MarkovChain ch = two_state_chain(a, b);
    const Vector x = testutil::random_positive_vector(g, 2);
    const DirichletEntropy de = dirichlet_and_entropy(ch, x);
    EXPECT_GE(de.dirichlet, -1e-15);
    EXPECT_GE(de.entropy, -1e-15);
    EXPECT_LE(two_state_sigma(a, b) * de.entropy, de.dirichlet + 1e-13);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const MarkovChain ch = random_chain(g, 4, 0.3);
    const Vector x = testutil::random_positive_vector(g, 4);
    EXPECT_NEAR(dirichlet_and_entropy(ch, x).dirichlet, dirichlet_symmetrized(ch, x), 1e-13);
  }
}

TEST(Hypercontractive, TwoStateSemigroup) {
  const MarkovChain c = two_state_chain(0.2, 0.8);
  for (double t : {0.5, 1.0, 2.0}) {
    const NonnegMatrix h = semigroup(c, t);
    const NonnegMatrix hhs = h * adjoint(c, h);
    const double q = 1.0 + 1.0 / birkhoff_ratio(hhs);
    for (double qq : {2.0, 0.5 * (2.0 + q), q}) {
      const HypercontractiveResult r = hypercontractive_check(c, h, qq);
      EXPECT_NEAR(r.norm, 1.0, 1e-8);
      EXPECT_NEAR(r.run.maximizer[0], r.run.maximizer[1], 1e-10);
    }
    EXPECT_THROW(hypercontractive_check(c, h, q * 1.1), std::domain_error);
  }
}

TEST(Hypercontractive, QEqualsTwoForStochasticMatrices) {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 5; ++trial) {
    const MarkovChain c = random_chain(g, 3);
    const NonnegMatrix m = semigroup(c, 0.7);
    const HypercontractiveResult r = hypercontractive_check(c, m, 2.0);
    EXPECT_NEAR(r.norm, 1.0, 1e-8);
    // l2(pi) operator norm from the symmetrized eigenproblem.
    const NonnegMatrix mms = m * adjoint(c, m);
    Eigen::MatrixXd s(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s(i, j) = std::sqrt(c.pi()[i] / c.pi()[j]) * mms(i, j);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (s + s.transpose()));
    EXPECT_NEAR(std::sqrt(eig.eigenvalues().maxCoeff()), 1.0, 1e-12);
  }
}
