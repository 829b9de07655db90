#include "lqnash/forward.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace lqnash {
namespace {

using testing::RandomGame;
using testing::Rng;

Matrix scalar_matrix(double v) { return Matrix::Constant(1, 1, v); }

// Stabilizing ARE solution from the stable invariant subspace of the
// Hamiltonian [[A, -B R^{-1} B'], [-Q, -A']].
Matrix hamiltonian_are(const Matrix& a, const Matrix& b, const Matrix& q,
                       const Matrix& r) {
  const Index n = a.rows();
  Matrix h(2 * n, 2 * n);
  h << a, -b * r.inverse() * b.transpose(), -q, -a.transpose();
  const Eigen::EigenSolver<Matrix> es(h);
  ComplexMatrix stable(2 * n, n);
  Index col = 0;
  for (Index k = 0; k < 2 * n; ++k) {
    if (es.eigenvalues()(k).real() < 0.0) stable.col(col++) = es.eigenvectors().col(k);
  }
  EXPECT_EQ(col, n);
  const ComplexMatrix p = stable.bottomRows(n) * stable.topRows(n).inverse();
  return p.real();
}

TEST(CostParameters, Validation) {
  const GameSystem sys(scalar_matrix(1.0), {scalar_matrix(1.0), scalar_matrix(1.0)});
  const std::vector<Matrix> q = {scalar_matrix(1.0), scalar_matrix(1.0)};
  const std::vector<std::vector<Matrix>> good = {{scalar_matrix(1.0), scalar_matrix(0.0)},
                                                 {scalar_matrix(0.0), scalar_matrix(1.0)}};
  EXPECT_NO_THROW(CostParameters(sys, q, good));
  EXPECT_THROW(CostParameters(sys, {scalar_matrix(-1.0), scalar_matrix(1.0)}, good),
               std::invalid_argument);
  auto singular = good;
  singular[0][0] = scalar_matrix(0.0);
  EXPECT_THROW(CostParameters(sys, q, singular), std::invalid_argument);
  auto negative_cross = good;
  negative_cross[1][0] = scalar_matrix(-0.5);
  EXPECT_THROW(CostParameters(sys, q, negative_cross), std::invalid_argument);
  EXPECT_THROW(CostParameters(sys, {scalar_matrix(1.0)}, good), std::invalid_argument);
  const CostParameters id = CostParameters::with_identity_r(sys, q);
  EXPECT_EQ(id.R(0, 0)(0, 0), 1.0);
  EXPECT_EQ(id.R(0, 1)(0, 0), 0.0);
  EXPECT_EQ(CostParameters(sys, q, good).scaled(2.0).Q(1)(0, 0), 2.0);
}

TEST(NewtonKleinman, ScalarClosedForm) {
  // 2 a p - p^2 b^2 / r + q = 0 with p > 0: p = r (a + sqrt(a^2 + b^2 q / r)) / b^2.
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(0.5, 2.0);
    const double q = rng.uniform(0.1, 3.0), r = rng.uniform(0.1, 3.0);
    const double k0 = (std::abs(a) + 1.0) / b;  // a - b k0 < 0
    const LqrResult res = newton_kleinman(scalar_matrix(a), scalar_matrix(b),
                                          scalar_matrix(q), scalar_matrix(r),
                                          scalar_matrix(k0));
    ASSERT_TRUE(res.converged);
    const double p = r * (a + std::sqrt(a * a + b * b * q / r)) / (b * b);
    EXPECT_NEAR(res.P(0, 0), p, 1e-9 * (1.0 + p));
    EXPECT_NEAR(res.K(0, 0), b * p / r, 1e-9 * (1.0 + p));
  }
}

TEST(NewtonKleinman, MatchesHamiltonianSolution) {
  Rng rng(62);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = rng.integer(1, 4);
    const Index m = rng.integer(1, static_cast<int>(n));
    const Matrix a = rng.matrix(n, n), b = rng.matrix(n, m);
    const Matrix q = rng.psd(n, n, 0.1), r = rng.psd(m, m, 0.5);
    const Matrix k0 = testing::bass_gain(a, b);
    if (!is_hurwitz(a - b * k0)) continue;
    const LqrResult res = newton_kleinman(a, b, q, r, k0);
    ASSERT_TRUE(res.converged);
    const Matrix p = hamiltonian_are(a, b, q, r);
    EXPECT_LE((res.P - p).norm(), 1e-7 * (1.0 + p.norm()));
    EXPECT_TRUE(is_hurwitz(a - b * res.K));
  }
}

TEST(CoupledAre, TwoPlayerScalarClosedForm) {
  // a = 0, b_i = q_i = r_ii = 1, r_ij = 0: by symmetry k = p solves
  // -4 p k + 1 + k^2 = 0, so k = p = 1/sqrt(3).
  const GameSystem sys(scalar_matrix(0.0), {scalar_matrix(1.0), scalar_matrix(1.0)});
  const CostParameters costs = CostParameters::with_identity_r(
      sys, {scalar_matrix(1.0), scalar_matrix(1.0)});
  const StrategyProfile init(sys, {scalar_matrix(2.0), scalar_matrix(2.0)});
  const CoupledAreResult res = solve_coupled_are(sys, costs, init);
  ASSERT_TRUE(res.converged);
  const double k = 1.0 / std::sqrt(3.0);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(res.K[static_cast<std::size_t>(i)](0, 0), k, 1e-9);
    EXPECT_NEAR(res.P[static_cast<std::size_t>(i)](0, 0), k, 1e-9);
  }
  const StrategyProfile nash(sys, res.K);
  const NashVerification v = verify_nash(sys, nash, costs);
  EXPECT_TRUE(v.is_nash);
  Vector x0(1);
  x0 << 2.0;
  EXPECT_NEAR(equilibrium_cost(v.cert.P[0], x0), 4.0 * k, 1e-9);
  EXPECT_NEAR(v.cert.hurwitz_margin, 2.0 * k, 1e-9);  // gains agree to gain_tol
}

TEST(VerifyNash, DegenerateSymmetricEquilibrium) {
  // a = 1: k_1 = k_2 = 1 with P_i = 1 is an equilibrium where the coupled
  // equations have a double root (checked directly, not by iteration).
  const GameSystem sys(scalar_matrix(1.0), {scalar_matrix(1.0), scalar_matrix(1.0)});
  const CostParameters costs = CostParameters::with_identity_r(
      sys, {scalar_matrix(1.0), scalar_matrix(1.0)});
  const StrategyProfile nash(sys, {scalar_matrix(1.0), scalar_matrix(1.0)});
  const NashVerification v = verify_nash(sys, nash, costs);
  EXPECT_TRUE(v.is_nash);
  EXPECT_NEAR(v.cert.P[1](0, 0), 1.0, 1e-12);
}

TEST(CoupledAre, RandomGamesHaveVanishingResiduals) {
  Rng rng(63);
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 20; ++attempt) {
    const std::optional<RandomGame> g =
        testing::random_game(rng, testing::RandomGameOptions{4, 3, 2, true});
    if (!g) continue;
    ++checked;
    for (double r : coupled_are_residuals(g->sys, g->costs, g->nash.K(), g->P)) {
      EXPECT_LE(r, 1e-8);
    }
    EXPECT_TRUE(verify_nash(g->sys, g->nash, g->costs).is_nash);
    // Each player's gain is its own LQR optimum against the others.
    for (int i = 0; i < g->sys.num_players(); ++i) {
      Matrix a_tilde = g->sys.A();
      for (int j = 0; j < g->sys.num_players(); ++j) {
        if (j != i) a_tilde -= g->sys.B(j) * g->nash.K(j);
      }
      const Matrix q_tilde = effective_state_weight(g->costs, g->nash.K(), i);
      const Matrix p = hamiltonian_are(a_tilde, g->sys.B(i), q_tilde, g->costs.R(i, i));
      EXPECT_LE((p - g->P[static_cast<std::size_t>(i)]).norm(), 1e-6 * (1.0 + p.norm()));
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(VerifyNash, RejectsPerturbedProfilesAndCosts) {
  const GameSystem sys(scalar_matrix(1.0), {scalar_matrix(1.0), scalar_matrix(1.0)});
  const CostParameters costs = CostParameters::with_identity_r(
      sys, {scalar_matrix(1.0), scalar_matrix(1.0)});
  const StrategyProfile off(sys, {scalar_matrix(1.2), scalar_matrix(1.0)});
  const NashVerification v = verify_nash(sys, off, costs);
  EXPECT_FALSE(v.is_nash);
  EXPECT_FALSE(v.player_ok[0]);
  const StrategyProfile nash(sys, {scalar_matrix(1.0), scalar_matrix(1.0)});
  const CostParameters other = CostParameters::with_identity_r(
      sys, {scalar_matrix(0.9), scalar_matrix(1.0)});
  EXPECT_FALSE(verify_nash(sys, nash, other).is_nash);
  // Positive scaling preserves the equilibrium.
  EXPECT_TRUE(verify_nash(sys, nash, costs.scaled(7.5)).is_nash);
}

TEST(EffectiveStateWeight, AddsCrossPenalties) {
  const GameSystem sys(scalar_matrix(-1.0), {scalar_matrix(1.0), scalar_matrix(1.0)});
  const CostParameters costs(sys, {scalar_matrix(1.0), scalar_matrix(2.0)},
                             {{scalar_matrix(1.0), scalar_matrix(3.0)},
                              {scalar_matrix(0.5), scalar_matrix(1.0)}});
  const std::vector<Matrix> k = {scalar_matrix(2.0), scalar_matrix(0.5)};
  EXPECT_NEAR(effective_state_weight(costs, k, 0)(0, 0), 1.0 + 0.5 * 3.0 * 0.5, 1e-15);
  EXPECT_NEAR(effective_state_weight(costs, k, 1)(0, 0), 2.0 + 2.0 * 0.5 * 2.0, 1e-15);
}

}  // namespace
}  // namespace lqnash
