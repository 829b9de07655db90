#include "lqnash/inverse.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lqnash/forward.h"
#include "test_util.h"

namespace lqnash {
namespace {

using testing::RandomGame;
using testing::Rng;

const Poly kS = Poly::monomial(1.0, 1);

struct Scalar {
  GameSystem sys;
  StrategyProfile prof;
};

// x' = a x + u, u = -k x.
Scalar scalar(double a, double k) {
  GameSystem sys(Matrix::Constant(1, 1, a), {Matrix::Constant(1, 1, 1.0)});
  StrategyProfile prof(sys, {Matrix::Constant(1, 1, k)});
  return {sys, prof};
}

PolyMatrix scalar_poly(const Poly& p) {
  PolyMatrix m(1, 1);
  m(0, 0) = p;
  return m;
}

std::vector<RandomGame> nash_games(std::uint64_t seed, int count,
                                   const testing::RandomGameOptions& opt = {}) {
  Rng rng(seed);
  std::vector<RandomGame> out;
  for (int attempt = 0; attempt < 100 * count && static_cast<int>(out.size()) < count;
       ++attempt) {
    if (auto g = testing::random_game(rng, opt)) out.push_back(std::move(*g));
  }
  return out;
}

TEST(Phi, ScalarReturnDifferenceIsConstant) {
  // Phi(jw) = |jw - a + k|^2 - |jw - a|^2 = k^2 - 2 a k.
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(-1.0, 1.0);
    const double k = std::max(a, 0.0) + rng.uniform(0.1, 3.0);
    const Scalar s = scalar(a, k);
    const CoprimeFactorization fac = player_factorization(s.sys, s.prof, 0);
    const PolyMatrix phi = build_phi(fac);
    // Normalize by |D leading|^2 so the comparison does not depend on the
    // factorization's scaling of D.
    const double lead = fac.D(0, 0).leading();
    EXPECT_LE(phi.degree(), 0);
    EXPECT_NEAR(phi(0, 0).coeff(0) / (lead * lead), k * k - 2.0 * a * k, 1e-10);
  }
}

TEST(Phi, ParaHermitianRequirement) {
  EXPECT_THROW(require_para_hermitian(scalar_poly(kS)), PreconditionError);
  EXPECT_NO_THROW(require_para_hermitian(scalar_poly(kS * kS)));
}

TEST(CircleCriterion, DetectsNegativeBand) {
  // Phi(s) = s^4 + s^2 + 0.1: Phi(jw) = w^4 - w^2 + 0.1 < 0 for
  // w^2 in ((1 - sqrt(0.6)) / 2, (1 + sqrt(0.6)) / 2).
  const PolyMatrix phi = scalar_poly(Poly{0.1, 0.0, 1.0, 0.0, 1.0});
  for (bool exact : {true, false}) {
    CircleCriterionOptions opt;
    opt.exact_pass = exact;
    const CircleCriterionResult r = circle_criterion(phi, opt);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.witness.has_value());
    const double w2 = *r.witness * *r.witness;
    EXPECT_GT(w2, (1.0 - std::sqrt(0.6)) / 2.0);
    EXPECT_LT(w2, (1.0 + std::sqrt(0.6)) / 2.0);
    EXPECT_LT(min_eigenvalue_at(phi, *r.witness), 0.0);
    EXPECT_NEAR(r.min_eigenvalue, -0.15, exact ? 1e-9 : 1e-3);
  }
}

TEST(CircleCriterion, AcceptsNonnegativeSpectrum) {
  // Phi(jw) = (w^2 - 1)^2 touches zero at w = 1 without crossing.
  const PolyMatrix phi = scalar_poly(Poly{1.0, 0.0, 2.0, 0.0, 1.0});
  const CircleCriterionResult r = circle_criterion(phi);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.method, "exact");
  EXPECT_NEAR(min_eigenvalue_at(phi, 1.0), 0.0, 1e-12);
}

TEST(CircleCriterion, MatrixCaseUsesEigenvalues) {
  // diag(1, -1 - s^2) -> Phi(jw) = diag(1, w^2 - 1): negative for |w| < 1.
  PolyMatrix phi(2, 2);
  phi(0, 0) = Poly{1.0};
  phi(1, 1) = Poly{-1.0, 0.0, -1.0};
  const CircleCriterionResult r = circle_criterion(phi);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_LT(std::abs(*r.witness), 1.0);
}

TEST(RankCondition, FailsAtUnstableZeroOfThreeStateGame) {
  Matrix a(3, 3);
  a << 1, 0, 1, 0, 0, 1, 0, 1, 0;
  Matrix b1(3, 2);
  b1 << 1, 0, 0, 1, 0, 0;
  Matrix b2(3, 1);
  b2 << 1, 0, 0;
  const double r2 = std::sqrt(2.0);
  Matrix k1(2, 3);
  k1 << 1, 0, 1, 0, 1 + r2, 1 + r2;
  Matrix k2(1, 3);
  k2 << 1, 0, 0;
  const GameSystem sys(a, {b1, b2});
  const StrategyProfile prof(sys, {k1, k2});
  const CoprimeFactorization fac = player_factorization(sys, prof, 0);
  const PhiAnalysis an = analyze_phi(fac);
  EXPECT_TRUE(an.circle.ok);
  EXPECT_EQ(an.p, 1);
  const RankCertificate rank = check_rank_condition(fac, an);
  EXPECT_FALSE(rank.satisfied);
  ASSERT_FALSE(rank.violations.empty());
  const RankViolation& v = rank.violations.front();
  EXPECT_NEAR(v.s0.real(), 1.0, 1e-7);
  EXPECT_NEAR(v.s0.imag(), 0.0, 1e-7);
  EXPECT_TRUE(v.real_v_available);
  // Independent check: D(s0) L(s0) v vanishes and v_1 = 0.
  const ComplexVector dlv = (fac.D * an.L).eval(v.s0) * v.v;
  EXPECT_LE(dlv.norm(), 1e-8);
  EXPECT_LE(std::abs(v.v(0)), 1e-12);

  const InducibilityAnalysis full = is_nash_inducible(sys, prof);
  EXPECT_FALSE(full.inducible);
  EXPECT_FALSE(full.players[0].inducible);
}

TEST(Kalman, ScalarQOnlyClosedForm) {
  const Scalar s = scalar(1.0, 3.0);
  const CoprimeFactorization fac = player_factorization(s.sys, s.prof, 0);
  const KalmanSolution k = solve_kalman_Q(fac, build_phi(fac));
  ASSERT_EQ(k.status, KalmanStatus::kFeasible);
  EXPECT_NEAR(k.Q(0, 0), 3.0, 1e-9);
  EXPECT_TRUE(k.psd_ok);
  // N~ N reproduces Phi.
  EXPECT_LE(coeff_distance(k.N_factor.paraconjugate() * k.N_factor, build_phi(fac)),
            1e-9);
}

TEST(Kalman, ScalarNegativeWeightIsInfeasible) {
  // k = 1.5, a = 1: Q / R = k^2 - 2k = -0.75 for every scaling.
  const Scalar s = scalar(1.0, 1.5);
  const CoprimeFactorization fac = player_factorization(s.sys, s.prof, 0);
  EXPECT_EQ(solve_kalman_Q(fac, build_phi(fac)).status, KalmanStatus::kInfeasible);
  EXPECT_EQ(solve_kalman_general(fac).status, KalmanStatus::kInfeasible);
  EXPECT_FALSE(is_nash_inducible(s.sys, s.prof).inducible);
}

TEST(Kalman, GeneratingCostsSatisfyTheIdentity) {
  // The time-domain costs of a Nash game (R_ii = I, R_ij = 0) solve the
  // frequency-domain Kalman equation for every player.
  for (const RandomGame& g : nash_games(52, 15)) {
    for (int i = 0; i < g.sys.num_players(); ++i) {
      const CoprimeFactorization fac = player_factorization(g.sys, g.nash, i);
      const double scale = build_phi(fac).coeff_norm();
      EXPECT_LE(kalman_residual(fac, g.costs.Q(i), g.costs.R(i, i)), 1e-8 * scale);
    }
  }
}

TEST(Kalman, RecoveredCostsPassTimeDomainVerification) {
  for (const KalmanMode mode : {KalmanMode::kQOnly, KalmanMode::kGeneral}) {
    for (const RandomGame& g : nash_games(53, 15)) {
      InverseOptions opt;
      opt.mode = mode;
      const InducibilityAnalysis an = is_nash_inducible(g.sys, g.nash, opt);
      EXPECT_TRUE(an.inducible);
      std::vector<Matrix> q;
      std::vector<std::vector<Matrix>> r;
      for (int i = 0; i < g.sys.num_players(); ++i) {
        const PlayerAnalysis& pa = an.players[static_cast<std::size_t>(i)];
        ASSERT_TRUE(pa.kalman.has_value());
        ASSERT_EQ(pa.kalman->status, KalmanStatus::kFeasible)
            << "mode " << static_cast<int>(mode) << " player " << i;
        q.push_back(pa.kalman->Q);
        std::vector<Matrix> row;
        for (int j = 0; j < g.sys.num_players(); ++j) {
          row.push_back(j == i ? pa.kalman->R : Matrix::Zero(g.sys.m(j), g.sys.m(j)).eval());
        }
        r.push_back(std::move(row));
      }
      const CostParameters costs(g.sys, q, r);
      EXPECT_TRUE(verify_nash(g.sys, g.nash, costs, 1e-7).is_nash);
    }
  }
}

TEST(Inducibility, PlayerRestriction) {
  const std::vector<RandomGame> games =
      nash_games(54, 5, testing::RandomGameOptions{3, 2, 1, false});
  for (const RandomGame& g : games) {
    if (g.sys.num_players() < 2) continue;
    InverseOptions opt;
    opt.player = 1;
    const InducibilityAnalysis an = is_nash_inducible(g.sys, g.nash, opt);
    ASSERT_EQ(an.players.size(), 1u);
    EXPECT_EQ(an.players[0].player, 1);
    return;
  }
  FAIL() << "no two-player game generated";
}

}  // namespace
}  // namespace lqnash
