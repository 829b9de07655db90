#pragma once

// Time-domain feasibility oracle for the set of cost parameters that make a
// given profile K a Nash equilibrium:
//   Q_i + P_i A_cl + A_cl' P_i + sum_j K_j' R_ij K_j = 0,
//   R_ii K_i = B_i' P_i,
//   Q_i >= 0, R_ii > 0, R_ij >= 0, P_i >= 0.
// The set is a convex cone. With R_ij = 0 (j != i) every player decouples
// and the equalities are a homogeneous linear system in
// (vec Q_i, vec R_ii, vec P_i).

#include <optional>
#include <string>
#include <vector>

#include "lqnash/cone_search.h"
#include "lqnash/forward.h"
#include "lqnash/realization.h"

namespace lqnash {

/// A candidate (Q, R, P) tuple. Entries are raw matrices so that points
/// outside the set can be represented and tested.
struct ThetaPoint {
  std::vector<Matrix> Q;
  std::vector<std::vector<Matrix>> R;  // R[i][j] is R_ij
  std::vector<Matrix> P;

  ThetaPoint scaled(double alpha) const;
  /// (1 - lambda) * a + lambda * b.
  static ThetaPoint combine(const ThetaPoint& a, const ThetaPoint& b,
                            double lambda);
};

struct PlayerMembership {
  double are_residual = 0.0;           // relative
  double stationarity_residual = 0.0;  // relative
  double q_min_eigenvalue = 0.0;
  double r_ii_min_eigenvalue = 0.0;
  double r_ij_min_eigenvalue = 0.0;  // min over j != i (0 when N == 1)
  double p_min_eigenvalue = 0.0;
  bool ok = false;
};

struct MembershipReport {
  bool member = false;
  std::vector<PlayerMembership> players;
};

/// Evaluates every constraint. Residuals are relative to the magnitude of
/// the terms involved, so membership is invariant under positive scaling.
/// Eigenvalue constraints use tol relative to max(1, ||X||) / ||X|| scale.
MembershipReport check_membership(const ThetaPoint& pt, const GameSystem& sys,
                                  const StrategyProfile& prof, double tol = 1e-8);

/// The (n^2 + n m_i) x (n^2 + m_i^2 + n^2) matrix acting on
/// [vec Q_i; vec R_ii; vec P_i] (column-stacking vec):
///   [ I   K'(x)K'     A_cl'(+)A_cl' ]
///   [ 0   K'(x)I_m   -I_n(x)B'      ]
Matrix build_vectorized_system(const GameSystem& sys, const StrategyProfile& prof,
                               int i);

/// The same system restricted to symmetric unknowns [svec Q; svec R; svec P].
Matrix build_symmetric_system(const GameSystem& sys, const StrategyProfile& prof,
                              int i);

enum class FeasibilityStatus {
  kFeasible,
  /// The linear identity itself rules out a cone point: its normalized
  /// solution set is empty or a single point outside the cone.
  kInfeasibleCertifiedByIdentity,
  /// A point of the dual system (orthogonal to the identity's solution
  /// space, PSD blockwise) proves that no cone point exists.
  kInfeasibleCertifiedByDual,
  /// Iteration cap without a verdict.
  kIndeterminate,
};

std::string to_string(FeasibilityStatus status);

/// True for both certified-infeasible statuses.
bool is_infeasible(FeasibilityStatus status);

enum class FeasibilityMode {
  /// R_ii free with trace(R_ii) = m_i.
  kGeneral,
  /// R_ii = I.
  kQOnly,
};

struct FeasibilityOptions {
  FeasibilityMode mode = FeasibilityMode::kGeneral;
  double r_floor = 1e-6;
  ConeSearchOptions cone;
  /// Membership tolerance for the returned point.
  double tol = 1e-8;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::kIndeterminate;
  std::vector<FeasibilityStatus> player_status;
  /// Nullspace dimension of each player's symmetric system.
  std::vector<Index> kernel_dims;
  std::optional<ThetaPoint> point;
};

/// Profiles are stabilizing by construction, so P_i is the Lyapunov solution
/// for (Q_i, R_ii) and P_i >= 0 is implied; the search runs over (Q_i, R_ii)
/// and a failed search is followed by a search for a dual certificate.
FeasibilityResult solve_feasibility_projection(const GameSystem& sys,
                                               const StrategyProfile& prof,
                                               const FeasibilityOptions& options = {});

struct NearestResult {
  FeasibilityStatus status = FeasibilityStatus::kIndeterminate;
  std::optional<CostParameters> costs;
  /// sqrt(sum_i ||Q_i - Q_i0||_F^2 + sum_ij ||R_ij - R_ij0||_F^2)
  double distance = 0.0;
  int iterations = 0;
};

/// Euclidean (squared-Frobenius) projection of costs0 onto the cost
/// parameters that make prof a Nash equilibrium. P_i is eliminated through
/// the Lyapunov equation, which keeps it PSD whenever the costs are.
NearestResult nearest_params(const CostParameters& costs0, const GameSystem& sys,
                             const StrategyProfile& prof,
                             const FeasibilityOptions& options = {});

/// Absorbs cross penalties into the state weight:
/// Q_i <- Q_i + sum_{j != i} K_j' R_ij K_j, R_ij <- 0.
CostParameters fold_cross_penalties(const CostParameters& costs,
                                    const GameSystem& sys,
                                    const StrategyProfile& prof);

struct UnfoldResult {
  CostParameters costs;
  double lambda = 1.0;
};

/// Inverse of the fold up to scale: with C_i = sum_{j != i} K_j' Rc_ij K_j,
/// lambda = max(1, (1 + eps) max_i lambda_max(C_i) / lambda_min(Q_i)),
/// Q_i <- lambda Q_i - C_i, R_ii <- lambda R_ii, R_ij <- Rc_ij.
/// Requires zero off-diagonal R and Q_i > 0.
UnfoldResult unfold_cross_penalties(const CostParameters& costs,
                                    const GameSystem& sys,
                                    const StrategyProfile& prof,
                                    const std::vector<std::vector<Matrix>>& r_choice,
                                    double eps = 0.0);

}  // namespace lqnash
