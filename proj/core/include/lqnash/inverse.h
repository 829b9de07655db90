#pragma once

// Frequency-domain test of Nash inducibility and recovery of cost matrices.
//
// For player i with factorization (S, D, D_tilde), the return-difference
// matrix
//   Phi(s) = D_tilde~(s) D_tilde(s) - D~(s) D(s),   X~(s) := X'(-s),
// does not depend on the cost. K is inducible (R_ii = I, R_ij = 0) iff
//   (a) Phi(jw) >= 0 for every real w, and
//   (b) with Phi L = [Phi_tilde 0] for a unimodular L, there is no s in the
//       closed right half-plane and real v != 0 with v_1..v_p = 0 and
//       D(s) L(s) v = 0.
// Cost matrices solve the Kalman equation
//   D_tilde~ R D_tilde - D~ R D = S~ Q S.

#include <optional>
#include <string>
#include <vector>

#include "lqnash/cone_search.h"
#include "lqnash/polymat.h"
#include "lqnash/realization.h"

namespace lqnash {

/// D_tilde~ D_tilde - D~ D. Requires fac.has_feedback().
PolyMatrix build_phi(const CoprimeFactorization& fac);

/// Throws PreconditionError unless Phi~ == Phi within tol (relative).
void require_para_hermitian(const PolyMatrix& phi, double tol = 1e-9);

struct CircleCriterionOptions {
  double w_min = 1e-3;
  double w_max = 1e3;
  /// Log-spaced points on each side of the origin (w = 0 is always added).
  int points = 400;
  /// Phi(jw) counts as indefinite when min eig < -tolerance * max(1, ||Phi(jw)||).
  double tolerance = 1e-9;
  /// Grid-free principal-minor pass for m <= 3.
  bool exact_pass = true;
};

struct CircleCriterionResult {
  bool ok = true;
  /// A frequency with min eig Phi(jw) < 0, when ok is false.
  std::optional<double> witness;
  /// Smallest min-eigenvalue seen on the grid and during refinement.
  double min_eigenvalue = 0.0;
  double min_eigenvalue_at = 0.0;
  /// "exact" when the principal-minor pass ran, otherwise "sampled".
  std::string method = "sampled";
  std::vector<double> grid;
};

/// Phi(jw) >= 0 for all real w.
CircleCriterionResult circle_criterion(const PolyMatrix& phi,
                                       const CircleCriterionOptions& options = {});

/// Hermitian min eigenvalue of Phi(jw).
double min_eigenvalue_at(const PolyMatrix& phi, double w);

struct PhiAnalysis {
  PolyMatrix phi;
  PolyMatrix L;          // unimodular, phi * L = [phi_tilde 0]
  PolyMatrix phi_tilde;  // m x p
  Index p = 0;           // polynomial rank of phi
  CircleCriterionResult circle;
};

PhiAnalysis analyze_phi(const CoprimeFactorization& fac,
                        const CircleCriterionOptions& options = {});

struct RankViolation {
  Complex s0;
  /// Full m-vector with v_1..v_p = 0 and D(s0) L(s0) v ~ 0.
  ComplexVector v;
  /// A real v exists at s0 (always true for real s0).
  bool real_v_available = false;
  /// A real representative of the null direction when available.
  Vector real_v;
  bool boundary = false;
  int multiplicity = 1;
};

struct RankCertificate {
  /// No violation with a real witness exists.
  bool satisfied = true;
  /// The trailing block T = (D L)(:, p+1:m) is rank deficient for every s.
  bool degenerate = false;
  /// Violations whose null direction is genuinely complex; they do not
  /// count against `satisfied`.
  bool complex_only_violations = false;
  std::vector<RankViolation> violations;
  /// T(s); empty when p == m.
  PolyMatrix T;
};

RankCertificate check_rank_condition(const CoprimeFactorization& fac,
                                     const PhiAnalysis& analysis,
                                     double delta = kRhpMargin);

enum class KalmanStatus {
  kFeasible,
  /// The linear identity has no symmetric solution at all.
  kUnsolvable,
  /// Solutions exist but none lies in the cone (certified: the normalized
  /// solution set is empty or a single point outside the cone, or a dual
  /// certificate was found).
  kInfeasible,
  /// Cone search hit its iteration cap.
  kIndeterminate,
};

std::string to_string(KalmanStatus status);

struct KalmanOptions {
  /// Claimed solutions must satisfy residual <= residual_tol * ||Phi||_coeff.
  double residual_tol = 1e-8;
  /// R >= r_floor * I in the general solve.
  double r_floor = 1e-6;
  ConeSearchOptions cone;
};

struct KalmanSolution {
  KalmanStatus status = KalmanStatus::kIndeterminate;
  Matrix Q;
  Matrix R;
  /// ||D_tilde~ R D_tilde - D~ R D - S~ Q S||_coeff.
  double residual = 0.0;
  /// Coefficient norm of the left-hand side, the scale for residual.
  double scale = 0.0;
  /// Dimension of the homogeneous solution space (before normalization in
  /// the general case).
  Index kernel_dim = 0;
  bool psd_ok = false;
  /// Q^{1/2} S when psd_ok; N~ N == Phi.
  PolyMatrix N_factor;
  /// Only the controllable part of the pair was described by S, D.
  bool restricted = false;
  int iterations = 0;
};

/// Symmetric Q with S~ Q S = phi, R = I.
KalmanSolution solve_kalman_Q(const CoprimeFactorization& fac,
                              const PolyMatrix& phi,
                              const KalmanOptions& options = {});

/// Symmetric (Q, R) with D_tilde~ R D_tilde - D~ R D = S~ Q S, normalized
/// to trace(R) = m, Q >= 0, R >= r_floor I.
KalmanSolution solve_kalman_general(const CoprimeFactorization& fac,
                                    const KalmanOptions& options = {});

/// ||D_tilde~ R D_tilde - D~ R D - S~ Q S||_coeff.
double kalman_residual(const CoprimeFactorization& fac, const Matrix& q,
                       const Matrix& r);

enum class KalmanMode { kQOnly, kGeneral };

struct InverseOptions {
  CircleCriterionOptions circle;
  KalmanOptions kalman;
  KalmanMode mode = KalmanMode::kGeneral;
  bool solve_kalman = true;
  /// Restrict the analysis to one player.
  std::optional<int> player;
};

struct PlayerAnalysis {
  int player = 0;
  CoprimeFactorization fac;
  PhiAnalysis phi;
  RankCertificate rank;
  /// circle.ok && rank.satisfied
  bool inducible = false;
  std::optional<KalmanSolution> kalman;
  std::vector<std::string> warnings;
};

struct InducibilityAnalysis {
  std::vector<PlayerAnalysis> players;
  /// Conjunction over the analysed players.
  bool inducible = true;
};

/// Runs factorization, Phi, circle criterion, rank condition and (optionally)
/// the Kalman solve for each player. Numerical failures are rethrown with
/// the player index in the message.
InducibilityAnalysis is_nash_inducible(const GameSystem& sys,
                                       const StrategyProfile& prof,
                                       const InverseOptions& options = {});

/// Factorization of player i with its own gain attached.
CoprimeFactorization player_factorization(const GameSystem& sys,
                                          const StrategyProfile& prof, int i);

}  // namespace lqnash
