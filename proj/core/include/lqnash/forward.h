#pragma once

// Time-domain forward machinery: residual-based Nash verification, a coupled
// Riccati solver used to generate ground-truth equilibria, and equilibrium
// costs.

#include <vector>

#include "lqnash/realization.h"

namespace lqnash {

/// Player i minimizes the integral of x'Q_i x + sum_j u_j' R_ij u_j.
class CostParameters {
 public:
  /// Validates sizes against sys and Q_i >= 0, R_ii > 0, R_ij >= 0.
  CostParameters(const GameSystem& sys, std::vector<Matrix> q,
                 std::vector<std::vector<Matrix>> r);

  /// R_ii = I, R_ij = 0.
  static CostParameters with_identity_r(const GameSystem& sys,
                                        std::vector<Matrix> q);

  const Matrix& Q(int i) const { return q_.at(static_cast<std::size_t>(i)); }
  const Matrix& R(int i, int j) const {
    return r_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
  }
  const std::vector<Matrix>& Q() const { return q_; }
  const std::vector<std::vector<Matrix>>& R() const { return r_; }
  int num_players() const { return static_cast<int>(q_.size()); }

  /// Multiplies every Q_i and R_ij by alpha > 0.
  CostParameters scaled(double alpha) const;

 private:
  CostParameters() = default;
  std::vector<Matrix> q_;
  std::vector<std::vector<Matrix>> r_;
};

/// Q_i + sum_{j != i} K_j' R_ij K_j.
Matrix effective_state_weight(const CostParameters& costs,
                              std::span<const Matrix> gains, int i);

struct CertificateSet {
  std::vector<Matrix> P;
  /// ||P A_tilde + A_tilde' P - P B R^{-1} B' P + Q_tilde|| per player.
  std::vector<double> are_residuals;
  /// ||R_ii K_i - B_i' P_i|| per player.
  std::vector<double> stationarity_residuals;
  /// min eig(P_i) per player.
  std::vector<double> p_min_eigenvalues;
  /// -max Re eig(A_cl).
  double hurwitz_margin = 0.0;
};

struct NashVerification {
  bool is_nash = false;
  std::vector<bool> player_ok;
  CertificateSet cert;
};

/// Lyapunov solve of P_i A_cl + A_cl' P_i = -(Q_tilde_i + K_i' R_ii K_i),
/// then stationarity, P_i >= 0 and the reduced ARE residual, each compared
/// against tol * max(1, scale of the terms involved).
NashVerification verify_nash(const GameSystem& sys, const StrategyProfile& prof,
                             const CostParameters& costs, double tol = 1e-8);

struct CoupledAreOptions {
  int max_sweeps = 500;
  int max_newton_steps = 100;
  /// Sweep convergence: max gain change <= gain_tol * max(1, ||K||).
  double gain_tol = 1e-9;
  /// Final acceptance: coupled-ARE residuals <= residual_tol * scale.
  double residual_tol = 1e-8;
};

struct CoupledAreResult {
  std::vector<Matrix> K;
  std::vector<Matrix> P;
  bool converged = false;
  int sweeps = 0;
  std::vector<double> residuals;
};

/// Gauss-Seidel over players; each player's LQR subproblem (A_tilde_i, B_i,
/// Q_tilde_i, R_ii) is solved by Newton-Kleinman seeded with its current
/// gain. `init` must be stabilizing.
CoupledAreResult solve_coupled_are(const GameSystem& sys,
                                   const CostParameters& costs,
                                   const StrategyProfile& init,
                                   const CoupledAreOptions& options = {});

struct LqrResult {
  Matrix K;
  Matrix P;
  bool converged = false;
  int iterations = 0;
};

/// Single-player stabilizing ARE by Newton-Kleinman from a stabilizing k0.
LqrResult newton_kleinman(const Matrix& a, const Matrix& b, const Matrix& q,
                          const Matrix& r, const Matrix& k0,
                          int max_iterations = 100, double tol = 1e-12);

/// Residuals of the coupled AREs at (K, P): per player
/// ||P_i A_cl + A_cl' P_i + Q_i + sum_j K_j' R_ij K_j|| together with
/// ||R_ii K_i - B_i' P_i||, relative to the magnitude of the terms.
std::vector<double> coupled_are_residuals(const GameSystem& sys,
                                          const CostParameters& costs,
                                          std::span<const Matrix> gains,
                                          std::span<const Matrix> p);

/// x0' P x0.
double equilibrium_cost(const Matrix& p, const Vector& x0);

}  // namespace lqnash
