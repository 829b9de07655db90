#pragma once

// Game data model and the bridge from state space to right-coprime
// polynomial matrix-fraction descriptions.
//
// For player i, with the other players' gains frozen, the player sees
//   x' = A_tilde x + B_i u_i,   A_tilde = A - sum_{j != i} B_j K_j,
// and (sI - A_tilde)^{-1} B_i = S(s) D(s)^{-1} with D column reduced. With
// its own gain attached, D_tilde = D + K_i S.

#include <span>
#include <vector>

#include "lqnash/numerics.h"
#include "lqnash/polymat.h"

namespace lqnash {

/// The plant x' = A x + sum_i B_i u_i.
class GameSystem {
 public:
  /// Validates: A square and finite; at least one player; every B_i finite,
  /// n x m_i with full column rank m_i; (A, [B_1 .. B_N]) stabilizable.
  GameSystem(Matrix a, std::vector<Matrix> b);

  const Matrix& A() const { return a_; }
  const Matrix& B(int i) const { return b_.at(static_cast<std::size_t>(i)); }
  const std::vector<Matrix>& B() const { return b_; }
  Index n() const { return a_.rows(); }
  Index m(int i) const { return B(i).cols(); }
  int num_players() const { return static_cast<int>(b_.size()); }

 private:
  Matrix a_;
  std::vector<Matrix> b_;
};

/// A - sum_i B_i K_i.
Matrix closed_loop(const GameSystem& sys, std::span<const Matrix> gains);

/// True iff max Re eig(A - sum_i B_i K_i) < -margin.
bool is_stabilizing(const GameSystem& sys, std::span<const Matrix> gains,
                    double margin = tol::kHurwitz);

/// Target feedback gains u_i = -K_i x, validated against a GameSystem.
class StrategyProfile {
 public:
  /// Validates sizes (K_i is m_i x n, finite) and that the closed loop is
  /// Hurwitz.
  StrategyProfile(const GameSystem& sys, std::vector<Matrix> gains);

  const Matrix& K(int i) const { return k_.at(static_cast<std::size_t>(i)); }
  const std::vector<Matrix>& K() const { return k_; }
  int num_players() const { return static_cast<int>(k_.size()); }

 private:
  std::vector<Matrix> k_;
};

struct ReducedSystem {
  Matrix a_tilde;  // A - sum_{j != i} B_j K_j
  Matrix a_cl;     // A - sum_j B_j K_j
};
ReducedSystem reduced_system(const GameSystem& sys, const StrategyProfile& prof,
                             int i);

struct CoprimeFactorization {
  PolyMatrix S;        // n x m
  PolyMatrix D;        // m x m, column reduced
  PolyMatrix D_tilde;  // m x m, empty until attach_feedback
  /// Column degrees of D = controllability indices of the pair.
  std::vector<int> sigma;
  /// H * S(s) stacks the power-basis blocks [1, s, .., s^{sigma_k - 1}]'.
  /// Square (n x n) for controllable pairs; sum(sigma) x n otherwise.
  Matrix H;
  /// False when the pair has an uncontrollable subspace; S, D then describe
  /// only the controllable part.
  bool controllable = true;

  Index n() const { return S.rows(); }
  Index m() const { return D.rows(); }
  bool has_feedback() const { return D_tilde.rows() == D.rows() && D.rows() > 0; }
};

/// Controller-form construction. Columns b_1..b_m, A b_1.., A^2 b_1.. are
/// scanned left to right and the linearly independent ones kept (relative
/// singular-value tolerance rank_tol), which fixes sigma.
CoprimeFactorization right_coprime_factorization(const Matrix& a_tilde,
                                                 const Matrix& b,
                                                 double rank_tol = tol::kRank);

/// Sets D_tilde = D + K S.
CoprimeFactorization attach_feedback(CoprimeFactorization fac, const Matrix& k);

/// ||(sI - A) S(s) - B D(s)||_coeff.
double factorization_residual(const CoprimeFactorization& fac,
                              const Matrix& a_tilde, const Matrix& b);

/// [S(s); D(s)] has full column rank at every eigenvalue of a_tilde.
bool is_right_coprime(const CoprimeFactorization& fac, const Matrix& a_tilde,
                      double rank_tol = 1e-8);

}  // namespace lqnash
