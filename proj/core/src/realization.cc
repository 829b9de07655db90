#include "lqnash/realization.h"

#include <string>

namespace lqnash {

namespace {

// Round-off cleaning for constructed factors: far below kPolyTrim so that no
// genuine coefficient is disturbed.
constexpr double kFactorClean = 1e-13;

// PBH rank tolerance for the stabilizability test. Looser than tol::kRank
// because repeated eigenvalues come back from QR perturbed at sqrt(eps).
constexpr double kPbhTolerance = 1e-8;

std::string player_tag(int i) { return "player " + std::to_string(i); }

}  // namespace

GameSystem::GameSystem(Matrix a, std::vector<Matrix> b)
    : a_(std::move(a)), b_(std::move(b)) {
  require_square(a_, "GameSystem(A)");
  require_finite(a_, "GameSystem(A)");
  if (a_.rows() == 0) throw DimensionError("GameSystem: A is empty");
  if (a_.rows() > kMaxDenseDimension) {
    throw DimensionError("GameSystem: n exceeds " +
                         std::to_string(kMaxDenseDimension));
  }
  if (b_.empty()) throw DimensionError("GameSystem: no players");
  Index total = 0;
  for (std::size_t i = 0; i < b_.size(); ++i) {
    const Matrix& bi = b_[i];
    const std::string tag = "GameSystem(B of " + player_tag(static_cast<int>(i)) + ")";
    require_finite(bi, tag);
    if (bi.rows() != a_.rows() || bi.cols() == 0) {
      throw DimensionError(tag + ": expected " + std::to_string(a_.rows()) +
                           " x m with m >= 1, got " + std::to_string(bi.rows()) +
                           "x" + std::to_string(bi.cols()));
    }
    if (numeric_rank(bi) != bi.cols()) {
      throw PreconditionError(tag + ": B does not have full column rank");
    }
    total += bi.cols();
  }

  Matrix b_all(a_.rows(), total);
  Index col = 0;
  for (const Matrix& bi : b_) {
    b_all.middleCols(col, bi.cols()) = bi;
    col += bi.cols();
  }
  const Index n = a_.rows();
  for (const Complex& lambda : eig(a_)) {
    if (lambda.real() < -tol::kHurwitz) continue;
    ComplexMatrix pbh(n, n + total);
    pbh.leftCols(n) = lambda * ComplexMatrix::Identity(n, n) - a_.cast<Complex>();
    pbh.rightCols(total) = b_all.cast<Complex>();
    if (numeric_rank(pbh, kPbhTolerance) < n) {
      throw PreconditionError(
          "GameSystem: (A, B) is not stabilizable (uncontrollable mode at " +
          std::to_string(lambda.real()) + (lambda.imag() >= 0 ? "+" : "") +
          std::to_string(lambda.imag()) + "i)");
    }
  }
}

Matrix closed_loop(const GameSystem& sys, std::span<const Matrix> gains) {
  if (static_cast<int>(gains.size()) != sys.num_players()) {
    throw DimensionError("closed_loop: expected " +
                         std::to_string(sys.num_players()) + " gains");
  }
  Matrix acl = sys.A();
  for (int i = 0; i < sys.num_players(); ++i) {
    const Matrix& k = gains[static_cast<std::size_t>(i)];
    if (k.rows() != sys.m(i) || k.cols() != sys.n()) {
      throw DimensionError("closed_loop: K of " + player_tag(i) + " must be " +
                           std::to_string(sys.m(i)) + "x" +
                           std::to_string(sys.n()));
    }
    acl -= sys.B(i) * k;
  }
  return acl;
}

bool is_stabilizing(const GameSystem& sys, std::span<const Matrix> gains,
                    double margin) {
  return is_hurwitz(closed_loop(sys, gains), margin);
}

StrategyProfile::StrategyProfile(const GameSystem& sys, std::vector<Matrix> gains)
    : k_(std::move(gains)) {
  for (std::size_t i = 0; i < k_.size(); ++i) {
    require_finite(k_[i], "StrategyProfile(K of " +
                              player_tag(static_cast<int>(i)) + ")");
  }
  const Matrix acl = closed_loop(sys, k_);
  if (!is_hurwitz(acl)) {
    throw PreconditionError(
        "StrategyProfile: closed loop is not Hurwitz (spectral abscissa " +
        std::to_string(spectral_abscissa(acl)) + ")");
  }
}

ReducedSystem reduced_system(const GameSystem& sys, const StrategyProfile& prof,
                             int i) {
  if (i < 0 || i >= sys.num_players() ||
      prof.num_players() != sys.num_players()) {
    throw DimensionError("reduced_system: invalid player index " +
                         std::to_string(i));
  }
  ReducedSystem out;
  out.a_cl = closed_loop(sys, prof.K());
  out.a_tilde = out.a_cl + sys.B(i) * prof.K(i);
  return out;
}

namespace {

// Controller-form factorization of a controllable pair.
CoprimeFactorization controllable_factorization(const Matrix& a, const Matrix& b,
                                                const std::vector<int>& sigma) {
  const Index n = a.rows();
  const Index m = b.cols();
  std::vector<Index> offset(static_cast<std::size_t>(m) + 1, 0);
  for (Index k = 0; k < m; ++k) {
    offset[static_cast<std::size_t>(k) + 1] =
        offset[static_cast<std::size_t>(k)] + sigma[static_cast<std::size_t>(k)];
  }

  // Controllability columns grouped by input.
  Matrix ctrb(n, n);
  for (Index k = 0; k < m; ++k) {
    Vector col = b.col(k);
    for (int j = 0; j < sigma[static_cast<std::size_t>(k)]; ++j) {
      ctrb.col(offset[static_cast<std::size_t>(k)] + j) = col;
      col = a * col;
    }
  }
  Eigen::FullPivLU<Matrix> lu(ctrb);
  if (!lu.isInvertible()) {
    throw NumericalError("right_coprime_factorization: singular controllability basis");
  }
  const Matrix ctrb_inv = lu.inverse();

  Matrix p(n, n);
  Matrix bm(m, m);
  Matrix am_rows(m, n);  // q_k A^{sigma_k}, mapped through P^{-1} below
  for (Index k = 0; k < m; ++k) {
    const int sk = sigma[static_cast<std::size_t>(k)];
    Eigen::RowVectorXd q =
        ctrb_inv.row(offset[static_cast<std::size_t>(k)] + sk - 1);
    for (int j = 0; j < sk; ++j) {
      p.row(offset[static_cast<std::size_t>(k)] + j) = q;
      if (j + 1 < sk) q = q * a;
    }
    bm.row(k) = q * b;
    am_rows.row(k) = q * a;
  }
  Eigen::FullPivLU<Matrix> plu(p);
  Eigen::FullPivLU<Matrix> blu(bm);
  if (!plu.isInvertible() || !blu.isInvertible()) {
    throw NumericalError("right_coprime_factorization: singular controller form");
  }
  const Matrix p_inv = plu.inverse();
  const Matrix am = am_rows * p_inv;
  const Matrix bm_inv = blu.inverse();

  // Psi(s): block power basis; Lambda(s) = diag(s^{sigma_k}).
  PolyMatrix psi(n, m);
  PolyMatrix lambda(m, m);
  for (Index k = 0; k < m; ++k) {
    const int sk = sigma[static_cast<std::size_t>(k)];
    for (int j = 0; j < sk; ++j) {
      psi(offset[static_cast<std::size_t>(k)] + j, k) = Poly::monomial(1.0, j);
    }
    lambda(k, k) = Poly::monomial(1.0, sk);
  }

  CoprimeFactorization fac;
  fac.sigma = sigma;
  fac.H = p;
  fac.S = p_inv * psi;
  fac.D = bm_inv * (lambda - am * psi);
  fac.S.trim(kFactorClean);
  fac.D.trim(kFactorClean);
  return fac;
}

}  // namespace

CoprimeFactorization right_coprime_factorization(const Matrix& a_tilde,
                                                 const Matrix& b,
                                                 double rank_tol) {
  require_square(a_tilde, "right_coprime_factorization(A)");
  require_finite(a_tilde, "right_coprime_factorization(A)");
  require_finite(b, "right_coprime_factorization(B)");
  const Index n = a_tilde.rows();
  const Index m = b.cols();
  if (b.rows() != n || m == 0) {
    throw DimensionError("right_coprime_factorization: B must be n x m, m >= 1");
  }
  if (numeric_rank(b, rank_tol) != m) {
    throw PreconditionError(
        "right_coprime_factorization: B does not have full column rank");
  }

  // Crate-order scan: b_1..b_m, A b_1..A b_m, ... A chain stops at its first
  // dependent column.
  std::vector<int> sigma(static_cast<std::size_t>(m), 0);
  std::vector<bool> alive(static_cast<std::size_t>(m), true);
  std::vector<Vector> frontier;
  for (Index k = 0; k < m; ++k) frontier.push_back(b.col(k));
  Matrix kept(n, 0);
  for (Index power = 0; power < n && kept.cols() < n; ++power) {
    for (Index k = 0; k < m; ++k) {
      if (!alive[static_cast<std::size_t>(k)]) continue;
      Matrix trial(n, kept.cols() + 1);
      trial << kept, frontier[static_cast<std::size_t>(k)];
      if (numeric_rank(trial, rank_tol) == trial.cols()) {
        kept = std::move(trial);
        ++sigma[static_cast<std::size_t>(k)];
        frontier[static_cast<std::size_t>(k)] =
            a_tilde * frontier[static_cast<std::size_t>(k)];
      } else {
        alive[static_cast<std::size_t>(k)] = false;
      }
    }
  }
  const Index r = kept.cols();
  if (r == n) return controllable_factorization(a_tilde, b, sigma);

  // Restrict to the controllable subspace range(kept), which is A-invariant
  // and contains range(B).
  Eigen::JacobiSVD<Matrix> svd(kept, Eigen::ComputeThinU);
  const Matrix v = svd.matrixU();
  const Matrix a_r = v.transpose() * a_tilde * v;
  const Matrix b_r = v.transpose() * b;
  CoprimeFactorization fac = controllable_factorization(a_r, b_r, sigma);
  fac.S = v * fac.S;
  fac.S.trim(kFactorClean);
  fac.H = fac.H * v.transpose();
  fac.controllable = false;
  return fac;
}

CoprimeFactorization attach_feedback(CoprimeFactorization fac, const Matrix& k) {
  if (k.rows() != fac.m() || k.cols() != fac.n()) {
    throw DimensionError("attach_feedback: K must be " + std::to_string(fac.m()) +
                         "x" + std::to_string(fac.n()));
  }
  require_finite(k, "attach_feedback(K)");
  fac.D_tilde = fac.D + k * fac.S;
  fac.D_tilde.trim(kFactorClean);
  return fac;
}

double factorization_residual(const CoprimeFactorization& fac,
                              const Matrix& a_tilde, const Matrix& b) {
  const PolyMatrix lhs = PolyMatrix::pencil(a_tilde) * fac.S;
  const PolyMatrix rhs = b * fac.D;
  return coeff_distance(lhs, rhs);
}

bool is_right_coprime(const CoprimeFactorization& fac, const Matrix& a_tilde,
                      double rank_tol) {
  const Index n = fac.n();
  const Index m = fac.m();
  for (const Complex& lambda : eig(a_tilde)) {
    ComplexMatrix stacked(n + m, m);
    stacked.topRows(n) = fac.S.eval(lambda);
    stacked.bottomRows(m) = fac.D.eval(lambda);
    if (numeric_rank(stacked, rank_tol) < m) return false;
  }
  return true;
}

}  // namespace lqnash
