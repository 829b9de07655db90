#include "lqnash/numerics.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace lqnash {

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw PreconditionError(std::string(what) + ": non-finite entry");
  }
}

void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

namespace {

Eigen::EigenSolver<Matrix> run_eigensolver(const Matrix& m,
                                           bool compute_vectors) {
  require_square(m, "eig");
  require_finite(m, "eig");
  Eigen::EigenSolver<Matrix> solver;
  solver.setMaxIterations(std::max<Index>(100 * m.rows(), 1));
  solver.compute(m, compute_vectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig: QR iteration did not converge");
  }
  return solver;
}

}  // namespace

ComplexVector eig(const Matrix& m) {
  if (m.rows() == 0) return ComplexVector(0);
  return run_eigensolver(m, false).eigenvalues();
}

EigenDecomposition eig_with_vectors(const Matrix& m) {
  if (m.rows() == 0) return {};
  auto solver = run_eigensolver(m, true);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_abscissa(const Matrix& m) {
  const ComplexVector lambda = eig(m);
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const Complex& l : lambda) abscissa = std::max(abscissa, l.real());
  return abscissa;
}

bool is_hurwitz(const Matrix& m, double margin) {
  return spectral_abscissa(m) < -margin;
}

Matrix symmetrize(const Matrix& m, double tol) {
  require_square(m, "symmetrize");
  require_finite(m, "symmetrize");
  const double asym = (m - m.transpose()).norm();
  if (asym > tol * std::max(1.0, m.norm())) {
    throw PreconditionError("matrix is not symmetric (asymmetry " +
                            std::to_string(asym) + ")");
  }
  return 0.5 * (m + m.transpose());
}

Vector symmetric_eigenvalues(const Matrix& m) {
  if (m.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed");
  }
  return solver.eigenvalues();
}

bool is_psd(const Matrix& m, double tol) {
  const Matrix sym = symmetrize(m, tol);
  if (sym.rows() == 0) return true;
  const double lmin = symmetric_eigenvalues(sym)(0);
  return lmin >= -tol * std::max(1.0, sym.norm());
}

bool is_pd(const Matrix& m, double tol) {
  const Matrix sym = symmetrize(m, tol);
  if (sym.rows() == 0) return true;
  const double lmin = symmetric_eigenvalues(sym)(0);
  return lmin > tol * std::max(1.0, sym.norm());
}

Matrix solve_lyapunov(const Matrix& acl, const Matrix& w) {
  require_square(acl, "solve_lyapunov(Acl)");
  const Index n = acl.rows();
  if (w.rows() != n || w.cols() != n) {
    throw DimensionError("solve_lyapunov: W must match Acl");
  }
  const Matrix w_sym = symmetrize(w);
  if (!is_hurwitz(acl)) {
    throw PreconditionError("solve_lyapunov: Acl is not Hurwitz");
  }
  const Matrix at = acl.transpose();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix op = kron(identity, at) + kron(at, identity);
  Eigen::FullPivLU<Matrix> lu(op);
  if (!lu.isInvertible()) {
    throw NumericalError("solve_lyapunov: singular vectorized system");
  }
  const Vector p = lu.solve(-vec(w_sym));
  const Matrix pm = unvec(p, n, n);
  return 0.5 * (pm + pm.transpose());
}

Matrix kron(const Matrix& m, const Matrix& n) {
  Matrix out(m.rows() * n.rows(), m.cols() * n.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out.block(i * n.rows(), j * n.cols(), n.rows(), n.cols()) = m(i, j) * n;
    }
  }
  return out;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw DimensionError("unvec: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron_sum(const Matrix& n, const Matrix& m) {
  require_square(n, "kron_sum(N)");
  require_square(m, "kron_sum(M)");
  return kron(n, Matrix::Identity(m.rows(), m.rows())) +
         kron(Matrix::Identity(n.rows(), n.rows()), m);
}

Matrix nullspace(const Matrix& m, double tol) {
  const Index cols = m.cols();
  if (cols == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  Index rank = 0;
  for (Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > tol * smax) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

namespace {

template <typename MatrixType>
Index rank_impl(const MatrixType& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixType> svd(m);
  const auto& sigma = svd.singularValues();
  if (sigma(0) == 0.0) return 0;
  Index rank = 0;
  for (Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > tol * sigma(0)) ++rank;
  }
  return rank;
}

}  // namespace

Index numeric_rank(const Matrix& m, double tol) { return rank_impl(m, tol); }
Index numeric_rank(const ComplexMatrix& m, double tol) {
  return rank_impl(m, tol);
}

Matrix sqrt_psd(const Matrix& m) {
  const Matrix sym = symmetrize(m);
  if (sym.rows() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Vector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal() *
         solver.eigenvectors().transpose();
}

Matrix project_psd(const Matrix& m, double floor) {
  const Matrix sym = 0.5 * (m + m.transpose());
  if (sym.rows() == 0) return sym;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Vector clamped = solver.eigenvalues().cwiseMax(floor);
  Matrix out = solver.eigenvectors() * clamped.asDiagonal() *
               solver.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

Vector svec(const Matrix& m) {
  require_square(m, "svec");
  const Index n = m.rows();
  Vector out(svec_size(n));
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    out(k++) = m(j, j);
    for (Index i = j + 1; i < n; ++i) {
      out(k++) = std::sqrt(2.0) * 0.5 * (m(i, j) + m(j, i));
    }
  }
  return out;
}

Matrix smat(const Eigen::Ref<const Vector>& v, Index n) {
  if (v.size() != svec_size(n)) throw DimensionError("smat: size mismatch");
  Matrix out(n, n);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    out(j, j) = v(k++);
    for (Index i = j + 1; i < n; ++i) {
      out(i, j) = out(j, i) = v(k++) / std::sqrt(2.0);
    }
  }
  return out;
}

Matrix svec_to_vec(Index n) {
  Matrix out = Matrix::Zero(n * n, svec_size(n));
  for (Index k = 0; k < svec_size(n); ++k) {
    out.col(k) = vec(svec_basis(n, k));
  }
  return out;
}

Matrix svec_basis(Index n, Index k) {
  Vector unit = Vector::Zero(svec_size(n));
  unit(k) = 1.0;
  return smat(unit, n);
}

}  // namespace lqnash
