#pragma once

// Dense real/complex linear-algebra kernels shared by every other module.
//
// All routines are pure functions of their arguments. Tolerances are explicit
// parameters; the defaults live in `lqnash::tol`.

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "lqnash/errors.h"

namespace lqnash {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace tol {
/// Relative PSD tolerance: min eigenvalue >= -kPsd * max(1, ||M||).
inline constexpr double kPsd = 1e-8;
/// Relative asymmetry admitted by `symmetrize`.
inline constexpr double kSymmetry = 1e-8;
/// Relative singular-value threshold for numeric rank and nullspaces.
inline constexpr double kRank = 1e-9;
/// Eigenvalues with real part in (-kHurwitz, inf) are not considered stable.
inline constexpr double kHurwitz = 1e-9;
}  // namespace tol

/// Largest matrix dimension the dense kernels are sized for.
inline constexpr Index kMaxDenseDimension = 32;

void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);

/// All eigenvalues of a square real matrix, with multiplicity.
///
/// Hessenberg reduction followed by shifted QR, capped at 100*n sweeps.
/// Throws NumericalError if the iteration does not converge.
ComplexVector eig(const Matrix& m);

struct EigenDecomposition {
  ComplexVector values;
  ComplexMatrix vectors;  // column k pairs with values(k)
};
EigenDecomposition eig_with_vectors(const Matrix& m);

/// max Re(lambda) over the spectrum.
double spectral_abscissa(const Matrix& m);

/// True iff every eigenvalue has real part < -margin.
bool is_hurwitz(const Matrix& m, double margin = tol::kHurwitz);

/// Returns (M + M')/2, rejecting M whose asymmetry exceeds
/// tol * max(1, ||M||_F) with PreconditionError.
Matrix symmetrize(const Matrix& m, double tol = tol::kSymmetry);

/// Eigenvalues of a symmetric matrix in ascending order.
Vector symmetric_eigenvalues(const Matrix& m);

/// min eig(M) >= -tol * max(1, ||M||). M must be symmetric within tol.
bool is_psd(const Matrix& m, double tol = tol::kPsd);
/// min eig(M) > tol * max(1, ||M||).
bool is_pd(const Matrix& m, double tol = tol::kPsd);

/// Solves P*Acl + Acl'*P = -W for symmetric P.
///
/// Uses the n^2 x n^2 vectorized system (I (x) Acl' + Acl' (x) I) vec(P) = -vec(W).
/// Acl must be Hurwitz (PreconditionError otherwise); a singular vectorized
/// system raises NumericalError.
Matrix solve_lyapunov(const Matrix& acl, const Matrix& w);

/// Kronecker product M (x) N.
Matrix kron(const Matrix& m, const Matrix& n);
/// Column-stacking vectorization.
Vector vec(const Matrix& m);
/// Inverse of `vec`.
Matrix unvec(const Vector& v, Index rows, Index cols);
/// N (+) M = (N (x) I_m) + (I_n (x) M) for square N (n x n) and M (m x m).
Matrix kron_sum(const Matrix& n, const Matrix& m);

/// Orthonormal basis (as columns) of {x : ||Mx|| <= tol * ||M||_2 * ||x||}.
/// Returns a matrix with zero columns when M has full column rank.
Matrix nullspace(const Matrix& m, double tol = tol::kRank);

/// Number of singular values above tol * sigma_max.
Index numeric_rank(const Matrix& m, double tol = tol::kRank);
Index numeric_rank(const ComplexMatrix& m, double tol = tol::kRank);

/// Symmetric square root of a PSD matrix (negative eigenvalues clamped to 0).
Matrix sqrt_psd(const Matrix& m);

/// Frobenius-nearest symmetric matrix with every eigenvalue >= floor.
Matrix project_psd(const Matrix& m, double floor = 0.0);

// Isometric half-vectorization of symmetric matrices: the lower triangle,
// column by column, with off-diagonal entries scaled by sqrt(2) so that
// ||svec(X)||_2 == ||X||_F.

inline constexpr Index svec_size(Index n) { return n * (n + 1) / 2; }
Vector svec(const Matrix& m);
Matrix smat(const Eigen::Ref<const Vector>& v, Index n);
/// The n^2 x svec_size(n) matrix Dn with vec(X) = Dn * svec(X).
Matrix svec_to_vec(Index n);
/// Symmetric matrix whose svec is the k-th unit vector.
Matrix svec_basis(Index n, Index k);

}  // namespace lqnash
