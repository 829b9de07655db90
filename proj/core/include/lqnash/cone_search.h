#pragma once

// Feasibility search over the intersection of an affine subspace with a
// product of (shifted) PSD cones, in isometric svec coordinates.
//
// Used by the Kalman-equation solvers and by the time-domain oracle. The
// iteration is plain alternating projections; when it stalls (tangential
// intersections, which arise for rank-deficient spectra) a facial-reduction
// pass pins the near-null eigenspaces and retries on the smaller face.
// Emptiness is certified by a point of the dual system (theorem of
// alternatives), found with the same search.

#include <optional>
#include <span>

#include "lqnash/numerics.h"

namespace lqnash {

/// {x0 + N z} with N having orthonormal columns.
class AffineSet {
 public:
  AffineSet(Vector point, Matrix basis);

  /// {x : E x = f}, or nullopt when the system is inconsistent.
  static std::optional<AffineSet> solve(const Matrix& e, const Vector& f,
                                        double tol = tol::kRank);

  /// Intersection with {x : C x = d}; nullopt when empty.
  std::optional<AffineSet> restrict(const Matrix& c, const Vector& d,
                                    double tol = tol::kRank) const;

  Vector project(const Vector& x) const;

  const Vector& point() const { return point_; }
  const Matrix& basis() const { return basis_; }
  Index dim() const { return basis_.cols(); }
  Index ambient_dim() const { return point_.size(); }

 private:
  Vector point_;
  Matrix basis_;
};

/// A symmetric dim x dim block stored at svec coordinates
/// [offset, offset + svec_size(dim)), constrained to X >= floor * I.
struct PsdBlock {
  Index offset = 0;
  Index dim = 0;
  double floor = 0.0;
};

struct ConeSearchOptions {
  int max_iterations = 10000;
  /// Accept x when every block satisfies min eig >= floor - tol*max(1,||X||).
  double tolerance = 1e-9;
  bool facial_reduction = true;
};

enum class ConeSearchStatus {
  kFound,
  /// The affine set is a single point and that point violates a cone.
  kPointOutsideCone,
  /// Iteration cap reached without a certificate either way.
  kIndeterminate,
};

struct ConeSearchResult {
  ConeSearchStatus status = ConeSearchStatus::kIndeterminate;
  Vector point;  // last affine iterate
  double cone_distance = 0.0;
  int iterations = 0;
};

/// Projects every block of x onto its cone; other coordinates are untouched.
Vector project_onto_blocks(const Vector& x, std::span<const PsdBlock> blocks);

/// True when every block of x lies in its cone within `tolerance`.
bool blocks_feasible(const Vector& x, std::span<const PsdBlock> blocks,
                     double tolerance);

ConeSearchResult find_cone_point(const AffineSet& affine,
                                 std::span<const PsdBlock> blocks,
                                 const ConeSearchOptions& options = {});

/// Euclidean projection of z onto affine-set intersect cones (Dykstra).
ConeSearchResult dykstra_project(const Vector& z, const AffineSet& affine,
                                 std::span<const PsdBlock> blocks,
                                 const ConeSearchOptions& options = {});

/// Orthonormal basis of the nullspace of e, with the rank decision taken
/// after scaling every column of e to unit norm. Unscaled rank decisions fold
/// independent directions with small coefficients into the kernel.
Matrix equilibrated_nullspace(const Matrix& e, double tol = tol::kRank);

/// {x : e x = f} with the same column equilibration; nullopt if inconsistent.
std::optional<AffineSet> equilibrated_solve(const Matrix& e, const Vector& f,
                                            double tol = tol::kRank);

/// find_cone_point followed by a short retry with every floor raised by
/// `margin` times the block norm of the first point. A strictly interior
/// point satisfies the affine constraints without a final projection; when
/// the retry fails (boundary solutions) the first point is kept.
ConeSearchResult find_interior_cone_point(const AffineSet& affine,
                                          std::span<const PsdBlock> blocks,
                                          const ConeSearchOptions& options = {},
                                          double margin = 1e-6);

/// Certificate that the subspace L = range(subspace) contains no point with
/// every block PSD and block `strict` positive definite (block floors are
/// ignored). Such a point fails to exist iff some Y in the orthogonal
/// complement of L has every block PSD, trace(Y_strict) = 1 and vanishing
/// coordinates outside the blocks. Returns a verified Y, or nullopt when the
/// search finds none.
std::optional<Vector> find_infeasibility_certificate(
    const Matrix& subspace, std::span<const PsdBlock> blocks, std::size_t strict,
    const ConeSearchOptions& options = {});

/// Eigenvalues of the symmetric part of x clamped at floor; returns the
/// symmetric part unchanged when it already satisfies the floor.
Matrix clamp_psd(const Matrix& x, double floor = 0.0);

}  // namespace lqnash
