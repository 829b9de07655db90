#include "lqnash/cone_search.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lqnash {

AffineSet::AffineSet(Vector point, Matrix basis)
    : point_(std::move(point)), basis_(std::move(basis)) {
  if (basis_.rows() != point_.size()) {
    throw DimensionError("AffineSet: basis rows must match point size");
  }
}

namespace {

// Minimum-norm least-squares solution of M z = r together with the
// orthonormal nullspace of M. `consistent` reports whether the residual is
// negligible relative to the data.
struct LeastSquares {
  Vector solution;
  Matrix kernel;
  bool consistent = true;
};

LeastSquares least_squares(const Matrix& m, const Vector& rhs, double tol) {
  LeastSquares out;
  const Index cols = m.cols();
  if (m.rows() == 0) {
    out.solution = Vector::Zero(cols);
    out.kernel = Matrix::Identity(cols, cols);
    return out;
  }
  if (cols == 0) {
    out.solution = Vector(0);
    out.kernel = Matrix(0, 0);
    out.consistent = rhs.norm() <= 1e-10;
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double smax = sigma(0);
  Index rank = 0;
  for (Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > tol * smax) ++rank;
  }
  Vector z = Vector::Zero(cols);
  if (rank > 0) {
    const Vector coeff = svd.matrixU().leftCols(rank).transpose() * rhs;
    z = svd.matrixV().leftCols(rank) *
        coeff.cwiseQuotient(sigma.head(rank));
  }
  out.solution = z;
  out.kernel = svd.matrixV().rightCols(cols - rank);
  const double residual = (m * z - rhs).norm();
  const double scale = std::max({rhs.norm(), smax * z.norm(), 1e-300});
  out.consistent = residual <= 1e-8 * scale;
  return out;
}

}  // namespace

std::optional<AffineSet> AffineSet::solve(const Matrix& e, const Vector& f,
                                          double tol) {
  if (e.rows() != f.size()) throw DimensionError("AffineSet::solve");
  LeastSquares ls = least_squares(e, f, tol);
  if (!ls.consistent) return std::nullopt;
  return AffineSet(std::move(ls.solution), std::move(ls.kernel));
}

std::optional<AffineSet> AffineSet::restrict(const Matrix& c, const Vector& d,
                                             double tol) const {
  if (c.cols() != ambient_dim() || c.rows() != d.size()) {
    throw DimensionError("AffineSet::restrict");
  }
  const Matrix reduced = c * basis_;
  const Vector rhs = d - c * point_;
  LeastSquares ls = least_squares(reduced, rhs, tol);
  if (!ls.consistent) return std::nullopt;
  return AffineSet(point_ + basis_ * ls.solution, basis_ * ls.kernel);
}

Vector AffineSet::project(const Vector& x) const {
  if (basis_.cols() == 0) return point_;
  return point_ + basis_ * (basis_.transpose() * (x - point_));
}

Vector project_onto_blocks(const Vector& x, std::span<const PsdBlock> blocks) {
  Vector out = x;
  for (const PsdBlock& b : blocks) {
    const Index len = svec_size(b.dim);
    const Matrix projected = project_psd(smat(x.segment(b.offset, len), b.dim),
                                         b.floor);
    out.segment(b.offset, len) = svec(projected);
  }
  return out;
}

bool blocks_feasible(const Vector& x, std::span<const PsdBlock> blocks,
                     double tolerance) {
  for (const PsdBlock& b : blocks) {
    if (b.dim == 0) continue;
    const Matrix block = smat(x.segment(b.offset, svec_size(b.dim)), b.dim);
    const double lmin = symmetric_eigenvalues(block)(0);
    if (lmin < b.floor - tolerance * std::max(1.0, block.norm())) return false;
  }
  return true;
}

namespace {

struct ApOutcome {
  bool found = false;
  Vector x;
  int iterations = 0;
};

ApOutcome alternating_projections(const AffineSet& affine, Vector x,
                                  std::span<const PsdBlock> blocks,
                                  int max_iterations, double tolerance) {
  ApOutcome out;
  x = affine.project(x);
  for (int it = 0; it < max_iterations; ++it) {
    if (blocks_feasible(x, blocks, tolerance)) {
      out.found = true;
      out.x = x;
      out.iterations = it;
      return out;
    }
    const Vector next = affine.project(project_onto_blocks(x, blocks));
    const double step = (next - x).norm();
    x = next;
    out.iterations = it + 1;
    if (step <= 1e-15 * std::max(1.0, x.norm())) break;
  }
  out.found = blocks_feasible(x, blocks, tolerance);
  out.x = x;
  return out;
}

// Low-rank polish: parameterize every block as floor*I + F F' with F of a
// fixed rank and drive the affine residual to zero with Levenberg-Marquardt.
// Converges quickly onto boundary faces where alternating projections crawl.
struct LowRankModel {
  std::span<const PsdBlock> blocks;
  std::vector<Index> ranks;
  Index ambient = 0;

  Index parameter_count() const {
    Index count = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      count += blocks[b].dim * ranks[b];
    }
    return count;
  }

  // Coordinates outside every block are carried in `base` unchanged.
  Vector assemble(const Vector& theta, const Vector& base) const {
    Vector x = base;
    Index pos = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Index n = blocks[b].dim;
      const Index r = ranks[b];
      const Matrix f = Eigen::Map<const Matrix>(theta.data() + pos, n, r);
      pos += n * r;
      const Matrix block =
          blocks[b].floor * Matrix::Identity(n, n) + f * f.transpose();
      x.segment(blocks[b].offset, svec_size(n)) = svec(block);
    }
    return x;
  }

  Matrix jacobian(const Vector& theta) const {
    Matrix jac = Matrix::Zero(ambient, parameter_count());
    Index pos = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Index n = blocks[b].dim;
      const Index r = ranks[b];
      const Matrix f = Eigen::Map<const Matrix>(theta.data() + pos, n, r);
      for (Index k = 0; k < r; ++k) {
        for (Index i = 0; i < n; ++i) {
          Matrix d = Matrix::Zero(n, n);
          d.row(i) += f.col(k).transpose();
          d.col(i) += f.col(k);
          jac.block(blocks[b].offset, pos + k * n + i, svec_size(n), 1) =
              svec(d);
        }
      }
      pos += n * r;
    }
    return jac;
  }
};

std::optional<Vector> low_rank_polish(const AffineSet& affine,
                                      const Matrix& complement,
                                      std::span<const PsdBlock> blocks,
                                      const Vector& start,
                                      const std::vector<Index>& ranks,
                                      double tolerance) {
  LowRankModel model{blocks, ranks, affine.ambient_dim()};
  const Index params = model.parameter_count();
  Vector theta(params);
  {
    Index pos = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Index n = blocks[b].dim;
      const Index r = ranks[b];
      const Matrix block =
          smat(start.segment(blocks[b].offset, svec_size(n)), n) -
          blocks[b].floor * Matrix::Identity(n, n);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 *
                                               (block + block.transpose()));
      Matrix f(n, r);
      for (Index k = 0; k < r; ++k) {
        const Index idx = n - 1 - k;  // descending eigenvalues
        f.col(k) = es.eigenvectors().col(idx) *
                   std::sqrt(std::max(es.eigenvalues()(idx), 0.0));
      }
      Eigen::Map<Matrix>(theta.data() + pos, n, r) = f;
      pos += n * r;
    }
  }

  auto residual = [&](const Vector& t) -> Vector {
    return complement.transpose() * (model.assemble(t, start) - affine.point());
  };

  Vector res = residual(theta);
  double cost = res.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double scale = std::max(1.0, model.assemble(theta, start).norm());
    if (std::sqrt(cost) <= 1e-13 * scale) break;
    const Matrix jac = complement.transpose() * model.jacobian(theta);
    const Matrix jtj = jac.transpose() * jac;
    const Vector grad = jac.transpose() * res;
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Matrix lhs = jtj;
      lhs.diagonal().array() += mu * std::max(1.0, jtj.diagonal().maxCoeff());
      const Vector step = lhs.ldlt().solve(-grad);
      const Vector candidate = theta + step;
      const Vector cres = residual(candidate);
      if (cres.squaredNorm() < cost) {
        theta = candidate;
        res = cres;
        cost = cres.squaredNorm();
        mu = std::max(mu / 10.0, 1e-15);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  const Vector x = affine.project(model.assemble(theta, start));
  if (blocks_feasible(x, blocks, tolerance)) return x;
  return std::nullopt;
}

std::optional<Vector> facial_polish(const AffineSet& affine,
                                    std::span<const PsdBlock> blocks,
                                    const Vector& iterate, double tolerance) {
  if (blocks.empty() || affine.dim() == 0) return std::nullopt;
  const Matrix complement = nullspace(affine.basis().transpose());
  const Vector start = project_onto_blocks(iterate, blocks);

  std::vector<Vector> spectra;
  for (const PsdBlock& b : blocks) {
    const Matrix block = smat(start.segment(b.offset, svec_size(b.dim)), b.dim) -
                         b.floor * Matrix::Identity(b.dim, b.dim);
    spectra.push_back(symmetric_eigenvalues(block));
  }

  std::vector<std::vector<Index>> tried;
  for (double tau : {1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
    std::vector<Index> ranks;
    for (const Vector& ev : spectra) {
      const double top = ev.size() > 0 ? std::max(ev.maxCoeff(), 0.0) : 0.0;
      Index r = 0;
      for (Index k = 0; k < ev.size(); ++k) {
        if (ev(k) > tau * std::max(top, 1e-300)) ++r;
      }
      ranks.push_back(std::max<Index>(r, 0));
    }
    if (std::find(tried.begin(), tried.end(), ranks) != tried.end()) continue;
    tried.push_back(ranks);
    if (auto x = low_rank_polish(affine, complement, blocks, start, ranks,
                                 tolerance)) {
      return x;
    }
  }
  return std::nullopt;
}

}  // namespace

ConeSearchResult find_cone_point(const AffineSet& affine,
                                 std::span<const PsdBlock> blocks,
                                 const ConeSearchOptions& options) {
  ConeSearchResult result;
  const double tolerance = options.tolerance;
  auto finish = [&](ConeSearchStatus status, const Vector& x, int iterations) {
    result.status = status;
    result.point = x;
    result.cone_distance = (project_onto_blocks(x, blocks) - x).norm();
    result.iterations = iterations;
    return result;
  };

  if (affine.dim() == 0) {
    const Vector& x = affine.point();
    return finish(blocks_feasible(x, blocks, tolerance)
                      ? ConeSearchStatus::kFound
                      : ConeSearchStatus::kPointOutsideCone,
                  x, 0);
  }

  // Short alternating-projection run, then polish; if both fail, finish the
  // iteration budget and polish once more.
  const int first_leg = std::min(options.max_iterations, 500);
  ApOutcome ap = alternating_projections(affine, affine.point(), blocks,
                                         first_leg, tolerance);
  int iterations = ap.iterations;
  if (ap.found) return finish(ConeSearchStatus::kFound, ap.x, iterations);
  if (options.facial_reduction) {
    if (auto x = facial_polish(affine, blocks, ap.x, tolerance)) {
      return finish(ConeSearchStatus::kFound, *x, iterations);
    }
  }
  if (options.max_iterations > first_leg) {
    ap = alternating_projections(affine, ap.x, blocks,
                                 options.max_iterations - first_leg, tolerance);
    iterations += ap.iterations;
    if (ap.found) return finish(ConeSearchStatus::kFound, ap.x, iterations);
    if (options.facial_reduction) {
      if (auto x = facial_polish(affine, blocks, ap.x, tolerance)) {
        return finish(ConeSearchStatus::kFound, *x, iterations);
      }
    }
  }
  return finish(ConeSearchStatus::kIndeterminate, ap.x, iterations);
}

ConeSearchResult dykstra_project(const Vector& z, const AffineSet& affine,
                                 std::span<const PsdBlock> blocks,
                                 const ConeSearchOptions& options) {
  if (z.size() != affine.ambient_dim()) {
    throw DimensionError("dykstra_project: point dimension mismatch");
  }
  ConeSearchResult result;
  Vector x = z;
  Vector p = Vector::Zero(z.size());
  Vector q = Vector::Zero(z.size());
  Vector y = affine.project(x);
  for (int it = 0; it < options.max_iterations; ++it) {
    y = affine.project(x + p);
    p = x + p - y;
    const Vector x_next = project_onto_blocks(y + q, blocks);
    q = y + q - x_next;
    const double change = (x_next - x).norm();
    x = x_next;
    result.iterations = it + 1;
    const double gap = (x - affine.project(x)).norm();
    const double scale = std::max(1.0, x.norm());
    if (gap <= options.tolerance * scale && change <= options.tolerance * scale) {
      break;
    }
  }
  const Vector on_affine = affine.project(x);
  result.point = on_affine;
  result.cone_distance = (project_onto_blocks(on_affine, blocks) - on_affine).norm();
  result.status = blocks_feasible(on_affine, blocks, options.tolerance * 10.0)
                      ? ConeSearchStatus::kFound
                      : ConeSearchStatus::kIndeterminate;
  return result;
}

namespace {

Vector column_norms(const Matrix& e) {
  Vector d(e.cols());
  for (Index k = 0; k < e.cols(); ++k) {
    const double c = e.col(k).norm();
    d(k) = c > 0.0 ? c : 1.0;
  }
  return d;
}

Matrix orthonormal_columns(const Matrix& m) {
  if (m.cols() == 0) return m;
  const Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

}  // namespace

Matrix equilibrated_nullspace(const Matrix& e, double tol) {
  const Vector d = column_norms(e);
  const Matrix ns = nullspace(e * d.cwiseInverse().asDiagonal(), tol);
  return orthonormal_columns(d.cwiseInverse().asDiagonal() * ns);
}

std::optional<AffineSet> equilibrated_solve(const Matrix& e, const Vector& f,
                                            double tol) {
  const Vector d = column_norms(e);
  const std::optional<AffineSet> scaled =
      AffineSet::solve(e * d.cwiseInverse().asDiagonal(), f, tol);
  if (!scaled) return std::nullopt;
  return AffineSet(d.cwiseInverse().asDiagonal() * scaled->point(),
                   orthonormal_columns(d.cwiseInverse().asDiagonal() * scaled->basis()));
}

ConeSearchResult find_interior_cone_point(const AffineSet& affine,
                                          std::span<const PsdBlock> blocks,
                                          const ConeSearchOptions& options,
                                          double margin) {
  ConeSearchResult first = find_cone_point(affine, blocks, options);
  if (first.status != ConeSearchStatus::kFound) return first;
  std::vector<PsdBlock> raised(blocks.begin(), blocks.end());
  for (PsdBlock& b : raised) {
    const Matrix block = smat(first.point.segment(b.offset, svec_size(b.dim)), b.dim);
    b.floor += margin * block.norm();
  }
  ConeSearchOptions quick = options;
  quick.max_iterations = std::min(options.max_iterations, 2000);
  ConeSearchResult inner = find_cone_point(affine, raised, quick);
  if (inner.status == ConeSearchStatus::kFound) {
    inner.iterations += first.iterations;
    return inner;
  }
  return first;
}

std::optional<Vector> find_infeasibility_certificate(
    const Matrix& subspace, std::span<const PsdBlock> blocks, std::size_t strict,
    const ConeSearchOptions& options) {
  if (strict >= blocks.size()) {
    throw DimensionError("find_infeasibility_certificate: strict block out of range");
  }
  const Index dim = subspace.rows();
  const Matrix complement = subspace.cols() == 0
                                ? Matrix::Identity(dim, dim).eval()
                                : nullspace(subspace.transpose());
  if (complement.cols() == 0) return std::nullopt;

  std::vector<bool> covered(static_cast<std::size_t>(dim), false);
  std::vector<PsdBlock> cones;
  for (const PsdBlock& b : blocks) {
    for (Index k = 0; k < svec_size(b.dim); ++k) {
      covered[static_cast<std::size_t>(b.offset + k)] = true;
    }
    cones.push_back({b.offset, b.dim, 0.0});
  }
  Index free_coords = 0;
  for (bool c : covered) free_coords += c ? 0 : 1;

  Matrix c = Matrix::Zero(free_coords + 1, dim);
  Vector d = Vector::Zero(free_coords + 1);
  Index row = 0;
  for (Index k = 0; k < dim; ++k) {
    if (!covered[static_cast<std::size_t>(k)]) c(row++, k) = 1.0;
  }
  const PsdBlock& s = blocks[strict];
  for (Index j = 0, k = 0; j < s.dim; k += s.dim - j, ++j) c(row, s.offset + k) = 1.0;
  d(row) = 1.0;

  const AffineSet span(Vector::Zero(dim), complement);
  const std::optional<AffineSet> slice = span.restrict(c, d);
  if (!slice) return std::nullopt;
  const ConeSearchResult search = find_cone_point(*slice, cones, options);
  if (search.status != ConeSearchStatus::kFound) return std::nullopt;

  // Independent check of the alternative: orthogonality, cone membership and
  // normalization.
  const Vector& y = search.point;
  if (subspace.cols() > 0 &&
      (subspace.transpose() * y).norm() > 1e-9 * std::max(1.0, y.norm())) {
    return std::nullopt;
  }
  if (!blocks_feasible(y, cones, options.tolerance)) return std::nullopt;
  if (std::abs((c.row(row) * y)(0) - 1.0) > 1e-9) return std::nullopt;
  return y;
}

Matrix clamp_psd(const Matrix& x, double floor) {
  const Matrix sym = 0.5 * (x + x.transpose());
  if (symmetric_eigenvalues(sym)(0) >= floor) return sym;
  return project_psd(sym, floor);
}

}  // namespace lqnash
