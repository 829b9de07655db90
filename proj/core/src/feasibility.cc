#include "lqnash/feasibility.h"

#include <algorithm>
#include <cmath>

namespace lqnash {

namespace {

void require_shape(const ThetaPoint& pt, const GameSystem& sys) {
  const auto players = static_cast<std::size_t>(sys.num_players());
  if (pt.Q.size() != players || pt.R.size() != players || pt.P.size() != players) {
    throw DimensionError("ThetaPoint: player count mismatch");
  }
  for (std::size_t i = 0; i < players; ++i) {
    if (pt.Q[i].rows() != sys.n() || pt.Q[i].cols() != sys.n() ||
        pt.P[i].rows() != sys.n() || pt.P[i].cols() != sys.n() ||
        pt.R[i].size() != players) {
      throw DimensionError("ThetaPoint: dimension mismatch for player " +
                           std::to_string(i));
    }
    for (std::size_t j = 0; j < players; ++j) {
      const Index mj = sys.m(static_cast<int>(j));
      if (pt.R[i][j].rows() != mj || pt.R[i][j].cols() != mj) {
        throw DimensionError("ThetaPoint: R block size mismatch");
      }
    }
  }
}

double min_eig(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return symmetric_eigenvalues(0.5 * (m + m.transpose()))(0);
}

double relative(double residual, std::initializer_list<double> terms) {
  double scale = 0.0;
  for (double t : terms) scale = std::max(scale, t);
  if (scale == 0.0) return residual == 0.0 ? 0.0 : 1.0;
  return residual / scale;
}

// Block-diagonal concatenation.
Matrix block_diag(std::initializer_list<Matrix> blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const Matrix& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const Matrix& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

// Row selecting trace(X) from svec(X) coordinates starting at `offset`.
Matrix trace_row(Index total, Index offset, Index m, double weight) {
  Matrix row = Matrix::Zero(1, total);
  Index k = 0;
  for (Index j = 0; j < m; ++j) {
    row(0, offset + k) = weight;
    k += m - j;
  }
  return row;
}

}  // namespace

ThetaPoint ThetaPoint::scaled(double alpha) const {
  ThetaPoint out = *this;
  for (Matrix& q : out.Q) q *= alpha;
  for (auto& row : out.R) {
    for (Matrix& r : row) r *= alpha;
  }
  for (Matrix& p : out.P) p *= alpha;
  return out;
}

ThetaPoint ThetaPoint::combine(const ThetaPoint& a, const ThetaPoint& b,
                               double lambda) {
  if (a.Q.size() != b.Q.size() || a.R.size() != b.R.size() ||
      a.P.size() != b.P.size()) {
    throw DimensionError("ThetaPoint::combine: shape mismatch");
  }
  ThetaPoint out = a;
  for (std::size_t i = 0; i < a.Q.size(); ++i) {
    out.Q[i] = (1.0 - lambda) * a.Q[i] + lambda * b.Q[i];
    out.P[i] = (1.0 - lambda) * a.P[i] + lambda * b.P[i];
    for (std::size_t j = 0; j < a.R[i].size(); ++j) {
      out.R[i][j] = (1.0 - lambda) * a.R[i][j] + lambda * b.R[i][j];
    }
  }
  return out;
}

MembershipReport check_membership(const ThetaPoint& pt, const GameSystem& sys,
                                  const StrategyProfile& prof, double tol) {
  require_shape(pt, sys);
  MembershipReport out;
  out.member = true;
  const Matrix acl = closed_loop(sys, prof.K());
  const int players = sys.num_players();
  for (int i = 0; i < players; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Matrix& q = pt.Q[ui];
    const Matrix& p = pt.P[ui];
    PlayerMembership pm;
    Matrix cross = Matrix::Zero(sys.n(), sys.n());
    for (int j = 0; j < players; ++j) {
      const Matrix& kj = prof.K(j);
      cross += kj.transpose() * pt.R[ui][static_cast<std::size_t>(j)] * kj;
    }
    const Matrix pa = p * acl;
    pm.are_residual = relative((q + pa + pa.transpose() + cross).norm(),
                               {q.norm(), pa.norm(), cross.norm()});
    const Matrix rk = pt.R[ui][ui] * prof.K(i);
    const Matrix bp = sys.B(i).transpose() * p;
    pm.stationarity_residual = relative((rk - bp).norm(), {rk.norm(), bp.norm()});

    pm.q_min_eigenvalue = min_eig(q);
    pm.p_min_eigenvalue = min_eig(p);
    pm.r_ii_min_eigenvalue = min_eig(pt.R[ui][ui]);
    bool cross_ok = true;
    pm.r_ij_min_eigenvalue = 0.0;
    bool first = true;
    for (int j = 0; j < players; ++j) {
      if (j == i) continue;
      const Matrix& rij = pt.R[ui][static_cast<std::size_t>(j)];
      const double e = min_eig(rij);
      pm.r_ij_min_eigenvalue = first ? e : std::min(pm.r_ij_min_eigenvalue, e);
      first = false;
      cross_ok = cross_ok && e >= -tol * rij.norm();
    }
    const double rii_norm = pt.R[ui][ui].norm();
    const bool symmetric =
        (q - q.transpose()).norm() <= tol * q.norm() + 1e-300 &&
        (p - p.transpose()).norm() <= tol * p.norm() + 1e-300;
    pm.ok = symmetric && pm.are_residual <= tol &&
            pm.stationarity_residual <= tol && rii_norm > 0.0 &&
            pm.r_ii_min_eigenvalue > tol * rii_norm && cross_ok &&
            pm.q_min_eigenvalue >= -tol * q.norm() &&
            pm.p_min_eigenvalue >= -tol * p.norm();
    out.member = out.member && pm.ok;
    out.players.push_back(pm);
  }
  return out;
}

Matrix build_vectorized_system(const GameSystem& sys, const StrategyProfile& prof,
                               int i) {
  if (i < 0 || i >= sys.num_players()) {
    throw DimensionError("build_vectorized_system: invalid player index");
  }
  const Index n = sys.n();
  const Index m = sys.m(i);
  const Matrix acl = closed_loop(sys, prof.K());
  const Matrix& k = prof.K(i);
  const Matrix& b = sys.B(i);
  const Matrix kt = k.transpose();

  Matrix out = Matrix::Zero(n * n + n * m, n * n + m * m + n * n);
  // vec(Q) + vec(K' R K) + vec(P A_cl + A_cl' P) = 0
  out.block(0, 0, n * n, n * n) = Matrix::Identity(n * n, n * n);
  out.block(0, n * n, n * n, m * m) = kron(kt, kt);
  out.block(0, n * n + m * m, n * n, n * n) =
      kron_sum(acl.transpose(), acl.transpose());
  // vec(R K) - vec(B' P) = 0
  out.block(n * n, n * n, n * m, m * m) = kron(kt, Matrix::Identity(m, m));
  out.block(n * n, n * n + m * m, n * m, n * n) =
      -kron(Matrix::Identity(n, n), b.transpose());
  return out;
}

Matrix build_symmetric_system(const GameSystem& sys, const StrategyProfile& prof,
                              int i) {
  const Index n = sys.n();
  const Index m = sys.m(i);
  return build_vectorized_system(sys, prof, i) *
         block_diag({svec_to_vec(n), svec_to_vec(m), svec_to_vec(n)});
}

std::string to_string(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::kFeasible:
      return "feasible";
    case FeasibilityStatus::kInfeasibleCertifiedByIdentity:
      return "infeasible_certified_by_identity";
    case FeasibilityStatus::kInfeasibleCertifiedByDual:
      return "infeasible_certified_by_dual";
    case FeasibilityStatus::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

bool is_infeasible(FeasibilityStatus status) {
  return status == FeasibilityStatus::kInfeasibleCertifiedByIdentity ||
         status == FeasibilityStatus::kInfeasibleCertifiedByDual;
}

namespace {

struct PlayerFeasibility {
  FeasibilityStatus status = FeasibilityStatus::kIndeterminate;
  Index kernel_dim = 0;
  Matrix Q, R, P;
};

// Orthonormal basis of the leading `rows` coordinates of span(kernel). With a
// stabilizing profile P_i is a linear function of (Q_i, R_ii), so the
// projection loses no dimension and the search runs on (Q_i, R_ii) alone;
// P_i >= 0 then follows from the Lyapunov equation.
Matrix leading_span(const Matrix& kernel, Index rows) {
  if (kernel.cols() == 0) return Matrix(rows, 0);
  const Eigen::JacobiSVD<Matrix> svd(kernel.topRows(rows), Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol::kRank * sigma(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Searches the dual system of {Q >= 0, R > 0} on the kernel of the
// balanced system e. In Q-only mode R is reparametrized as t * I, t > 0.
bool dual_certificate_exists(const Matrix& e, Index n, Index m,
                             const FeasibilityOptions& options) {
  const Index nq = svec_size(n);
  const Index nr = svec_size(m);
  if (options.mode == FeasibilityMode::kGeneral) {
    const PsdBlock blocks[] = {{0, n, 0.0}, {nq, m, 0.0}};
    return find_infeasibility_certificate(
               leading_span(equilibrated_nullspace(e), nq + nr), blocks, 1,
               options.cone)
        .has_value();
  }
  Matrix reduced(e.rows(), nq + 1 + nq);
  reduced << e.leftCols(nq), e.middleCols(nq, nr) * svec(Matrix::Identity(m, m)),
      e.rightCols(nq);
  const PsdBlock blocks[] = {{0, n, 0.0}, {nq, 1, 0.0}};
  return find_infeasibility_certificate(
             leading_span(equilibrated_nullspace(reduced), nq + 1), blocks, 1,
             options.cone)
      .has_value();
}

PlayerFeasibility solve_player(const GameSystem& sys, const StrategyProfile& prof,
                               int i, const FeasibilityOptions& options) {
  const Index n = sys.n();
  const Index m = sys.m(i);
  const Index nq = svec_size(n);
  const Index nr = svec_size(m);
  const Index total = nq + nr;

  Matrix e = build_symmetric_system(sys, prof, i);
  // Balance the Q, R and P column groups.
  const double sq = std::max(e.leftCols(nq).norm(), 1e-300);
  const double sr = std::max(e.middleCols(nq, nr).norm(), 1e-300);
  const double sp = std::max(e.rightCols(nq).norm(), 1e-300);
  e.leftCols(nq) /= sq;
  e.middleCols(nq, nr) /= sr;
  e.rightCols(nq) /= sp;

  PlayerFeasibility out;
  const Matrix kernel = equilibrated_nullspace(e);
  out.kernel_dim = kernel.cols();
  const AffineSet span(Vector::Zero(total), leading_span(kernel, total));

  std::optional<AffineSet> slice;
  double r_floor = options.r_floor * sr;
  if (options.mode == FeasibilityMode::kGeneral) {
    slice = span.restrict(trace_row(total, nq, m, 1.0 / sr),
                          Vector::Constant(1, static_cast<double>(m)));
  } else {
    Matrix select = Matrix::Zero(nr, total);
    select.middleCols(nq, nr) = Matrix::Identity(nr, nr) / sr;
    slice = span.restrict(select, svec(Matrix::Identity(m, m)));
    r_floor = 0.0;
  }
  if (!slice) {
    out.status = FeasibilityStatus::kInfeasibleCertifiedByIdentity;
    return out;
  }

  const PsdBlock blocks[] = {{0, n, 0.0}, {nq, m, r_floor}};
  const ConeSearchResult search =
      find_interior_cone_point(*slice, blocks, options.cone);
  const Vector& y = search.point;
  out.Q = smat(y.head(nq) / sq, n);
  out.R = options.mode == FeasibilityMode::kGeneral ? smat(y.tail(nr) / sr, m)
                                                    : Matrix::Identity(m, m).eval();
  switch (search.status) {
    case ConeSearchStatus::kFound:
      out.status = FeasibilityStatus::kFeasible;
      out.Q = clamp_psd(out.Q);
      if (options.mode == FeasibilityMode::kGeneral) {
        out.R = clamp_psd(out.R, options.r_floor);
      }
      break;
    case ConeSearchStatus::kPointOutsideCone:
      out.status = FeasibilityStatus::kInfeasibleCertifiedByIdentity;
      break;
    case ConeSearchStatus::kIndeterminate:
      out.status = dual_certificate_exists(e, n, m, options)
                       ? FeasibilityStatus::kInfeasibleCertifiedByDual
                       : FeasibilityStatus::kIndeterminate;
      break;
  }
  const Matrix& k = prof.K(i);
  const Matrix p = solve_lyapunov(closed_loop(sys, prof.K()),
                                  out.Q + k.transpose() * out.R * k);
  out.P = 0.5 * (p + p.transpose());
  return out;
}

FeasibilityStatus combine_status(const std::vector<FeasibilityStatus>& statuses) {
  bool indeterminate = false;
  for (FeasibilityStatus s : statuses) {
    if (is_infeasible(s)) return s;
    if (s == FeasibilityStatus::kIndeterminate) indeterminate = true;
  }
  return indeterminate ? FeasibilityStatus::kIndeterminate
                       : FeasibilityStatus::kFeasible;
}

}  // namespace

FeasibilityResult solve_feasibility_projection(const GameSystem& sys,
                                               const StrategyProfile& prof,
                                               const FeasibilityOptions& options) {
  FeasibilityResult out;
  const int players = sys.num_players();
  ThetaPoint pt;
  for (int i = 0; i < players; ++i) {
    PlayerFeasibility pf = solve_player(sys, prof, i, options);
    out.player_status.push_back(pf.status);
    out.kernel_dims.push_back(pf.kernel_dim);
    pt.Q.push_back(pf.Q);
    pt.P.push_back(pf.P);
    std::vector<Matrix> row;
    for (int j = 0; j < players; ++j) {
      row.push_back(j == i && pf.R.size() > 0
                        ? pf.R
                        : Matrix::Zero(sys.m(j), sys.m(j)).eval());
    }
    pt.R.push_back(std::move(row));
  }
  out.status = combine_status(out.player_status);
  if (out.status == FeasibilityStatus::kFeasible) {
    const MembershipReport report = check_membership(pt, sys, prof, options.tol);
    if (report.member) {
      out.point = std::move(pt);
    } else {
      out.status = FeasibilityStatus::kIndeterminate;
    }
  }
  return out;
}

NearestResult nearest_params(const CostParameters& costs0, const GameSystem& sys,
                             const StrategyProfile& prof,
                             const FeasibilityOptions& options) {
  NearestResult out;
  const FeasibilityResult feasible =
      solve_feasibility_projection(sys, prof, options);
  if (is_infeasible(feasible.status)) {
    out.status = feasible.status;
    return out;
  }

  const int players = sys.num_players();
  const Index n = sys.n();
  const Matrix acl = closed_loop(sys, prof.K());
  std::vector<Matrix> q_out;
  std::vector<std::vector<Matrix>> r_out;
  double dist2 = 0.0;
  bool all_found = true;

  for (int i = 0; i < players; ++i) {
    // Coordinates: [svec Q_i, svec R_i0, svec R_i1, ...].
    std::vector<Index> offsets{svec_size(n)};
    for (int j = 0; j < players; ++j) {
      offsets.push_back(offsets.back() + svec_size(sys.m(j)));
    }
    const Index total = offsets.back();
    auto unpack = [&](const Vector& z, Matrix& q, std::vector<Matrix>& r) {
      q = smat(z.head(svec_size(n)), n);
      r.clear();
      for (int j = 0; j < players; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        r.push_back(smat(z.segment(offsets[uj], svec_size(sys.m(j))), sys.m(j)));
      }
    };

    // Stationarity R_ii K_i - B_i' P_i with P_i from the Lyapunov equation
    // is linear in the coordinates; assemble it column by column.
    const Index rows = sys.m(i) * n;
    Matrix g(rows, total);
    for (Index k = 0; k < total; ++k) {
      Vector unit = Vector::Zero(total);
      unit(k) = 1.0;
      Matrix q;
      std::vector<Matrix> r;
      unpack(unit, q, r);
      Matrix w = q;
      for (int j = 0; j < players; ++j) {
        const Matrix& kj = prof.K(j);
        w += kj.transpose() * r[static_cast<std::size_t>(j)] * kj;
      }
      const Matrix p = solve_lyapunov(acl, 0.5 * (w + w.transpose()));
      g.col(k) = vec(r[static_cast<std::size_t>(i)] * prof.K(i) -
                     sys.B(i).transpose() * p);
    }
    const AffineSet constraint(Vector::Zero(total), nullspace(g));

    std::vector<PsdBlock> blocks{{0, n, 0.0}};
    for (int j = 0; j < players; ++j) {
      blocks.push_back({offsets[static_cast<std::size_t>(j)], sys.m(j),
                        j == i ? options.r_floor : 0.0});
    }

    Vector z0(total);
    z0.head(svec_size(n)) = svec(costs0.Q(i));
    for (int j = 0; j < players; ++j) {
      z0.segment(offsets[static_cast<std::size_t>(j)], svec_size(sys.m(j))) =
          svec(costs0.R(i, j));
    }
    const ConeSearchResult proj = dykstra_project(z0, constraint, blocks, options.cone);
    out.iterations += proj.iterations;
    all_found = all_found && proj.status == ConeSearchStatus::kFound;
    Vector z = proj.point;
    Matrix q;
    std::vector<Matrix> r;
    unpack(z, q, r);
    q = project_psd(q);
    for (int j = 0; j < players; ++j) {
      auto& rj = r[static_cast<std::size_t>(j)];
      rj = project_psd(rj, j == i ? options.r_floor : 0.0);
    }
    Vector z_clean(total);
    z_clean.head(svec_size(n)) = svec(q);
    for (int j = 0; j < players; ++j) {
      z_clean.segment(offsets[static_cast<std::size_t>(j)], svec_size(sys.m(j))) =
          svec(r[static_cast<std::size_t>(j)]);
    }
    dist2 += (z_clean - z0).squaredNorm();
    q_out.push_back(q);
    r_out.push_back(r);
  }
  out.distance = std::sqrt(dist2);
  if (!all_found) return out;
  try {
    CostParameters costs(sys, std::move(q_out), std::move(r_out));
    if (verify_nash(sys, prof, costs, options.tol).is_nash) {
      out.status = FeasibilityStatus::kFeasible;
      out.costs = std::move(costs);
    }
  } catch (const PreconditionError&) {
    // Projection landed outside the admissible costs; stays indeterminate.
  }
  return out;
}

CostParameters fold_cross_penalties(const CostParameters& costs,
                                    const GameSystem& sys,
                                    const StrategyProfile& prof) {
  const int players = sys.num_players();
  std::vector<Matrix> q;
  std::vector<std::vector<Matrix>> r;
  for (int i = 0; i < players; ++i) {
    q.push_back(effective_state_weight(costs, prof.K(), i));
    std::vector<Matrix> row;
    for (int j = 0; j < players; ++j) {
      row.push_back(j == i ? costs.R(i, i)
                           : Matrix::Zero(sys.m(j), sys.m(j)).eval());
    }
    r.push_back(std::move(row));
  }
  return CostParameters(sys, std::move(q), std::move(r));
}

UnfoldResult unfold_cross_penalties(const CostParameters& costs,
                                    const GameSystem& sys,
                                    const StrategyProfile& prof,
                                    const std::vector<std::vector<Matrix>>& r_choice,
                                    double eps) {
  const int players = sys.num_players();
  if (static_cast<int>(r_choice.size()) != players) {
    throw DimensionError("unfold_cross_penalties: R choice must have one row per player");
  }
  std::vector<Matrix> cross(static_cast<std::size_t>(players));
  double lambda = 1.0;
  for (int i = 0; i < players; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (static_cast<int>(r_choice[ui].size()) != players) {
      throw DimensionError("unfold_cross_penalties: ragged R choice");
    }
    if (!is_pd(costs.Q(i))) {
      throw PreconditionError("unfold_cross_penalties: Q[" + std::to_string(i) +
                              "] must be positive definite");
    }
    cross[ui] = Matrix::Zero(sys.n(), sys.n());
    for (int j = 0; j < players; ++j) {
      if (j == i) continue;
      if (costs.R(i, j).norm() != 0.0) {
        throw PreconditionError(
            "unfold_cross_penalties: off-diagonal R must be zero");
      }
      const Matrix& rc = r_choice[ui][static_cast<std::size_t>(j)];
      if (rc.rows() != sys.m(j) || rc.cols() != sys.m(j)) {
        throw DimensionError("unfold_cross_penalties: R choice block size");
      }
      cross[ui] += prof.K(j).transpose() * rc * prof.K(j);
    }
    cross[ui] = 0.5 * (cross[ui] + cross[ui].transpose());
    const double top = symmetric_eigenvalues(cross[ui]).maxCoeff();
    const double bottom = symmetric_eigenvalues(costs.Q(i))(0);
    lambda = std::max(lambda, (1.0 + eps) * top / bottom);
  }

  std::vector<Matrix> q;
  std::vector<std::vector<Matrix>> r;
  for (int i = 0; i < players; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    q.push_back(lambda * costs.Q(i) - cross[ui]);
    std::vector<Matrix> row;
    for (int j = 0; j < players; ++j) {
      row.push_back(j == i ? (lambda * costs.R(i, i)).eval()
                           : r_choice[ui][static_cast<std::size_t>(j)]);
    }
    r.push_back(std::move(row));
  }
  return {CostParameters(sys, std::move(q), std::move(r)), lambda};
}

}  // namespace lqnash
