#include "lqnash/inverse.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lqnash {

PolyMatrix build_phi(const CoprimeFactorization& fac) {
  if (!fac.has_feedback()) {
    throw PreconditionError("build_phi: factorization has no feedback attached");
  }
  PolyMatrix phi = fac.D_tilde.paraconjugate() * fac.D_tilde -
                   fac.D.paraconjugate() * fac.D;
  phi.trim();
  return phi;
}

void require_para_hermitian(const PolyMatrix& phi, double tol) {
  if (phi.rows() != phi.cols()) {
    throw DimensionError("para-Hermitian check: matrix is not square");
  }
  const double defect = coeff_distance(phi.paraconjugate(), phi);
  if (defect > tol * std::max(1.0, phi.coeff_norm())) {
    throw PreconditionError("matrix is not para-Hermitian (defect " +
                            std::to_string(defect) + ")");
  }
}

// ---------------------------------------------------------------- circle

namespace {

struct HermitianSample {
  double min_eig = 0.0;
  double norm = 0.0;
};

HermitianSample sample(const PolyMatrix& phi, double w) {
  if (phi.rows() == 0) return {};
  const ComplexMatrix m = phi.eval(Complex(0.0, w));
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), h.norm()};
}

bool is_negative(const HermitianSample& s, double tol) {
  return s.min_eig < -tol * std::max(1.0, s.norm);
}

// Golden-section minimization of the min eigenvalue on [a, b].
std::pair<double, HermitianSample> refine(const PolyMatrix& phi, double a,
                                          double b) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  HermitianSample f1 = sample(phi, x1);
  HermitianSample f2 = sample(phi, x2);
  for (int it = 0; it < 40; ++it) {
    if (f1.min_eig < f2.min_eig) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = sample(phi, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = sample(phi, x2);
    }
  }
  return f1.min_eig < f2.min_eig ? std::pair{x1, f1} : std::pair{x2, f2};
}

// det Phi_I(jw) as a polynomial in x = w^2. Phi_I is para-Hermitian so its
// determinant is even in s.
Poly even_part_in_x(const Poly& det_in_s) {
  std::vector<double> c;
  for (int k = 0; 2 * k <= det_in_s.degree(); ++k) {
    c.push_back((k % 2 == 0 ? 1.0 : -1.0) * det_in_s.coeff(2 * k));
  }
  return Poly(std::move(c));
}

// Returns a frequency where some principal minor of Phi(jw) is negative,
// verified against the eigenvalue test, or nullopt when none exists.
std::optional<double> exact_minor_pass(const PolyMatrix& phi, double tol) {
  const Index m = phi.rows();
  for (Index size = 1; size <= m; ++size) {
    std::vector<Index> idx(static_cast<std::size_t>(size));
    std::vector<bool> mask(static_cast<std::size_t>(m), false);
    std::fill(mask.begin(), mask.begin() + size, true);
    do {
      idx.clear();
      for (Index k = 0; k < m; ++k) {
        if (mask[static_cast<std::size_t>(k)]) idx.push_back(k);
      }
      const Poly g = even_part_in_x(determinant(phi.select(idx, idx)));
      if (g.is_zero()) continue;
      std::vector<double> positive_roots;
      if (g.degree() >= 1) {
        for (const Complex& r : roots(g)) {
          if (r.real() > 0.0 &&
              std::abs(r.imag()) <= 1e-7 * std::max(1.0, std::abs(r))) {
            positive_roots.push_back(r.real());
          }
        }
      }
      std::sort(positive_roots.begin(), positive_roots.end());
      std::vector<double> tests{0.0};
      double prev = 0.0;
      for (double r : positive_roots) {
        tests.push_back(0.5 * (prev + r));
        prev = r;
      }
      tests.push_back(2.0 * prev + 1.0);
      const Poly g_abs = g.abs();
      for (double x : tests) {
        if (g(x) < -tol * g_abs(x)) {
          const double w = std::sqrt(x);
          if (is_negative(sample(phi, w), tol)) return w;
        }
      }
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return std::nullopt;
}

}  // namespace

double min_eigenvalue_at(const PolyMatrix& phi, double w) {
  return sample(phi, w).min_eig;
}

CircleCriterionResult circle_criterion(const PolyMatrix& phi,
                                       const CircleCriterionOptions& options) {
  require_para_hermitian(phi);
  if (options.points < 2 || !(options.w_min > 0.0) ||
      !(options.w_max > options.w_min)) {
    throw PreconditionError("circle_criterion: invalid grid configuration");
  }
  CircleCriterionResult out;
  if (phi.rows() == 0) return out;

  // Sorted grid: -w_max .. -w_min, 0, w_min .. w_max.
  std::vector<double> positive(static_cast<std::size_t>(options.points));
  const double log_span = std::log(options.w_max / options.w_min);
  for (int k = 0; k < options.points; ++k) {
    positive[static_cast<std::size_t>(k)] =
        options.w_min * std::exp(log_span * k / (options.points - 1));
  }
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    out.grid.push_back(-*it);
  }
  out.grid.push_back(0.0);
  out.grid.insert(out.grid.end(), positive.begin(), positive.end());

  std::vector<HermitianSample> values;
  values.reserve(out.grid.size());
  for (double w : out.grid) values.push_back(sample(phi, w));

  // Start from w = 0 so ties resolve to the origin.
  std::size_t best = static_cast<std::size_t>(options.points);
  double best_w = 0.0;
  HermitianSample best_sample = values[best];
  bool negative = false;
  auto consider = [&](double w, const HermitianSample& s) {
    if (is_negative(s, options.tolerance)) {
      if (!negative || s.min_eig < best_sample.min_eig) {
        best_w = w;
        best_sample = s;
      }
      negative = true;
    } else if (!negative && s.min_eig < best_sample.min_eig) {
      best_w = w;
      best_sample = s;
    }
  };
  consider(0.0, values[best]);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k != best) consider(out.grid[k], values[k]);
  }

  // Refine inside every strict local minimum of the sampled curve.
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    if (values[k].min_eig < values[k - 1].min_eig &&
        values[k].min_eig <= values[k + 1].min_eig) {
      const auto [w, s] = refine(phi, out.grid[k - 1], out.grid[k + 1]);
      consider(w, s);
    }
  }
  out.min_eigenvalue = best_sample.min_eig;
  out.min_eigenvalue_at = best_w;
  if (negative) {
    out.ok = false;
    out.witness = best_w;
  }

  if (options.exact_pass && phi.rows() <= 3) {
    out.method = "exact";
    if (out.ok) {
      if (auto w = exact_minor_pass(phi, options.tolerance)) {
        out.ok = false;
        out.witness = *w;
        const HermitianSample s = sample(phi, *w);
        if (s.min_eig < out.min_eigenvalue) {
          out.min_eigenvalue = s.min_eig;
          out.min_eigenvalue_at = *w;
        }
      }
    }
  }
  return out;
}

PhiAnalysis analyze_phi(const CoprimeFactorization& fac,
                        const CircleCriterionOptions& options) {
  PhiAnalysis out;
  out.phi = build_phi(fac);
  const ColumnCompression c = compress_columns(out.phi);
  out.L = c.transform;
  out.phi_tilde = c.compressed;
  out.p = c.rank;
  out.circle = circle_criterion(out.phi, options);
  return out;
}

// ---------------------------------------------------------------- rank

namespace {

// Right singular vector of the smallest singular value, sign-normalized so
// the largest-magnitude entry is positive.
Vector smallest_right_singular_vector(const Matrix& m, double* sigma_min) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Index cols = m.cols();
  Vector v = svd.matrixV().col(cols - 1);
  const Vector& sv = svd.singularValues();
  *sigma_min = sv.size() == cols ? sv(cols - 1) : 0.0;
  Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  if (v(big) < 0) v = -v;
  return v;
}

RankViolation make_violation(const PolyMatrix& t, Index m, Index p, Complex s0,
                             const ComplexVector& null_direction,
                             double delta) {
  RankViolation out;
  out.s0 = s0;
  out.v = ComplexVector::Zero(m);
  const Index q = m - p;
  if (std::abs(s0.imag()) <= delta) {
    // Real point: T(s0) is real, so a real null vector exists.
    double sigma = 0.0;
    const Vector u = smallest_right_singular_vector(t.eval(s0.real()), &sigma);
    out.real_v_available = true;
    out.real_v = Vector::Zero(m);
    out.real_v.tail(q) = u;
    out.v = out.real_v.cast<Complex>();
    return out;
  }
  out.v.tail(q) = null_direction;
  const ComplexMatrix ts = t.eval(s0);
  Matrix stacked(2 * ts.rows(), q);
  stacked.topRows(ts.rows()) = ts.real();
  stacked.bottomRows(ts.rows()) = ts.imag();
  double sigma = 0.0;
  const Vector u = smallest_right_singular_vector(stacked, &sigma);
  const double complex_defect = (ts * null_direction).norm();
  const double budget =
      1e-7 * std::max(1.0, ts.norm()) + 10.0 * complex_defect;
  if (sigma <= budget) {
    out.real_v_available = true;
    out.real_v = Vector::Zero(m);
    out.real_v.tail(q) = u;
  }
  return out;
}

}  // namespace

RankCertificate check_rank_condition(const CoprimeFactorization& fac,
                                     const PhiAnalysis& analysis, double delta) {
  RankCertificate cert;
  const Index m = fac.m();
  const Index p = analysis.p;
  if (p == m) return cert;
  if (analysis.L.rows() != m || analysis.L.cols() != m) {
    throw DimensionError("check_rank_condition: analysis does not match factorization");
  }
  const PolyMatrix dl = fac.D * analysis.L;
  cert.T = dl.middle_cols(p, m - p);
  const RhpRootSearch search = rhp_roots(cert.T, delta);
  if (search.degenerate) {
    cert.degenerate = true;
    cert.satisfied = false;
    // Any real point is a witness; report s = 1.
    cert.violations.push_back(
        make_violation(cert.T, m, p, Complex(1.0, 0.0), ComplexVector(), delta));
    return cert;
  }
  for (const RhpRoot& root : search.roots) {
    RankViolation v =
        make_violation(cert.T, m, p, root.location, root.null_direction, delta);
    v.boundary = root.boundary;
    v.multiplicity = root.multiplicity;
    if (v.real_v_available) {
      cert.satisfied = false;
    } else {
      cert.complex_only_violations = true;
    }
    cert.violations.push_back(std::move(v));
  }
  return cert;
}

// ---------------------------------------------------------------- Kalman

std::string to_string(KalmanStatus status) {
  switch (status) {
    case KalmanStatus::kFeasible:
      return "feasible";
    case KalmanStatus::kUnsolvable:
      return "unsolvable";
    case KalmanStatus::kInfeasible:
      return "infeasible";
    case KalmanStatus::kIndeterminate:
      return "indeterminate";
  }
  return "unknown";
}

namespace {

// Coefficients of p stacked as [s^0 block; s^1 block; ...], entries row-major.
Vector flatten(const PolyMatrix& p, int max_degree) {
  Vector out = Vector::Zero((max_degree + 1) * p.rows() * p.cols());
  Index idx = 0;
  for (int d = 0; d <= max_degree; ++d) {
    for (Index i = 0; i < p.rows(); ++i) {
      for (Index j = 0; j < p.cols(); ++j) out(idx++) = p(i, j).coeff(d);
    }
  }
  return out;
}

// Images of the svec basis of n x n symmetric matrices under X -> F~ X F.
std::vector<PolyMatrix> congruence_images(const PolyMatrix& f) {
  const Index n = f.rows();
  const PolyMatrix f_para = f.paraconjugate();
  std::vector<PolyMatrix> out;
  for (Index k = 0; k < svec_size(n); ++k) {
    out.push_back(f_para * svec_basis(n, k) * f);
  }
  return out;
}

PolyMatrix congruence(const PolyMatrix& f, const Matrix& x) {
  return f.paraconjugate() * x * f;
}

int max_degree_of(const std::vector<PolyMatrix>& ps, int floor) {
  int d = floor;
  for (const PolyMatrix& p : ps) d = std::max(d, p.degree());
  return std::max(d, 0);
}

void attach_spectral_factor(const CoprimeFactorization& fac, KalmanSolution& sol) {
  sol.N_factor = sqrt_psd(sol.Q) * fac.S;
}

}  // namespace

double kalman_residual(const CoprimeFactorization& fac, const Matrix& q,
                       const Matrix& r) {
  if (!fac.has_feedback()) {
    throw PreconditionError("kalman_residual: factorization has no feedback");
  }
  const PolyMatrix lhs = congruence(fac.D_tilde, r) - congruence(fac.D, r);
  return coeff_distance(lhs, congruence(fac.S, q));
}

KalmanSolution solve_kalman_Q(const CoprimeFactorization& fac,
                              const PolyMatrix& phi,
                              const KalmanOptions& options) {
  require_para_hermitian(phi);
  const Index n = fac.n();
  const Index m = fac.m();
  if (phi.rows() != m) throw DimensionError("solve_kalman_Q: Phi size mismatch");

  KalmanSolution out;
  out.restricted = !fac.controllable;
  out.R = Matrix::Identity(m, m);
  out.scale = phi.coeff_norm();

  const std::vector<PolyMatrix> images = congruence_images(fac.S);
  const int deg = max_degree_of(images, phi.degree());
  Matrix e(static_cast<Index>((deg + 1) * m * m), svec_size(n));
  for (Index k = 0; k < svec_size(n); ++k) e.col(k) = flatten(images[k], deg);
  const Vector f = flatten(phi, deg);
  out.kernel_dim = equilibrated_nullspace(e).cols();

  const std::optional<AffineSet> affine = equilibrated_solve(e, f);
  if (!affine) {
    out.status = KalmanStatus::kUnsolvable;
    const Vector ls = e.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(f);
    out.Q = smat(ls, n);
    out.residual = coeff_distance(congruence(fac.S, out.Q), phi);
    return out;
  }

  const PsdBlock blocks[] = {{0, n, 0.0}};
  const ConeSearchResult search = find_interior_cone_point(*affine, blocks, options.cone);
  out.iterations = search.iterations;
  out.Q = smat(search.point, n);
  switch (search.status) {
    case ConeSearchStatus::kFound:
      out.Q = clamp_psd(out.Q);
      out.status = KalmanStatus::kFeasible;
      break;
    case ConeSearchStatus::kPointOutsideCone:
      out.status = KalmanStatus::kInfeasible;
      break;
    case ConeSearchStatus::kIndeterminate: {
      // Dual side: {(Q, t) : S~ Q S = t Phi, Q >= 0, t > 0} is empty.
      Matrix homogeneous(e.rows(), e.cols() + 1);
      homogeneous << e, -f;
      const PsdBlock dual_blocks[] = {{0, n, 0.0}, {svec_size(n), 1, 0.0}};
      out.status = find_infeasibility_certificate(equilibrated_nullspace(homogeneous),
                                                  dual_blocks, 1, options.cone)
                       ? KalmanStatus::kInfeasible
                       : KalmanStatus::kIndeterminate;
      break;
    }
  }
  out.residual = coeff_distance(congruence(fac.S, out.Q), phi);
  const double budget =
      options.residual_tol * out.scale + 1e-14 * out.Q.norm() * fac.S.coeff_norm() *
                                             fac.S.coeff_norm();
  if (out.status == KalmanStatus::kFeasible && out.residual > budget) {
    out.status = KalmanStatus::kIndeterminate;
  }
  out.psd_ok = out.status == KalmanStatus::kFeasible;
  if (out.psd_ok) attach_spectral_factor(fac, out);
  return out;
}

KalmanSolution solve_kalman_general(const CoprimeFactorization& fac,
                                    const KalmanOptions& options) {
  if (!fac.has_feedback()) {
    throw PreconditionError("solve_kalman_general: factorization has no feedback");
  }
  const Index n = fac.n();
  const Index m = fac.m();
  const Index nq = svec_size(n);
  const Index nr = svec_size(m);

  KalmanSolution out;
  out.restricted = !fac.controllable;

  const std::vector<PolyMatrix> q_images = congruence_images(fac.S);
  const std::vector<PolyMatrix> rt_images = congruence_images(fac.D_tilde);
  const std::vector<PolyMatrix> r_images = congruence_images(fac.D);
  std::vector<PolyMatrix> r_diff;
  for (Index k = 0; k < nr; ++k) r_diff.push_back(rt_images[k] - r_images[k]);
  const int deg = std::max(max_degree_of(q_images, 0), max_degree_of(r_diff, 0));

  Matrix e(static_cast<Index>((deg + 1) * m * m), nq + nr);
  for (Index k = 0; k < nq; ++k) e.col(k) = -flatten(q_images[k], deg);
  for (Index k = 0; k < nr; ++k) e.col(nq + k) = flatten(r_diff[k], deg);
  // Balance the two unknown groups so the rank decision is not dominated by
  // whichever side has larger coefficients.
  const double q_scale = std::max(e.leftCols(nq).norm(), 1e-300);
  const double r_scale = std::max(e.rightCols(nr).norm(), 1e-300);
  e.leftCols(nq) /= q_scale;
  e.rightCols(nr) /= r_scale;

  const Matrix kernel = equilibrated_nullspace(e);
  out.kernel_dim = kernel.cols();

  auto unscale = [&](const Vector& y) {
    Vector x = y;
    x.head(nq) /= q_scale;
    x.tail(nr) /= r_scale;
    return x;
  };
  auto finish = [&](const Vector& x_scaled) {
    const Vector x = unscale(x_scaled);
    out.Q = smat(x.head(nq), n);
    out.R = smat(x.tail(nr), m);
  };

  // trace(R) = m in the scaled coordinates.
  Matrix trace_row = Matrix::Zero(1, nq + nr);
  {
    Index k = 0;
    for (Index j = 0; j < m; ++j) {
      trace_row(0, nq + k) = 1.0 / r_scale;
      k += m - j;
    }
  }
  const Vector target = Vector::Constant(1, static_cast<double>(m));
  const AffineSet cone_span(Vector::Zero(nq + nr), kernel);
  const std::optional<AffineSet> slice = cone_span.restrict(trace_row, target);
  if (!slice) {
    out.status = KalmanStatus::kInfeasible;
    out.Q = Matrix::Zero(n, n);
    out.R = Matrix::Zero(m, m);
    out.residual = 0.0;
    return out;
  }

  // Cone floors are expressed in scaled coordinates: R_scaled = r_scale * R.
  const PsdBlock blocks[] = {{0, n, 0.0}, {nq, m, options.r_floor * r_scale}};
  // Q block is stored as q_scale * Q; PSD-ness is scale invariant.
  const ConeSearchResult search = find_interior_cone_point(*slice, blocks, options.cone);
  out.iterations = search.iterations;
  finish(search.point);
  switch (search.status) {
    case ConeSearchStatus::kFound:
      out.Q = clamp_psd(out.Q);
      out.R = clamp_psd(out.R, options.r_floor);
      out.status = KalmanStatus::kFeasible;
      break;
    case ConeSearchStatus::kPointOutsideCone:
      out.status = KalmanStatus::kInfeasible;
      break;
    case ConeSearchStatus::kIndeterminate:
      // Dual side: no kernel point has Q >= 0 and R > 0.
      out.status = find_infeasibility_certificate(kernel, blocks, 1, options.cone)
                       ? KalmanStatus::kInfeasible
                       : KalmanStatus::kIndeterminate;
      break;
  }
  const PolyMatrix lhs =
      congruence(fac.D_tilde, out.R) - congruence(fac.D, out.R);
  out.scale = std::max(lhs.coeff_norm(), congruence(fac.S, out.Q).coeff_norm());
  out.residual = coeff_distance(lhs, congruence(fac.S, out.Q));
  if (out.status == KalmanStatus::kFeasible &&
      out.residual > options.residual_tol * std::max(out.scale, 1e-300)) {
    out.status = KalmanStatus::kIndeterminate;
  }
  out.psd_ok = out.status == KalmanStatus::kFeasible;
  if (out.psd_ok) attach_spectral_factor(fac, out);
  return out;
}

// ---------------------------------------------------------------- pipeline

CoprimeFactorization player_factorization(const GameSystem& sys,
                                          const StrategyProfile& prof, int i) {
  const ReducedSystem red = reduced_system(sys, prof, i);
  return attach_feedback(right_coprime_factorization(red.a_tilde, sys.B(i)),
                         prof.K(i));
}

InducibilityAnalysis is_nash_inducible(const GameSystem& sys,
                                       const StrategyProfile& prof,
                                       const InverseOptions& options) {
  InducibilityAnalysis out;
  std::vector<int> players;
  if (options.player) {
    if (*options.player < 0 || *options.player >= sys.num_players()) {
      throw DimensionError("is_nash_inducible: player index " +
                           std::to_string(*options.player) + " out of range");
    }
    players.push_back(*options.player);
  } else {
    players.resize(static_cast<std::size_t>(sys.num_players()));
    std::iota(players.begin(), players.end(), 0);
  }

  for (int i : players) {
    PlayerAnalysis pa;
    pa.player = i;
    try {
      pa.fac = player_factorization(sys, prof, i);
      pa.phi = analyze_phi(pa.fac, options.circle);
      pa.rank = check_rank_condition(pa.fac, pa.phi);
      pa.inducible = pa.phi.circle.ok && pa.rank.satisfied;
      if (options.solve_kalman) {
        pa.kalman = options.mode == KalmanMode::kQOnly
                        ? solve_kalman_Q(pa.fac, pa.phi.phi, options.kalman)
                        : solve_kalman_general(pa.fac, options.kalman);
      }
    } catch (const NumericalError& e) {
      throw NumericalError("player " + std::to_string(i) + ": " + e.what());
    }
    if (!pa.fac.controllable) {
      pa.warnings.push_back(
          "uncontrollable subspace present; Kalman-equation statements are "
          "restricted to the controllable part");
    }
    if (pa.phi.circle.method == "sampled") {
      pa.warnings.push_back("circle criterion checked on a frequency grid only (sampled)");
    }
    for (const RankViolation& v : pa.rank.violations) {
      if (v.boundary) {
        pa.warnings.push_back("rank-condition root on the imaginary axis");
        break;
      }
    }
    if (pa.rank.complex_only_violations) {
      pa.warnings.push_back(
          "rank-condition violation with complex witness only (excluded from "
          "the strict verdict)");
    }
    if (pa.rank.degenerate) {
      pa.warnings.push_back("rank condition degenerate: T(s) is rank deficient everywhere");
    }
    out.inducible = out.inducible && pa.inducible;
    out.players.push_back(std::move(pa));
  }
  return out;
}

}  // namespace lqnash
