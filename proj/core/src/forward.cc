#include "lqnash/forward.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace lqnash {

namespace {

std::string tag(const char* what, int i, int j = -1) {
  std::string out = std::string(what) + "[" + std::to_string(i);
  if (j >= 0) out += "][" + std::to_string(j);
  return out + "]";
}

double rel(double residual, std::initializer_list<double> terms) {
  double scale = 1.0;
  for (double t : terms) scale = std::max(scale, t);
  return residual / scale;
}

}  // namespace

CostParameters::CostParameters(const GameSystem& sys, std::vector<Matrix> q,
                               std::vector<std::vector<Matrix>> r) {
  const int players = sys.num_players();
  if (static_cast<int>(q.size()) != players ||
      static_cast<int>(r.size()) != players) {
    throw DimensionError("CostParameters: expected " + std::to_string(players) +
                         " players");
  }
  for (int i = 0; i < players; ++i) {
    Matrix& qi = q[static_cast<std::size_t>(i)];
    if (qi.rows() != sys.n() || qi.cols() != sys.n()) {
      throw DimensionError(tag("CostParameters: Q", i) + " must be " +
                           std::to_string(sys.n()) + "x" + std::to_string(sys.n()));
    }
    require_finite(qi, tag("Q", i));
    qi = symmetrize(qi);
    if (!is_psd(qi)) {
      throw PreconditionError(tag("CostParameters: Q", i) + " is not PSD");
    }
    auto& row = r[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != players) {
      throw DimensionError(tag("CostParameters: R row", i) + " must have " +
                           std::to_string(players) + " entries");
    }
    for (int j = 0; j < players; ++j) {
      Matrix& rij = row[static_cast<std::size_t>(j)];
      if (rij.rows() != sys.m(j) || rij.cols() != sys.m(j)) {
        throw DimensionError(tag("CostParameters: R", i, j) + " must be " +
                             std::to_string(sys.m(j)) + "x" +
                             std::to_string(sys.m(j)));
      }
      require_finite(rij, tag("R", i, j));
      rij = symmetrize(rij);
      const bool ok = (i == j) ? is_pd(rij) : is_psd(rij);
      if (!ok) {
        throw PreconditionError(tag("CostParameters: R", i, j) +
                                (i == j ? " is not positive definite"
                                        : " is not PSD"));
      }
    }
  }
  q_ = std::move(q);
  r_ = std::move(r);
}

CostParameters CostParameters::with_identity_r(const GameSystem& sys,
                                               std::vector<Matrix> q) {
  const int players = sys.num_players();
  std::vector<std::vector<Matrix>> r(static_cast<std::size_t>(players));
  for (int i = 0; i < players; ++i) {
    for (int j = 0; j < players; ++j) {
      const Index mj = sys.m(j);
      r[static_cast<std::size_t>(i)].push_back(
          i == j ? Matrix(Matrix::Identity(mj, mj)) : Matrix(Matrix::Zero(mj, mj)));
    }
  }
  return CostParameters(sys, std::move(q), std::move(r));
}

CostParameters CostParameters::scaled(double alpha) const {
  if (!(alpha > 0.0)) throw PreconditionError("CostParameters::scaled: alpha <= 0");
  CostParameters out;
  for (const Matrix& q : q_) out.q_.push_back(alpha * q);
  for (const auto& row : r_) {
    std::vector<Matrix> scaled_row;
    for (const Matrix& r : row) scaled_row.push_back(alpha * r);
    out.r_.push_back(std::move(scaled_row));
  }
  return out;
}

Matrix effective_state_weight(const CostParameters& costs,
                              std::span<const Matrix> gains, int i) {
  Matrix out = costs.Q(i);
  for (int j = 0; j < costs.num_players(); ++j) {
    if (j == i) continue;
    const Matrix& kj = gains[static_cast<std::size_t>(j)];
    out += kj.transpose() * costs.R(i, j) * kj;
  }
  return 0.5 * (out + out.transpose());
}

NashVerification verify_nash(const GameSystem& sys, const StrategyProfile& prof,
                             const CostParameters& costs, double tol) {
  const int players = sys.num_players();
  if (costs.num_players() != players || prof.num_players() != players) {
    throw DimensionError("verify_nash: player counts differ");
  }
  NashVerification out;
  out.is_nash = true;
  const Matrix acl = closed_loop(sys, prof.K());
  out.cert.hurwitz_margin = -spectral_abscissa(acl);
  for (int i = 0; i < players; ++i) {
    const Matrix& k = prof.K(i);
    const Matrix& b = sys.B(i);
    const Matrix& rii = costs.R(i, i);
    const Matrix q_tilde = effective_state_weight(costs, prof.K(), i);
    const Matrix w = q_tilde + k.transpose() * rii * k;
    const Matrix p = solve_lyapunov(acl, 0.5 * (w + w.transpose()));

    const Matrix rk = rii * k;
    const Matrix bp = b.transpose() * p;
    const double stationarity =
        rel((rk - bp).norm(), {rk.norm(), bp.norm()});

    const Matrix a_tilde = acl + b * k;
    const Matrix pa = p * a_tilde;
    const Matrix gain_term = bp.transpose() * rii.ldlt().solve(bp);
    const Matrix are = pa + pa.transpose() - gain_term + q_tilde;
    const double are_residual =
        rel(are.norm(), {pa.norm(), gain_term.norm(), q_tilde.norm()});

    const double pmin = symmetric_eigenvalues(p)(0);
    const bool psd = is_psd(p);
    const bool ok = stationarity <= tol && are_residual <= tol && psd;
    out.player_ok.push_back(ok);
    out.is_nash = out.is_nash && ok;
    out.cert.P.push_back(p);
    out.cert.are_residuals.push_back(are_residual);
    out.cert.stationarity_residuals.push_back(stationarity);
    out.cert.p_min_eigenvalues.push_back(pmin);
  }
  return out;
}

LqrResult newton_kleinman(const Matrix& a, const Matrix& b, const Matrix& q,
                          const Matrix& r, const Matrix& k0, int max_iterations,
                          double tol) {
  LqrResult out;
  out.K = k0;
  if (!is_hurwitz(a - b * k0)) {
    throw PreconditionError("newton_kleinman: initial gain is not stabilizing");
  }
  const auto r_solver = r.ldlt();
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix acl = a - b * out.K;
    const Matrix w = q + out.K.transpose() * r * out.K;
    out.P = solve_lyapunov(acl, 0.5 * (w + w.transpose()));
    Matrix next = r_solver.solve(b.transpose() * out.P);
    // Keep the iterate stabilizing; exact Newton steps always are, so this
    // only engages under round-off near the stability boundary.
    const Matrix step = next - out.K;
    bool accepted = false;
    for (int j = 0; j <= 10; ++j) {
      const Matrix candidate = out.K + std::ldexp(1.0, -j) * step;
      if (is_hurwitz(a - b * candidate)) {
        next = candidate;
        accepted = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!accepted) return out;
    const double change = (next - out.K).norm();
    out.K = next;
    if (change <= tol * std::max(1.0, out.K.norm())) {
      const Matrix acl_final = a - b * out.K;
      const Matrix w_final = q + out.K.transpose() * r * out.K;
      out.P = solve_lyapunov(acl_final, 0.5 * (w_final + w_final.transpose()));
      out.converged = true;
      return out;
    }
  }
  return out;
}

std::vector<double> coupled_are_residuals(const GameSystem& sys,
                                          const CostParameters& costs,
                                          std::span<const Matrix> gains,
                                          std::span<const Matrix> p) {
  const Matrix acl = closed_loop(sys, gains);
  std::vector<double> out;
  for (int i = 0; i < sys.num_players(); ++i) {
    const Matrix& pi = p[static_cast<std::size_t>(i)];
    const Matrix& ki = gains[static_cast<std::size_t>(i)];
    const Matrix pa = pi * acl;
    Matrix weight = costs.Q(i);
    for (int j = 0; j < sys.num_players(); ++j) {
      const Matrix& kj = gains[static_cast<std::size_t>(j)];
      weight += kj.transpose() * costs.R(i, j) * kj;
    }
    const double lyap = rel((pa + pa.transpose() + weight).norm(),
                            {pa.norm(), weight.norm()});
    const Matrix rk = costs.R(i, i) * ki;
    const Matrix bp = sys.B(i).transpose() * pi;
    const double stat = rel((rk - bp).norm(), {rk.norm(), bp.norm()});
    out.push_back(std::max(lyap, stat));
  }
  return out;
}

CoupledAreResult solve_coupled_are(const GameSystem& sys,
                                   const CostParameters& costs,
                                   const StrategyProfile& init,
                                   const CoupledAreOptions& options) {
  const int players = sys.num_players();
  CoupledAreResult out;
  out.K = init.K();
  out.P.assign(static_cast<std::size_t>(players), Matrix::Zero(sys.n(), sys.n()));

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    double max_gain = 1.0;
    for (int i = 0; i < players; ++i) {
      Matrix a_tilde = sys.A();
      for (int j = 0; j < players; ++j) {
        if (j != i) a_tilde -= sys.B(j) * out.K[static_cast<std::size_t>(j)];
      }
      const Matrix q_tilde = effective_state_weight(costs, out.K, i);
      Matrix& ki = out.K[static_cast<std::size_t>(i)];
      const LqrResult lqr =
          newton_kleinman(a_tilde, sys.B(i), q_tilde, costs.R(i, i), ki,
                          options.max_newton_steps);
      Matrix next = lqr.K;
      if (!lqr.converged) {
        // Damped move toward the partial best response, keeping stability.
        bool moved = false;
        for (int j = 1; j <= 10 && !moved; ++j) {
          const Matrix candidate = ki + std::ldexp(1.0, -j) * (lqr.K - ki);
          if (is_hurwitz(a_tilde - sys.B(i) * candidate)) {
            next = candidate;
            moved = true;
          }
        }
        if (!moved) {
          out.sweeps = sweep + 1;
          return out;
        }
      }
      max_change = std::max(max_change, (next - ki).norm());
      max_gain = std::max(max_gain, next.norm());
      ki = next;
      out.P[static_cast<std::size_t>(i)] = lqr.P;
    }
    out.sweeps = sweep + 1;
    if (max_change <= options.gain_tol * max_gain) {
      // Recompute every P at the final profile.
      const Matrix acl = closed_loop(sys, out.K);
      if (!is_hurwitz(acl)) return out;
      for (int i = 0; i < players; ++i) {
        const Matrix& ki = out.K[static_cast<std::size_t>(i)];
        const Matrix w = effective_state_weight(costs, out.K, i) +
                         ki.transpose() * costs.R(i, i) * ki;
        out.P[static_cast<std::size_t>(i)] =
            solve_lyapunov(acl, 0.5 * (w + w.transpose()));
      }
      out.residuals = coupled_are_residuals(sys, costs, out.K, out.P);
      out.converged = std::all_of(out.residuals.begin(), out.residuals.end(),
                                  [&](double r) { return r <= options.residual_tol; });
      return out;
    }
  }
  return out;
}

double equilibrium_cost(const Matrix& p, const Vector& x0) {
  if (p.rows() != x0.size() || p.cols() != x0.size()) {
    throw DimensionError("equilibrium_cost: P and x0 sizes differ");
  }
  return x0.dot(p * x0);
}

}  // namespace lqnash
