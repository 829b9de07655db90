#include "cli/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cli/json_writer.h"
#include "lqnash/errors.h"
#include "lqnash/feasibility.h"
#include "lqnash/forward.h"

namespace lqnash::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kDefaultTol = 1e-8;
constexpr double kDecades = 6.0;  // the circle grid spans 1e-3 .. 1e3

double resolve_tol(const Problem& problem, const CliOptions& options) {
  if (options.tol) return *options.tol;
  if (problem.tol) return *problem.tol;
  return kDefaultTol;
}

InverseOptions inverse_options(const Problem& problem, const CliOptions& options) {
  InverseOptions out;
  out.mode = options.mode;
  out.player = options.player;
  out.kalman.residual_tol = resolve_tol(problem, options);
  if (options.grid_per_decade) {
    out.circle.points = static_cast<int>(kDecades * *options.grid_per_decade);
  }
  return out;
}

FeasibilityOptions oracle_options(const Problem& problem, const CliOptions& options) {
  FeasibilityOptions out;
  out.mode = options.mode == KalmanMode::kQOnly ? FeasibilityMode::kQOnly
                                                : FeasibilityMode::kGeneral;
  out.tol = resolve_tol(problem, options);
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

std::string fmt(double v) { return format_double(v); }

std::string fmt_vector(const Vector& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(v(i));
  }
  return out + "]";
}

std::string fmt_matrix(const Matrix& m) {
  std::string out = "[";
  for (Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ", ";
    out += fmt_vector(m.row(i).transpose());
  }
  return out + "]";
}

std::vector<int> selected_players(const GameSystem& sys, const CliOptions& options) {
  if (options.player) return {*options.player};
  std::vector<int> out;
  for (int i = 0; i < sys.num_players(); ++i) out.push_back(i);
  return out;
}

// --- check ------------------------------------------------------------------

enum class Verdict { kPositive, kNegative, kIndeterminate, kSkipped };

struct OracleSummary {
  Verdict verdict = Verdict::kSkipped;
  std::optional<FeasibilityResult> result;
};

OracleSummary run_oracle(const GameSystem& sys, const StrategyProfile& prof,
                         const std::vector<int>& players,
                         const FeasibilityOptions& options) {
  OracleSummary out;
  out.result = solve_feasibility_projection(sys, prof, options);
  bool all_feasible = true;
  bool any_infeasible = false;
  for (int i : players) {
    const FeasibilityStatus s = out.result->player_status[static_cast<std::size_t>(i)];
    all_feasible = all_feasible && s == FeasibilityStatus::kFeasible;
    any_infeasible =
        any_infeasible || is_infeasible(s);
  }
  // A per-player point that fails the joint membership check is not a
  // certificate.
  if (out.result->status == FeasibilityStatus::kIndeterminate) {
    all_feasible = false;
  }
  out.verdict = any_infeasible ? Verdict::kNegative
                : all_feasible ? Verdict::kPositive
                               : Verdict::kIndeterminate;
  return out;
}

ordered_json violation_to_json(const RankViolation& v) {
  ordered_json out;
  out["s0"] = {v.s0.real(), v.s0.imag()};
  out["real_v_available"] = v.real_v_available;
  out["v"] = v.real_v_available ? vector_to_json(v.real_v) : ordered_json(nullptr);
  out["boundary"] = v.boundary;
  out["multiplicity"] = v.multiplicity;
  return out;
}

ordered_json kalman_to_json(const KalmanSolution& k) {
  ordered_json out;
  out["status"] = to_string(k.status);
  out["residual"] = k.residual;
  out["kernel_dim"] = static_cast<long long>(k.kernel_dim);
  out["psd_ok"] = k.psd_ok;
  const bool has_point = k.status == KalmanStatus::kFeasible;
  out["Q"] = has_point ? matrix_to_json(k.Q) : ordered_json(nullptr);
  out["R"] = has_point ? matrix_to_json(k.R) : ordered_json(nullptr);
  return out;
}

ordered_json player_to_json(const PlayerAnalysis& pa,
                            const std::optional<FeasibilityResult>& oracle) {
  ordered_json out;
  out["player"] = pa.player;
  const CircleCriterionResult& c = pa.phi.circle;
  out["circle_ok"] = c.ok;
  out["circle_method"] = c.method;
  out["circle_witness"] = c.witness ? ordered_json(*c.witness) : ordered_json(nullptr);
  out["circle_min_eigenvalue"] = c.min_eigenvalue;
  out["circle_min_eigenvalue_at"] = c.min_eigenvalue_at;
  out["p"] = static_cast<long long>(pa.phi.p);
  out["rank_ok"] = pa.rank.satisfied;
  out["rank_degenerate"] = pa.rank.degenerate;
  ordered_json certs = ordered_json::array();
  for (const RankViolation& v : pa.rank.violations) certs.push_back(violation_to_json(v));
  out["rank_certificates"] = std::move(certs);
  out["inducible"] = pa.inducible;
  out["kalman"] = pa.kalman ? kalman_to_json(*pa.kalman) : ordered_json(nullptr);
  out["oracle_status"] =
      oracle ? ordered_json(to_string(
                   oracle->player_status[static_cast<std::size_t>(pa.player)]))
             : ordered_json(nullptr);
  out["warnings"] = pa.warnings;
  return out;
}

std::string frequency_label(bool inducible) {
  return inducible ? "inducible" : "not_inducible";
}

std::string oracle_label(Verdict v) {
  switch (v) {
    case Verdict::kPositive:
      return "feasible";
    case Verdict::kNegative:
      return "infeasible";
    case Verdict::kIndeterminate:
      return "indeterminate";
    case Verdict::kSkipped:
      break;
  }
  return "skipped";
}

std::string check_text(const ordered_json& report) {
  std::ostringstream out;
  out << "frequency-domain verdict: " << report["verdict_frequency"].get<std::string>()
      << "\n";
  out << "time-domain oracle:       " << report["verdict_oracle"].get<std::string>()
      << "\n";
  out << "disagreement:             "
      << (report["disagreement"].get<bool>() ? "yes" : "no") << "\n";
  for (const auto& p : report["players"]) {
    out << "player " << p["player"].get<int>() << ":\n";
    out << "  circle criterion: " << (p["circle_ok"].get<bool>() ? "pass" : "FAIL")
        << " (" << p["circle_method"].get<std::string>()
        << ", min eigenvalue " << fmt(p["circle_min_eigenvalue"].get<double>())
        << " at w = " << fmt(p["circle_min_eigenvalue_at"].get<double>()) << ")";
    if (!p["circle_witness"].is_null()) {
      out << ", witness w = " << fmt(p["circle_witness"].get<double>());
    }
    out << "\n";
    out << "  rank condition:   " << (p["rank_ok"].get<bool>() ? "pass" : "FAIL")
        << " (p = " << p["p"].get<long long>() << ")\n";
    for (const auto& v : p["rank_certificates"]) {
      out << "    violation at s0 = " << fmt(v["s0"][0].get<double>()) << " + "
          << fmt(v["s0"][1].get<double>()) << "j";
      if (!v["v"].is_null()) {
        Vector vv(static_cast<Index>(v["v"].size()));
        for (std::size_t k = 0; k < v["v"].size(); ++k) {
          vv(static_cast<Index>(k)) = v["v"][k].get<double>();
        }
        out << ", v = " << fmt_vector(vv);
      } else {
        out << ", complex null direction only";
      }
      out << "\n";
    }
    if (!p["kalman"].is_null()) {
      out << "  kalman equation:  " << p["kalman"]["status"].get<std::string>()
          << " (residual " << fmt(p["kalman"]["residual"].get<double>())
          << ", kernel dim " << p["kalman"]["kernel_dim"].get<long long>() << ")\n";
    }
    if (!p["oracle_status"].is_null()) {
      out << "  oracle:           " << p["oracle_status"].get<std::string>() << "\n";
    }
    for (const auto& w : p["warnings"]) {
      out << "  warning: " << w.get<std::string>() << "\n";
    }
  }
  for (const auto& w : report["warnings"]) {
    out << "warning: " << w.get<std::string>() << "\n";
  }
  return out.str();
}

CommandResult check_impl(const Problem& problem, const CliOptions& options) {
  CommandResult out;
  const GameSystem sys = make_system(problem);
  const StrategyProfile prof = make_profile(problem, sys);
  if (options.player && (*options.player < 0 || *options.player >= sys.num_players())) {
    throw InputError("--player: index " + std::to_string(*options.player) +
                     " out of range");
  }
  const std::vector<int> players = selected_players(sys, options);

  const auto t0 = std::chrono::steady_clock::now();
  const InducibilityAnalysis analysis =
      is_nash_inducible(sys, prof, inverse_options(problem, options));
  const double frequency_ms = elapsed_ms(t0);

  OracleSummary oracle;
  double oracle_ms = 0.0;
  if (options.oracle) {
    const auto t1 = std::chrono::steady_clock::now();
    oracle = run_oracle(sys, prof, players, oracle_options(problem, options));
    oracle_ms = elapsed_ms(t1);
  }

  const Verdict frequency =
      analysis.inducible ? Verdict::kPositive : Verdict::kNegative;
  const bool oracle_determinate =
      oracle.verdict == Verdict::kPositive || oracle.verdict == Verdict::kNegative;
  const bool disagreement = oracle_determinate && oracle.verdict != frequency;

  ordered_json report;
  report["command"] = "check";
  report["verdict_frequency"] = frequency_label(analysis.inducible);
  report["verdict_oracle"] = oracle_label(oracle.verdict);
  report["disagreement"] = disagreement;
  ordered_json players_json = ordered_json::array();
  for (const PlayerAnalysis& pa : analysis.players) {
    players_json.push_back(player_to_json(pa, oracle.result));
  }
  report["players"] = std::move(players_json);
  ordered_json warnings = ordered_json::array();
  if (disagreement) {
    warnings.push_back(
        "the frequency-domain verdict and the time-domain oracle disagree; both "
        "results are reported");
  }
  if (oracle.verdict == Verdict::kIndeterminate) {
    warnings.push_back("time-domain oracle reached its iteration cap without a verdict");
  }
  report["warnings"] = std::move(warnings);
  if (options.timings) {
    ordered_json t;
    t["frequency"] = frequency_ms;
    t["oracle"] = options.oracle ? ordered_json(oracle_ms) : ordered_json(nullptr);
    report["timings_ms"] = std::move(t);
  } else {
    report["timings_ms"] = nullptr;
  }

  out.output = options.format == OutputFormat::kJson ? dump_json(report)
                                                     : check_text(report);
  if (disagreement) {
    out.exit_code = kExitDisagreement;
    out.diagnostics = "frequency-domain verdict '" + frequency_label(analysis.inducible) +
                      "' disagrees with the time-domain oracle '" +
                      oracle_label(oracle.verdict) + "'\n";
  } else {
    out.exit_code = analysis.inducible ? kExitOk : kExitNegative;
  }
  return out;
}

// --- solve ------------------------------------------------------------------

struct Candidate {
  std::string method;
  std::vector<Matrix> Q;
  std::vector<std::vector<Matrix>> R;
};

std::optional<Candidate> kalman_candidate(const GameSystem& sys,
                                          const InducibilityAnalysis& analysis) {
  Candidate c;
  c.method = "kalman";
  const int players = sys.num_players();
  for (int i = 0; i < players; ++i) {
    const PlayerAnalysis& pa = analysis.players[static_cast<std::size_t>(i)];
    if (!pa.kalman || pa.kalman->status != KalmanStatus::kFeasible) return std::nullopt;
    c.Q.push_back(pa.kalman->Q);
    std::vector<Matrix> row;
    for (int j = 0; j < players; ++j) {
      row.push_back(j == i ? pa.kalman->R : Matrix(Matrix::Zero(sys.m(j), sys.m(j))));
    }
    c.R.push_back(std::move(row));
  }
  return c;
}

Candidate oracle_candidate(const ThetaPoint& pt) {
  return Candidate{"time_domain_oracle", pt.Q, pt.R};
}

struct VerifiedCosts {
  Candidate candidate;
  CostParameters costs;
  NashVerification verification;
};

std::optional<VerifiedCosts> try_candidate(const Candidate& c, const GameSystem& sys,
                                           const StrategyProfile& prof, double tol) {
  try {
    CostParameters costs(sys, c.Q, c.R);
    NashVerification v = verify_nash(sys, prof, costs, tol);
    if (!v.is_nash) return std::nullopt;
    return VerifiedCosts{c, std::move(costs), std::move(v)};
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // e.g. a Q that is PSD only up to the search tolerance
  }
}

void attach_costs(Problem& problem, const CostParameters& costs,
                  const NashVerification& v) {
  const int players = costs.num_players();
  for (int i = 0; i < players; ++i) {
    PlayerSpec& p = problem.players[static_cast<std::size_t>(i)];
    p.Q = costs.Q(i);
    std::vector<Matrix> row;
    for (int j = 0; j < players; ++j) row.push_back(costs.R(i, j));
    p.R_row = std::move(row);
    p.P = v.cert.P[static_cast<std::size_t>(i)];
  }
}

ordered_json residuals_json(const NashVerification& v) {
  ordered_json out;
  out["are"] = v.cert.are_residuals;
  out["stationarity"] = v.cert.stationarity_residuals;
  out["p_min_eigenvalue"] = v.cert.p_min_eigenvalues;
  out["hurwitz_margin"] = v.cert.hurwitz_margin;
  return out;
}

std::string solve_text(const ordered_json& doc) {
  std::ostringstream out;
  const ordered_json& s = doc["solution"];
  out << "status: " << s["status"].get<std::string>() << "\n";
  if (s.contains("method")) out << "method: " << s["method"].get<std::string>() << "\n";
  if (s.contains("verdict_frequency")) {
    out << "frequency-domain verdict: " << s["verdict_frequency"].get<std::string>()
        << "\n";
  }
  if (s.contains("distance")) out << "distance: " << fmt(s["distance"].get<double>()) << "\n";
  if (s.contains("failing_player") && !s["failing_player"].is_null()) {
    out << "failing player: " << s["failing_player"].get<int>() << "\n";
  }
  if (s.contains("witness") && !s["witness"].is_null()) {
    out << "circle witness w = " << fmt(s["witness"].get<double>())
        << ", min eigenvalue of Phi(jw) = "
        << fmt(s["phi_min_eigenvalue"].get<double>()) << "\n";
  }
  for (std::size_t i = 0; i < doc["players"].size(); ++i) {
    const ordered_json& p = doc["players"][i];
    if (!p.contains("Q")) continue;
    out << "player " << i << ":\n";
    auto mat = [](const ordered_json& j) {
      Matrix m(static_cast<Index>(j.size()), static_cast<Index>(j[0].size()));
      for (std::size_t r = 0; r < j.size(); ++r) {
        for (std::size_t c = 0; c < j[r].size(); ++c) {
          m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
        }
      }
      return m;
    };
    out << "  Q = " << fmt_matrix(mat(p["Q"])) << "\n";
    for (std::size_t j = 0; j < p["R_row"].size(); ++j) {
      out << "  R[" << i << "][" << j << "] = " << fmt_matrix(mat(p["R_row"][j])) << "\n";
    }
    out << "  P = " << fmt_matrix(mat(p["P"])) << "\n";
  }
  return out.str();
}

CommandResult emit_solution(Problem problem, ordered_json solution, int exit_code,
                            const CliOptions& options, std::string diagnostics) {
  ordered_json doc = problem_to_json(problem);
  doc["solution"] = std::move(solution);
  CommandResult out;
  out.exit_code = exit_code;
  out.output = options.format == OutputFormat::kJson ? dump_json(doc) : solve_text(doc);
  out.diagnostics = std::move(diagnostics);
  return out;
}

CommandResult nearest_impl(const Problem& problem, const CliOptions& options,
                           const std::vector<PlayerSpec>& costs0_spec) {
  const GameSystem sys = make_system(problem);
  const StrategyProfile prof = make_profile(problem, sys);
  const CostParameters costs0 = make_costs(costs0_spec, sys);
  const double tol = resolve_tol(problem, options);
  const NearestResult nearest =
      nearest_params(costs0, sys, prof, oracle_options(problem, options));

  ordered_json solution;
  solution["status"] = to_string(nearest.status);
  solution["method"] = "nearest";
  if (is_infeasible(nearest.status)) {
    return emit_solution(problem, solution, kExitNegative, options,
                         "no cost parameters make the profile a Nash equilibrium\n");
  }
  if (!nearest.costs) {
    return emit_solution(problem, solution, kExitNumerical, options,
                         "nearest-parameter projection did not converge\n");
  }
  const NashVerification v = verify_nash(sys, prof, *nearest.costs, tol);
  Problem augmented = problem;
  attach_costs(augmented, *nearest.costs, v);
  solution["distance"] = nearest.distance;
  solution["iterations"] = nearest.iterations;
  solution["verified"] = v.is_nash;
  solution["residuals"] = residuals_json(v);
  if (!v.is_nash) {
    solution["status"] = "unverified";
    return emit_solution(augmented, solution, kExitNumerical, options,
                         "projected costs failed verification\n");
  }
  return emit_solution(augmented, solution, kExitOk, options, "");
}

CommandResult solve_impl(const Problem& problem, const CliOptions& options) {
  const GameSystem sys = make_system(problem);
  const StrategyProfile prof = make_profile(problem, sys);
  const double tol = resolve_tol(problem, options);
  InverseOptions inv = inverse_options(problem, options);
  inv.player.reset();
  const InducibilityAnalysis analysis = is_nash_inducible(sys, prof, inv);

  std::optional<VerifiedCosts> found;
  if (auto c = kalman_candidate(sys, analysis)) found = try_candidate(*c, sys, prof, tol);
  std::optional<FeasibilityResult> oracle;
  if (!found) {
    oracle = solve_feasibility_projection(sys, prof, oracle_options(problem, options));
    if (oracle->point) found = try_candidate(oracle_candidate(*oracle->point), sys, prof, tol);
  }

  ordered_json solution;
  solution["verdict_frequency"] = frequency_label(analysis.inducible);
  if (found) {
    Problem augmented = problem;
    attach_costs(augmented, found->costs, found->verification);
    solution["status"] = "feasible";
    solution["method"] = found->candidate.method;
    solution["mode"] = options.mode == KalmanMode::kQOnly ? "q-only" : "general";
    solution["verified"] = true;
    solution["residuals"] = residuals_json(found->verification);
    if (!analysis.inducible) {
      return emit_solution(
          augmented, solution, kExitDisagreement, options,
          "verified Nash-inducing costs were found although the frequency-domain "
          "verdict is 'not_inducible'\n");
    }
    return emit_solution(augmented, solution, kExitOk, options, "");
  }

  // No verified costs: report the first failing player and its witness.
  std::optional<int> failing;
  for (const PlayerAnalysis& pa : analysis.players) {
    const bool kalman_negative =
        pa.kalman && (pa.kalman->status == KalmanStatus::kInfeasible ||
                      pa.kalman->status == KalmanStatus::kUnsolvable);
    if (!pa.inducible || kalman_negative) {
      failing = pa.player;
      break;
    }
  }
  bool certified = false;
  if (oracle && is_infeasible(oracle->status)) {
    certified = true;
  }
  for (const PlayerAnalysis& pa : analysis.players) {
    if (pa.kalman && (pa.kalman->status == KalmanStatus::kInfeasible ||
                      pa.kalman->status == KalmanStatus::kUnsolvable)) {
      certified = true;
    }
  }
  solution["status"] = certified ? "infeasible" : "indeterminate";
  solution["failing_player"] = failing ? ordered_json(*failing) : ordered_json(nullptr);
  solution["witness"] = nullptr;
  solution["phi_min_eigenvalue"] = nullptr;
  solution["rank_certificates"] = ordered_json::array();
  if (failing) {
    const PlayerAnalysis& pa = analysis.players[static_cast<std::size_t>(*failing)];
    if (pa.phi.circle.witness) {
      solution["witness"] = *pa.phi.circle.witness;
      solution["phi_min_eigenvalue"] =
          min_eigenvalue_at(pa.phi.phi, *pa.phi.circle.witness);
    }
    for (const RankViolation& v : pa.rank.violations) {
      solution["rank_certificates"].push_back(violation_to_json(v));
    }
  }
  std::string diag = certified ? "no Nash-inducing cost parameters exist"
                               : "no verified cost parameters were found";
  if (failing) diag += " (player " + std::to_string(*failing) + ")";
  return emit_solution(problem, solution, certified ? kExitNegative : kExitNumerical,
                       options, diag + "\n");
}

// --- verify -----------------------------------------------------------------

CommandResult verify_impl(const Problem& problem, const CliOptions& options) {
  if (!problem.has_costs()) {
    throw InputError("players[*].Q / R_row: verify requires costs for every player");
  }
  const GameSystem sys = make_system(problem);
  const StrategyProfile prof = make_profile(problem, sys);
  std::vector<PlayerSpec> specs = problem.players;
  const CostParameters costs = make_costs(specs, sys);
  const double tol = resolve_tol(problem, options);
  const NashVerification v = verify_nash(sys, prof, costs, tol);
  const Matrix acl = closed_loop(sys, prof.K());

  ordered_json report;
  report["command"] = "verify";
  report["is_nash"] = v.is_nash;
  report["tol"] = tol;
  report["hurwitz_margin"] = v.cert.hurwitz_margin;
  ordered_json players = ordered_json::array();
  for (int i = 0; i < sys.num_players(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    ordered_json p;
    p["player"] = i;
    p["ok"] = static_cast<bool>(v.player_ok[ui]);
    p["are_residual"] = v.cert.are_residuals[ui];
    p["stationarity_residual"] = v.cert.stationarity_residuals[ui];
    p["p_min_eigenvalue"] = v.cert.p_min_eigenvalues[ui];
    p["P"] = matrix_to_json(v.cert.P[ui]);
    if (problem.x0) p["cost_at_x0"] = equilibrium_cost(v.cert.P[ui], *problem.x0);
    if (problem.players[ui].P) {
      // Raw identity residuals with the P from the file; informative only,
      // the verdict uses the P recomputed from the Lyapunov equation.
      const Matrix& ps = *problem.players[ui].P;
      Matrix identity = costs.Q(i) + ps * acl + acl.transpose() * ps;
      for (int j = 0; j < sys.num_players(); ++j) {
        identity += prof.K(j).transpose() * costs.R(i, j) * prof.K(j);
      }
      p["supplied_P_identity_residual"] = identity.norm();
      p["supplied_P_stationarity_residual"] =
          (costs.R(i, i) * prof.K(i) - sys.B(i).transpose() * ps).norm();
    }
    players.push_back(std::move(p));
  }
  report["players"] = std::move(players);

  CommandResult out;
  out.exit_code = v.is_nash ? kExitOk : kExitNegative;
  if (options.format == OutputFormat::kJson) {
    out.output = dump_json(report);
  } else {
    std::ostringstream text;
    text << "nash equilibrium: " << (v.is_nash ? "yes" : "no") << "\n";
    text << "hurwitz margin: " << fmt(v.cert.hurwitz_margin) << "\n";
    for (const auto& p : report["players"]) {
      text << "player " << p["player"].get<int>() << ": "
           << (p["ok"].get<bool>() ? "ok" : "FAIL")
           << "  ARE residual " << fmt(p["are_residual"].get<double>())
           << "  stationarity residual " << fmt(p["stationarity_residual"].get<double>())
           << "  min eig P " << fmt(p["p_min_eigenvalue"].get<double>());
      if (p.contains("cost_at_x0")) text << "  cost " << fmt(p["cost_at_x0"].get<double>());
      if (p.contains("supplied_P_identity_residual")) {
        text << "  identity residual with supplied P "
             << fmt(p["supplied_P_identity_residual"].get<double>());
      }
      text << "\n";
    }
    out.output = text.str();
  }
  return out;
}

template <typename F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    return {kExitInput, "", std::string("input error: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    // DimensionError / PreconditionError raised by the model.
    return {kExitInput, "", std::string("input error: ") + e.what() + "\n"};
  } catch (const NumericalError& e) {
    return {kExitNumerical, "", std::string("numerical failure: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kExitNumerical, "", std::string("numerical failure: ") + e.what() + "\n"};
  }
}

}  // namespace

CommandResult cmd_check(const Problem& problem, const CliOptions& options) {
  return guarded([&] { return check_impl(problem, options); });
}

CommandResult cmd_solve(const Problem& problem, const CliOptions& options,
                        const std::optional<std::vector<PlayerSpec>>& nearest_costs) {
  return guarded([&] {
    return nearest_costs ? nearest_impl(problem, options, *nearest_costs)
                         : solve_impl(problem, options);
  });
}

CommandResult cmd_verify(const Problem& problem, const CliOptions& options) {
  return guarded([&] { return verify_impl(problem, options); });
}

}  // namespace lqnash::cli
