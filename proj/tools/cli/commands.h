#pragma once

// The CLI subcommands as pure functions of their inputs, so they can be
// exercised without a process boundary.
//
// Exit codes: 0 inducible / verified, 1 not inducible / not verified,
// 2 input error, 3 numerical failure, 4 the frequency-domain and
// time-domain verdicts disagree.

#include <optional>
#include <string>
#include <vector>

#include "cli/problem.h"
#include "lqnash/inverse.h"

namespace lqnash::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDisagreement = 4;

enum class OutputFormat { kJson, kText };

struct CliOptions {
  /// Residual tolerance; falls back to the problem's "tol", then 1e-8.
  std::optional<double> tol;
  /// Circle-criterion grid density in points per decade.
  std::optional<int> grid_per_decade;
  OutputFormat format = OutputFormat::kJson;
  bool oracle = true;
  KalmanMode mode = KalmanMode::kGeneral;
  std::optional<int> player;
  /// Include wall-clock timings (off by default to keep reports
  /// byte-identical across runs).
  bool timings = false;
};

struct CommandResult {
  int exit_code = kExitOk;
  /// The report (stdout or -o).
  std::string output;
  /// Human-oriented notes (stderr).
  std::string diagnostics;
};

/// Frequency-domain verdict plus (unless disabled) the time-domain oracle.
CommandResult cmd_check(const Problem& problem, const CliOptions& options);

/// Recovers cost parameters. With nearest_costs, projects them onto the
/// Nash-inducing set instead.
CommandResult cmd_solve(const Problem& problem, const CliOptions& options,
                        const std::optional<std::vector<PlayerSpec>>& nearest_costs =
                            std::nullopt);

/// Checks the coupled Riccati certificates for the costs in the file.
CommandResult cmd_verify(const Problem& problem, const CliOptions& options);

/// The bundled problem file text.
CommandResult cmd_example(const std::string& name);

std::vector<std::string> example_names();

/// Full command line front end. Writes the report to `out` (or the -o path)
/// and diagnostics to `err`; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lqnash::cli
