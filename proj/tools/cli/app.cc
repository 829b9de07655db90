#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.h"

namespace lqnash::cli {

namespace {

struct RawFlags {
  std::string problem_path;
  std::string example_name;
  std::string output_path;
  std::string nearest_path;
  std::string format = "json";
  std::string mode = "general";
  double tol = 0.0;
  int grid = 0;
  int player = -1;
  bool no_oracle = false;
  bool timings = false;
};

void add_common(CLI::App* cmd, RawFlags& flags) {
  cmd->add_option("problem", flags.problem_path, "Problem JSON file")->required();
  cmd->add_option("--tol", flags.tol, "Residual tolerance (default 1e-8)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--mode", flags.mode,
                  "Cost family: q-only (R_ii = I) or general (R_ii free)")
      ->check(CLI::IsMember({"q-only", "general"}));
  cmd->add_option("-o,--output", flags.output_path, "Write the report to this file");
}

CliOptions to_options(const RawFlags& flags, const CLI::App* cmd) {
  CliOptions out;
  if (cmd->count("--tol") > 0) out.tol = flags.tol;
  if (cmd->get_option_no_throw("--grid") != nullptr && cmd->count("--grid") > 0) {
    out.grid_per_decade = flags.grid;
  }
  out.format = flags.format == "text" ? OutputFormat::kText : OutputFormat::kJson;
  out.mode = flags.mode == "q-only" ? KalmanMode::kQOnly : KalmanMode::kGeneral;
  out.oracle = !flags.no_oracle;
  if (flags.player >= 0) out.player = flags.player;
  out.timings = flags.timings;
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash inducibility of feedback profiles in LQ differential games", "lqnash"};
  app.require_subcommand(1);
  RawFlags flags;

  CLI::App* check = app.add_subcommand(
      "check", "Decide whether the profile can be made a Nash equilibrium");
  add_common(check, flags);
  check->add_option("--grid", flags.grid, "Circle-criterion grid points per decade")
      ->check(CLI::PositiveNumber);
  check->add_flag("--no-oracle", flags.no_oracle, "Skip the time-domain oracle");
  check->add_option("--player", flags.player, "Restrict the analysis to one player")
      ->check(CLI::NonNegativeNumber);
  check->add_flag("--timings", flags.timings, "Report wall-clock timings");

  CLI::App* solve =
      app.add_subcommand("solve", "Recover Nash-inducing cost parameters");
  add_common(solve, flags);
  solve->add_option("--grid", flags.grid, "Circle-criterion grid points per decade")
      ->check(CLI::PositiveNumber);
  solve->add_option("--nearest", flags.nearest_path,
                    "Project these costs onto the Nash-inducing set");

  CLI::App* verify = app.add_subcommand(
      "verify", "Check the coupled Riccati certificates for the supplied costs");
  add_common(verify, flags);

  CLI::App* example = app.add_subcommand("example", "Write a bundled problem file");
  example->add_option("name", flags.example_name, "Example name")->required();
  example->add_option("-o,--output", flags.output_path, "Write to this file");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }

  CommandResult result;
  if (example->parsed()) {
    result = cmd_example(flags.example_name);
  } else {
    CLI::App* cmd = check->parsed() ? check : solve->parsed() ? solve : verify;
    const CliOptions options = to_options(flags, cmd);
    Problem problem;
    std::optional<std::vector<PlayerSpec>> nearest;
    try {
      problem = load_problem(flags.problem_path);
      if (!flags.nearest_path.empty()) nearest = parse_costs(read_file(flags.nearest_path));
    } catch (const InputError& e) {
      err << "input error: " << e.what() << "\n";
      return kExitInput;
    }
    if (check->parsed()) {
      result = cmd_check(problem, options);
    } else if (solve->parsed()) {
      result = cmd_solve(problem, options, nearest);
    } else {
      result = cmd_verify(problem, options);
    }
  }

  err << result.diagnostics;
  if (!result.output.empty()) {
    if (flags.output_path.empty()) {
      out << result.output;
    } else {
      std::ofstream file(flags.output_path, std::ios::binary);
      if (!file) {
        err << "input error: " << flags.output_path << ": cannot open for writing\n";
        return kExitInput;
      }
      file << result.output;
    }
  }
  return result.exit_code;
}

}  // namespace lqnash::cli
