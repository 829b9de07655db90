#include <map>

#include "cli/commands.h"

namespace lqnash::cli {

namespace {

// 1 + sqrt(2) is written with 17 significant digits so that it parses to
// the nearest double.
constexpr const char* kThreeState = R"({
  "schema_version": "1",
  "comment": "Two-player game whose profile satisfies the circle criterion but violates the rank condition for player 0 at s = 1.",
  "A": [[1, 0, 1], [0, 0, 1], [0, 1, 0]],
  "players": [
    {
      "B": [[1, 0], [0, 1], [0, 0]],
      "K_dagger": [[1, 0, 1], [0, 2.4142135623730949, 2.4142135623730949]]
    },
    {
      "B": [[1], [0], [0]],
      "K_dagger": [[1, 0, 0]]
    }
  ]
}
)";

constexpr const char* kScalarFeasible = R"({
  "schema_version": "1",
  "comment": "a = 1, b = 1, k = 3: inducible with Q = 3, R = 1, P = 3.",
  "A": [[1]],
  "players": [
    {"B": [[1]], "K_dagger": [[3]]}
  ]
}
)";

constexpr const char* kScalarInfeasible = R"({
  "schema_version": "1",
  "comment": "a = 1, b = 1, k = 1.5: Phi = -0.75, not inducible.",
  "A": [[1]],
  "players": [
    {"B": [[1]], "K_dagger": [[1.5]]}
  ]
}
)";

constexpr const char* kTwoPlayerScalar = R"({
  "schema_version": "1",
  "comment": "a = 1, b_1 = b_2 = 1, k_1 = k_2 = 1 is the Nash equilibrium for Q_i = R_ii = 1, R_ij = 0, with P_i = 1.",
  "A": [[1]],
  "players": [
    {"B": [[1]], "K_dagger": [[1]], "Q": [[1]], "R_row": [[[1]], [[0]]]},
    {"B": [[1]], "K_dagger": [[1]], "Q": [[1]], "R_row": [[[0]], [[1]]]}
  ],
  "x0": [2]
}
)";

const std::map<std::string, const char*>& bundled() {
  static const std::map<std::string, const char*> examples = {
      {"three_state", kThreeState},
      {"scalar_feasible", kScalarFeasible},
      {"scalar_infeasible", kScalarInfeasible},
      {"two_player_scalar", kTwoPlayerScalar},
  };
  return examples;
}

}  // namespace

std::vector<std::string> example_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : bundled()) out.push_back(name);
  return out;
}

CommandResult cmd_example(const std::string& name) {
  CommandResult out;
  const auto it = bundled().find(name);
  if (it == bundled().end()) {
    out.exit_code = kExitInput;
    out.diagnostics = "unknown example '" + name + "'; available:";
    for (const std::string& n : example_names()) out.diagnostics += " " + n;
    out.diagnostics += "\n";
    return out;
  }
  out.output = it->second;
  return out;
}

}  // namespace lqnash::cli
