#pragma once

// Problem files: JSON documents describing a game, a target profile and
// optionally cost parameters.
//
//   {"schema_version": "1",
//    "A": [[...]],
//    "players": [{"B": [[...]], "K_dagger": [[...]],
//                 "Q": [[...]], "R_row": [[[...]], ...], "P": [[...]]}],
//    "x0": [...], "tol": 1e-8}
//
// Matrices are row-major nested arrays. Q, R_row, P, x0 and tol are
// optional; a "solution" object written by `solve` is accepted and ignored.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lqnash/forward.h"
#include "lqnash/realization.h"

namespace lqnash::cli {

/// Malformed or inadmissible input; the message starts with the field path.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlayerSpec {
  Matrix B;
  Matrix K;
  std::optional<Matrix> Q;
  std::optional<std::vector<Matrix>> R_row;
  std::optional<Matrix> P;
};

struct Problem {
  Matrix A;
  std::vector<PlayerSpec> players;
  std::optional<Vector> x0;
  std::optional<double> tol;

  bool has_costs() const;
};

Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

/// Costs-only documents for `solve --nearest`: {"players": [{"Q", "R_row"}]}
/// (a full problem file is accepted as well).
std::vector<PlayerSpec> parse_costs(const std::string& text);

GameSystem make_system(const Problem& problem);
StrategyProfile make_profile(const Problem& problem, const GameSystem& sys);
/// Requires Q and R_row for every player.
CostParameters make_costs(const std::vector<PlayerSpec>& players,
                          const GameSystem& sys);

nlohmann::ordered_json matrix_to_json(const Matrix& m);
nlohmann::ordered_json vector_to_json(const Vector& v);

/// Serializes a problem (including optional fields that are present).
nlohmann::ordered_json problem_to_json(const Problem& problem);

std::string read_file(const std::string& path);

}  // namespace lqnash::cli
