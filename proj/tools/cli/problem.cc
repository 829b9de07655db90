#include "cli/problem.h"

#include <fstream>
#include <set>
#include <sstream>

namespace lqnash::cli {

using Json = nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

void check_keys(const Json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) fail(path + "." + it.key(), "unknown field");
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

Matrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].empty()) fail(rp, "expected a non-empty row array");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) {
      fail(rp, "row has " + std::to_string(j[r].size()) + " entries, expected " +
                   std::to_string(cols));
    }
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          number(j[r][c], path + "[" + std::to_string(r) + "][" +
                              std::to_string(c) + "]");
    }
  }
  return m;
}

Vector parse_vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Index>(k)) = number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

void require_size(const Matrix& m, Index rows, Index cols, const std::string& path) {
  if (m.rows() != rows || m.cols() != cols) {
    fail(path, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) +
                   " matrix, got " + std::to_string(m.rows()) + "x" +
                   std::to_string(m.cols()));
  }
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("<document>: JSON parse error: ") + e.what());
  }
}

std::vector<PlayerSpec> parse_player_costs(const Json& players, bool require_dynamics) {
  if (!players.is_array() || players.empty()) {
    fail("players", "expected a non-empty array");
  }
  std::vector<PlayerSpec> out;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string path = "players[" + std::to_string(i) + "]";
    const Json& p = players[i];
    if (!p.is_object()) fail(path, "expected an object");
    check_keys(p, path, {"B", "K_dagger", "Q", "R_row", "P"});
    PlayerSpec spec;
    if (require_dynamics) {
      if (!p.contains("B")) fail(path + ".B", "missing field");
      if (!p.contains("K_dagger")) fail(path + ".K_dagger", "missing field");
    }
    if (p.contains("B")) spec.B = parse_matrix(p["B"], path + ".B");
    if (p.contains("K_dagger")) spec.K = parse_matrix(p["K_dagger"], path + ".K_dagger");
    if (p.contains("Q")) spec.Q = parse_matrix(p["Q"], path + ".Q");
    if (p.contains("P")) spec.P = parse_matrix(p["P"], path + ".P");
    if (p.contains("R_row")) {
      const Json& row = p["R_row"];
      if (!row.is_array() || row.empty()) {
        fail(path + ".R_row", "expected a non-empty array of matrices");
      }
      std::vector<Matrix> blocks;
      for (std::size_t j = 0; j < row.size(); ++j) {
        blocks.push_back(
            parse_matrix(row[j], path + ".R_row[" + std::to_string(j) + "]"));
      }
      spec.R_row = std::move(blocks);
    }
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace

bool Problem::has_costs() const {
  for (const PlayerSpec& p : players) {
    if (!p.Q || !p.R_row) return false;
  }
  return !players.empty();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem parse_problem(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) fail("<document>", "expected a JSON object");
  check_keys(doc, "<document>",
             {"schema_version", "A", "players", "x0", "tol", "solution", "comment"});
  if (!doc.contains("schema_version")) fail("schema_version", "missing field");
  if (!doc["schema_version"].is_string() || doc["schema_version"] != "1") {
    fail("schema_version", "expected \"1\"");
  }
  if (!doc.contains("A")) fail("A", "missing field");
  if (!doc.contains("players")) fail("players", "missing field");

  Problem out;
  out.A = parse_matrix(doc["A"], "A");
  if (out.A.rows() != out.A.cols()) fail("A", "expected a square matrix");
  const Index n = out.A.rows();
  out.players = parse_player_costs(doc["players"], true);
  const Index players = static_cast<Index>(out.players.size());
  for (Index i = 0; i < players; ++i) {
    const std::string path = "players[" + std::to_string(i) + "]";
    PlayerSpec& p = out.players[static_cast<std::size_t>(i)];
    if (p.B.rows() != n) {
      fail(path + ".B", "expected " + std::to_string(n) + " rows, got " +
                            std::to_string(p.B.rows()));
    }
    require_size(p.K, p.B.cols(), n, path + ".K_dagger");
    if (p.Q) require_size(*p.Q, n, n, path + ".Q");
    if (p.P) require_size(*p.P, n, n, path + ".P");
  }
  for (Index i = 0; i < players; ++i) {
    const std::string path = "players[" + std::to_string(i) + "]";
    const PlayerSpec& p = out.players[static_cast<std::size_t>(i)];
    if (!p.R_row) continue;
    if (static_cast<Index>(p.R_row->size()) != players) {
      fail(path + ".R_row", "expected " + std::to_string(players) + " blocks");
    }
    for (Index j = 0; j < players; ++j) {
      const Index mj = out.players[static_cast<std::size_t>(j)].B.cols();
      require_size((*p.R_row)[static_cast<std::size_t>(j)], mj, mj,
                   path + ".R_row[" + std::to_string(j) + "]");
    }
  }
  if (doc.contains("x0")) {
    out.x0 = parse_vector(doc["x0"], "x0");
    if (out.x0->size() != n) fail("x0", "expected " + std::to_string(n) + " entries");
  }
  if (doc.contains("tol")) {
    out.tol = number(doc["tol"], "tol");
    if (!(*out.tol > 0.0)) fail("tol", "must be positive");
  }
  return out;
}

Problem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::vector<PlayerSpec> parse_costs(const std::string& text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) fail("<document>", "expected a JSON object");
  if (!doc.contains("players")) fail("players", "missing field");
  std::vector<PlayerSpec> out = parse_player_costs(doc["players"], false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::string path = "players[" + std::to_string(i) + "]";
    if (!out[i].Q) fail(path + ".Q", "missing field");
    if (!out[i].R_row) fail(path + ".R_row", "missing field");
  }
  return out;
}

GameSystem make_system(const Problem& problem) {
  std::vector<Matrix> b;
  for (const PlayerSpec& p : problem.players) b.push_back(p.B);
  try {
    return GameSystem(problem.A, std::move(b));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("players[*].B / A: ") + e.what());
  }
}

StrategyProfile make_profile(const Problem& problem, const GameSystem& sys) {
  std::vector<Matrix> k;
  for (const PlayerSpec& p : problem.players) k.push_back(p.K);
  try {
    return StrategyProfile(sys, std::move(k));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("players[*].K_dagger: ") + e.what());
  }
}

CostParameters make_costs(const std::vector<PlayerSpec>& players,
                          const GameSystem& sys) {
  if (static_cast<int>(players.size()) != sys.num_players()) {
    fail("players", "expected " + std::to_string(sys.num_players()) +
                        " players in the cost document");
  }
  std::vector<Matrix> q;
  std::vector<std::vector<Matrix>> r;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string path = "players[" + std::to_string(i) + "]";
    if (!players[i].Q) fail(path + ".Q", "missing field (costs required)");
    if (!players[i].R_row) fail(path + ".R_row", "missing field (costs required)");
    q.push_back(*players[i].Q);
    r.push_back(*players[i].R_row);
  }
  try {
    return CostParameters(sys, std::move(q), std::move(r));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("players[*].Q / R_row: ") + e.what());
  }
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

ordered_json vector_to_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json problem_to_json(const Problem& problem) {
  ordered_json out;
  out["schema_version"] = "1";
  out["A"] = matrix_to_json(problem.A);
  ordered_json players = ordered_json::array();
  for (const PlayerSpec& p : problem.players) {
    ordered_json pj;
    pj["B"] = matrix_to_json(p.B);
    pj["K_dagger"] = matrix_to_json(p.K);
    if (p.Q) pj["Q"] = matrix_to_json(*p.Q);
    if (p.R_row) {
      ordered_json row = ordered_json::array();
      for (const Matrix& r : *p.R_row) row.push_back(matrix_to_json(r));
      pj["R_row"] = std::move(row);
    }
    if (p.P) pj["P"] = matrix_to_json(*p.P);
    players.push_back(std::move(pj));
  }
  out["players"] = std::move(players);
  if (problem.x0) out["x0"] = vector_to_json(*problem.x0);
  if (problem.tol) out["tol"] = *problem.tol;
  return out;
}

}  // namespace lqnash::cli
