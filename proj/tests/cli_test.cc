#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/commands.h"
#include "cli/problem.h"

namespace lqnash::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "lqnash");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lqnash_cli_test_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  std::string example(const std::string& name) const {
    const Invocation r = run({"example", name});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return write(name + ".json", r.out);
  }

  fs::path dir_;
};

TEST_F(CliTest, ExamplesAreValidProblems) {
  for (const std::string& name : example_names()) {
    const Invocation r = run({"example", name});
    ASSERT_EQ(r.code, kExitOk) << name;
    EXPECT_NO_THROW(parse_problem(r.out)) << name;
    const Json doc = Json::parse(r.out);
    EXPECT_EQ(doc["schema_version"], "1");
  }
  const Invocation unknown = run({"example", "no_such_example"});
  EXPECT_EQ(unknown.code, kExitInput);
  EXPECT_NE(unknown.err.find("three_state"), std::string::npos);
}

TEST_F(CliTest, ExampleOutputFileMatchesStdout) {
  const Invocation to_stdout = run({"example", "scalar_feasible"});
  const Invocation to_file = run({"example", "scalar_feasible", "-o", path("out.json")});
  ASSERT_EQ(to_file.code, kExitOk);
  std::ifstream in(path("out.json"), std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), to_stdout.out);
}

TEST_F(CliTest, CheckExitCodes) {
  EXPECT_EQ(run({"check", example("scalar_feasible")}).code, kExitOk);
  EXPECT_EQ(run({"check", example("scalar_infeasible")}).code, kExitNegative);
  EXPECT_EQ(run({"check", example("two_player_scalar")}).code, kExitOk);
  const Invocation disagreement = run({"check", example("three_state")});
  EXPECT_EQ(disagreement.code, kExitDisagreement);
  const Json report = Json::parse(disagreement.out);
  EXPECT_EQ(report["verdict_frequency"], "not_inducible");
  EXPECT_EQ(report["verdict_oracle"], "feasible");
  EXPECT_EQ(report["disagreement"], true);
  // Without the oracle there is nothing to disagree with.
  EXPECT_EQ(run({"check", example("three_state"), "--no-oracle"}).code, kExitNegative);
}

TEST_F(CliTest, CheckReportContents) {
  const Invocation r = run({"check", example("scalar_infeasible")});
  const Json report = Json::parse(r.out);
  EXPECT_EQ(report["command"], "check");
  ASSERT_EQ(report["players"].size(), 1u);
  const Json& p = report["players"][0];
  EXPECT_EQ(p["circle_ok"], false);
  EXPECT_NEAR(p["circle_witness"].get<double>(), 0.0, 1e-12);
  EXPECT_TRUE(report["timings_ms"].is_null());
  const Json timed = Json::parse(run({"check", example("scalar_infeasible"), "--timings"}).out);
  EXPECT_FALSE(timed["timings_ms"].is_null());
}

TEST_F(CliTest, OutputIsDeterministic) {
  const std::string file = example("three_state");
  const Invocation a = run({"check", file});
  const Invocation b = run({"check", file});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run({"solve", file}).out, run({"solve", file}).out);
}

TEST_F(CliTest, SolveThenVerifyRoundTrip) {
  for (const std::string& name : {"scalar_feasible", "two_player_scalar"}) {
    const Invocation solved = run({"solve", example(name)});
    ASSERT_EQ(solved.code, kExitOk) << name << ": " << solved.err;
    const std::string out = write(std::string(name) + "_solved.json", solved.out);
    const Json doc = Json::parse(solved.out);
    EXPECT_EQ(doc["solution"]["verified"], true);
    const Invocation verified = run({"verify", out});
    EXPECT_EQ(verified.code, kExitOk) << verified.out;
    EXPECT_EQ(Json::parse(verified.out)["is_nash"], true);
  }
}

TEST_F(CliTest, SolveReportsInfeasibility) {
  const Invocation r = run({"solve", example("scalar_infeasible")});
  EXPECT_EQ(r.code, kExitNegative);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["solution"]["status"], "infeasible");
}

TEST_F(CliTest, SolveNearest) {
  const std::string costs =
      write("costs.json", R"({"players": [{"Q": [[5]], "R_row": [[[1]]]}]})");
  const Invocation r = run({"solve", example("scalar_feasible"), "--nearest", costs});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_NEAR(doc["players"][0]["Q"][0][0].get<double>(), 4.8, 1e-6);
  EXPECT_NEAR(doc["players"][0]["R_row"][0][0][0].get<double>(), 1.6, 1e-6);
}

TEST_F(CliTest, VerifyDetectsWrongCosts) {
  const std::string file = write("wrong.json", R"({
    "schema_version": "1", "A": [[1]],
    "players": [{"B": [[1]], "K_dagger": [[3]], "Q": [[2]], "R_row": [[[1]]]}]})");
  const Invocation r = run({"verify", file});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_EQ(Json::parse(r.out)["is_nash"], false);
}

TEST_F(CliTest, InputErrorsNameTheField) {
  const Invocation missing = run({"check", path("does_not_exist.json")});
  EXPECT_EQ(missing.code, kExitInput);

  const Invocation malformed = run({"check", write("bad.json", "{not json")});
  EXPECT_EQ(malformed.code, kExitInput);
  EXPECT_NE(malformed.err.find("parse error"), std::string::npos);

  const Invocation shape = run({"check", write("shape.json", R"({
    "schema_version": "1", "A": [[1]],
    "players": [{"B": [[1]], "K_dagger": [[1, 2]]}]})")});
  EXPECT_EQ(shape.code, kExitInput);
  EXPECT_NE(shape.err.find("players[0].K_dagger"), std::string::npos);

  const Invocation unknown = run({"check", write("unknown.json", R"({
    "schema_version": "1", "A": [[1]], "extra": 1,
    "players": [{"B": [[1]], "K_dagger": [[3]]}]})")});
  EXPECT_EQ(unknown.code, kExitInput);
  EXPECT_NE(unknown.err.find("extra"), std::string::npos);

  const Invocation version = run({"check", write("version.json", R"({
    "schema_version": "2", "A": [[1]], "players": [{"B": [[1]], "K_dagger": [[3]]}]})")});
  EXPECT_EQ(version.code, kExitInput);

  const Invocation unstable = run({"check", write("unstable.json", R"({
    "schema_version": "1", "A": [[1]], "players": [{"B": [[1]], "K_dagger": [[0.5]]}]})")});
  EXPECT_EQ(unstable.code, kExitInput);

  // verify needs costs.
  EXPECT_EQ(run({"verify", example("scalar_feasible")}).code, kExitInput);
  // Bad flags.
  EXPECT_EQ(run({"check", example("scalar_feasible"), "--tol", "-1"}).code, kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
}

TEST_F(CliTest, TextFormatAndHelp) {
  const Invocation text = run({"check", example("three_state"), "--format", "text"});
  EXPECT_EQ(text.code, kExitDisagreement);
  EXPECT_NE(text.out.find("disagreement"), std::string::npos);
  EXPECT_FALSE(Json::accept(text.out));
  const Invocation help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("check"), std::string::npos);
}

TEST_F(CliTest, PlayerSelection) {
  const Invocation r = run({"check", example("two_player_scalar"), "--player", "1"});
  EXPECT_EQ(r.code, kExitOk);
  const Json doc = Json::parse(r.out);
  ASSERT_EQ(doc["players"].size(), 1u);
  EXPECT_EQ(doc["players"][0]["player"], 1);
  EXPECT_EQ(run({"check", example("two_player_scalar"), "--player", "5"}).code, kExitInput);
}

}  // namespace
}  // namespace lqnash::cli
