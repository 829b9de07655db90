// Timings for the main computational kernels: dense Lyapunov solves, the
// coprime factorization, the circle criterion, the full inducibility
// analysis and the time-domain oracle on random Nash games.

#include <optional>
#include <vector>

#include <benchmark/benchmark.h>

#include "lqnash/feasibility.h"
#include "lqnash/inverse.h"
#include "test_util.h"

namespace lqnash {
namespace {

// A random Nash game with the requested state dimension (fixed seed).
testing::RandomGame game_of_size(int n, int players) {
  testing::Rng rng(static_cast<std::uint64_t>(1000 + 10 * n + players));
  const testing::RandomGameOptions opt{n, players, 2, false};
  for (;;) {
    std::optional<testing::RandomGame> g = testing::random_game(rng, opt);
    if (g && g->sys.n() == n && g->sys.num_players() == players) return std::move(*g);
  }
}

void BM_Lyapunov(benchmark::State& state) {
  const Index n = state.range(0);
  testing::Rng rng(1);
  Matrix a = rng.matrix(n, n);
  a -= (spectral_abscissa(a) + 1.0) * Matrix::Identity(n, n);
  const Matrix w = rng.psd(n, n, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(a, w));
}
BENCHMARK(BM_Lyapunov)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Factorization(benchmark::State& state) {
  const Index n = state.range(0);
  testing::Rng rng(2);
  const Matrix a = rng.matrix(n, n);
  const Matrix b = rng.matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(right_coprime_factorization(a, b));
}
BENCHMARK(BM_Factorization)->Arg(2)->Arg(4)->Arg(8);

void BM_CircleCriterion(benchmark::State& state) {
  const testing::RandomGame g = game_of_size(static_cast<int>(state.range(0)), 1);
  const PolyMatrix phi = build_phi(player_factorization(g.sys, g.nash, 0));
  CircleCriterionOptions opt;
  opt.exact_pass = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(circle_criterion(phi, opt));
}
BENCHMARK(BM_CircleCriterion)->Args({2, 0})->Args({2, 1})->Args({4, 0})->Args({4, 1});

void BM_InducibilityAnalysis(benchmark::State& state) {
  const testing::RandomGame g = game_of_size(static_cast<int>(state.range(0)), 2);
  InverseOptions opt;
  opt.mode = state.range(1) != 0 ? KalmanMode::kGeneral : KalmanMode::kQOnly;
  for (auto _ : state) benchmark::DoNotOptimize(is_nash_inducible(g.sys, g.nash, opt));
}
BENCHMARK(BM_InducibilityAnalysis)
    ->Args({2, 0})
    ->Args({2, 1})
    ->Args({4, 0})
    ->Args({4, 1})
    ->Unit(benchmark::kMillisecond);

void BM_FeasibilityOracle(benchmark::State& state) {
  const testing::RandomGame g = game_of_size(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_feasibility_projection(g.sys, g.nash));
  }
}
BENCHMARK(BM_FeasibilityOracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CoupledRiccati(benchmark::State& state) {
  const testing::RandomGame g = game_of_size(static_cast<int>(state.range(0)), 2);
  std::vector<Matrix> seed = g.nash.K();
  for (Matrix& k : seed) k *= 1.05;
  if (!is_stabilizing(g.sys, seed)) seed = g.nash.K();
  const StrategyProfile init(g.sys, seed);
  for (auto _ : state) benchmark::DoNotOptimize(solve_coupled_are(g.sys, g.costs, init));
}
BENCHMARK(BM_CoupledRiccati)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lqnash

BENCHMARK_MAIN();
