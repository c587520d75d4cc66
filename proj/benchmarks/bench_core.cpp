#include <benchmark/benchmark.h>

#include <random>

#include "../tests/helpers.hpp"
#include "fairvq/codebook.hpp"
#include "fairvq/decorrelate.hpp"
#include "fairvq/tradeoff.hpp"

using namespace fairvq;

namespace {

void BM_ProjectSimplex(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = testutil::uniform(rng, -3, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_simplex(v));
  }
}
BENCHMARK(BM_ProjectSimplex)->Arg(16)->Arg(64)->Arg(256);

void BM_SolveTradeoffLp(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const auto joint = testutil::random_joint(cells, rng);
  const ProbabilityViews v = views(joint);
  const auto book = testutil::random_codebook(cells, 3, rng);
  const auto w = build_neighbor_matrix(book, 3.5, 1.0);
  FairnessBudget budget;
  budget.eod = 0.05;
  budget.ind = 0.05;
  const auto bayes = bayes_scores_unaware(v);
  const LpProblem lp = assemble_tradeoff_lp(v, bayes.scores, w, budget, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_lp(lp));
  }
}
BENCHMARK(BM_SolveTradeoffLp)->Arg(16)->Arg(64);

void BM_LloydTraining(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  SampleTable table;
  table.schema.columns = {{"x", ColumnKind::Continuous, {}},
                          {"y", ColumnKind::Continuous, {}}};
  table.schema.group_column = "g";
  table.schema.group_values = {"a", "b"};
  table.schema.label_column = "l";
  for (int i = 0; i < 2000; ++i) {
    table.rows.push_back(
        {{testutil::uniform(rng, -1, 1), testutil::uniform(rng, -1, 1)}, 0, 0});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_codebook(table, cells, 0.01, 7));
  }
}
BENCHMARK(BM_LloydTraining)->Arg(8)->Arg(32);

void BM_LagrangianEval(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const auto joint = testutil::random_joint(cells, rng);
  const ProbabilityViews v = views(joint);
  const auto book = testutil::random_codebook(cells, 3, rng);
  const auto w = build_neighbor_matrix(book, 3.5, 1.0);
  DecorrelationConfig config;
  config.budget.dp = 0.05;
  Vec s(cells);
  for (int i = 0; i < cells; ++i) s(i) = testutil::unit(rng);
  const ScoreVector scores{s, false};
  const Vec rho = Vec::Zero(2 * (4 + w.rows()));
  const Mat t = testutil::random_stochastic(cells, cells, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lagrangian(t, rho, config, scores, v, w));
  }
}
BENCHMARK(BM_LagrangianEval)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
