#include <benchmark/benchmark.h>

#include "asbench/evaluation.hpp"
#include "asbench/learners.hpp"
#include "asbench/rng.hpp"
#include "asbench/stats.hpp"

namespace {

using namespace asbench;

Scenario synthetic(std::size_t algorithms, std::size_t instances) {
  CounterRng rng(1);
  Scenario s;
  s.id = "bench";
  s.cutoff = 100.0;
  for (std::size_t a = 0; a < algorithms; ++a) s.algorithms.push_back("a" + std::to_string(a));
  for (std::size_t i = 0; i < instances; ++i) s.instances.push_back("i" + std::to_string(i));
  s.feature_names = {"f"};
  FeatureGroup g{"g", {0}, "g_cost", {}};
  for (std::size_t i = 0; i < instances; ++i) {
    for (std::size_t a = 0; a < algorithms; ++a) {
      const bool ok = rng.below(3) != 0;
      s.runs.emplace_back(RunRecord{ok ? rng.uniform() * 100.0 : 100.0, ok ? RunStatus::ok : RunStatus::timeout});
    }
    s.features.emplace_back(rng.uniform());
    g.cost.emplace_back(rng.uniform());
  }
  s.feature_groups.push_back(g);
  return s;
}

void BM_Simulate(benchmark::State& state) {
  const Scenario s = synthetic(8, 1000);
  const Schedule sch{{SolverStep{0, 5.0}, FeatureStep{0}, SolverStep{1, 20.0}, SolverStep{2, 100.0}}};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(s, i, sch));
    i = (i + 1) % s.num_instances();
  }
}
BENCHMARK(BM_Simulate);

void BM_ScoreSystem(benchmark::State& state) {
  const Scenario s = synthetic(8, static_cast<std::size_t>(state.range(0)));
  Split split{1, {}, {}, false};
  for (std::size_t i = 0; i < s.num_instances(); ++i) (i % 3 ? split.train : split.test).push_back(i);
  const PredictionTable p = sbs_predictions(s, split);
  for (auto _ : state) benchmark::DoNotOptimize(score_system(s, split, p));
}
BENCHMARK(BM_ScoreSystem)->Arg(300)->Arg(3000);

void BM_ForestFit(benchmark::State& state) {
  CounterRng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  learn::Matrix x;
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(10);
    for (auto& v : row) v = rng.uniform();
    y.push_back(row[0] + row[1] * row[2]);
    x.append_row(row);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn::RandomForest::fit_regression(x, y, learn::ForestParams{50, 1, 0, true, 3}));
  }
}
BENCHMARK(BM_ForestFit)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_RankAnalysis(benchmark::State& state) {
  CounterRng rng(3);
  stats::ScoreMatrix m;
  for (int c = 0; c < 20; ++c) m.systems.push_back("s" + std::to_string(c));
  for (int r = 0; r < 50; ++r) {
    m.scenarios.push_back("r" + std::to_string(r));
    for (int c = 0; c < 20; ++c) m.values.emplace_back(rng.uniform());
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::analyze(m));
}
BENCHMARK(BM_RankAnalysis);

}  // namespace

BENCHMARK_MAIN();
