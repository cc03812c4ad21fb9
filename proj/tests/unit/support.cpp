#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asbench::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& name) { return fs::path(ASBENCH_FIXTURE_DIR) / name; }

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  const auto stamp = static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count());
  path_ = fs::temp_directory_path() / ("asbench-" + tag + "-" + std::to_string(splitmix64(stamp ^ ++counter) % 1000000007));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

void name_entities(Scenario& s, std::size_t algorithms, std::size_t instances, std::size_t features) {
  for (std::size_t a = 0; a < algorithms; ++a) s.algorithms.push_back("A" + std::to_string(a + 1));
  for (std::size_t i = 0; i < instances; ++i) s.instances.push_back("i" + std::to_string(i + 1));
  for (std::size_t f = 0; f < features; ++f) s.feature_names.push_back("f" + std::to_string(f));
}

RunStatus random_status(CounterRng& rng) {
  switch (rng.below(8)) {
    case 0:
    case 1: return RunStatus::timeout;
    case 2: return RunStatus::memout;
    case 3: return RunStatus::crash;
    case 4: return RunStatus::other;
    default: return RunStatus::ok;
  }
}

}  // namespace

Scenario runtime_scenario(std::size_t algorithms, std::size_t instances, double cutoff,
                          const std::vector<RunRecord>& runs, std::size_t features) {
  if (runs.size() != algorithms * instances) throw std::invalid_argument("runtime_scenario: run count");
  Scenario s;
  s.id = "synthetic";
  s.objective = Objective::runtime;
  s.cutoff = cutoff;
  name_entities(s, algorithms, instances, features);
  for (const auto& r : runs) s.runs.emplace_back(r);
  FeatureGroup g{"g", {}, "g_cost", {}};
  for (std::size_t f = 0; f < features; ++f) g.feature_indices.push_back(f);
  for (std::size_t i = 0; i < instances; ++i) {
    for (std::size_t f = 0; f < features; ++f) s.features.emplace_back(static_cast<double>(i) + 0.25 * static_cast<double>(f));
    g.cost.emplace_back(1.0);
  }
  s.feature_groups.push_back(std::move(g));
  return s;
}

Scenario random_runtime_scenario(CounterRng& rng, std::size_t max_algorithms, std::size_t max_instances) {
  static constexpr double kCutoffs[] = {1.0, 10.0, 100.0, 1200.0, 5000.0};
  Scenario s;
  s.id = "random";
  s.objective = Objective::runtime;
  const double cutoff = kCutoffs[rng.below(5)];
  s.cutoff = cutoff;
  const std::size_t k = 1 + rng.below(max_algorithms);
  const std::size_t n = 1 + rng.below(max_instances);
  name_entities(s, k, n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      const RunStatus status = random_status(rng);
      const double value = status == RunStatus::timeout ? cutoff : rng.uniform() * cutoff;
      s.runs.emplace_back(RunRecord{value, status});
    }
    for (std::size_t f = 0; f < 3; ++f) {
      if (rng.below(10) == 0) {
        s.features.emplace_back(std::nullopt);
      } else {
        s.features.emplace_back(rng.uniform() * 2.0 - 1.0);
      }
    }
  }
  FeatureGroup g1{"g1", {0, 1}, "g1_cost", {}};
  FeatureGroup g2{"g2", {2}, "g2_cost", {}};
  for (std::size_t i = 0; i < n; ++i) {
    g1.cost.emplace_back(rng.uniform() * 0.05 * cutoff);
    g2.cost.emplace_back(rng.uniform() * 0.05 * cutoff);
  }
  s.feature_groups = {g1, g2};
  return s;
}

Scenario random_quality_scenario(CounterRng& rng, std::size_t max_algorithms, std::size_t max_instances,
                                 Direction direction) {
  Scenario s;
  s.id = "random-quality";
  s.objective = Objective::quality;
  s.direction = direction;
  const std::size_t k = 1 + rng.below(max_algorithms);
  const std::size_t n = 1 + rng.below(max_instances);
  name_entities(s, k, n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) s.runs.emplace_back(RunRecord{std::round(rng.uniform() * 1000.0) / 10.0, RunStatus::ok});
    for (std::size_t f = 0; f < 2; ++f) s.features.emplace_back(rng.uniform());
  }
  s.feature_groups = {FeatureGroup{"all", {0, 1}, "", {}}};
  return s;
}

Schedule random_schedule(CounterRng& rng, const Scenario& s, std::size_t max_steps) {
  Schedule out;
  std::vector<bool> used(s.feature_groups.size(), false);
  const std::size_t steps = 1 + rng.below(max_steps);
  bool solver_placed = false;
  for (std::size_t k = 0; k < steps; ++k) {
    const bool want_feature = !s.feature_groups.empty() && rng.below(3) == 0;
    if (want_feature) {
      const std::size_t g = rng.below(s.feature_groups.size());
      if (!used[g]) {
        used[g] = true;
        out.steps.emplace_back(FeatureStep{g});
        continue;
      }
    }
    if (!s.is_runtime() && solver_placed) continue;
    const std::size_t a = rng.below(s.num_algorithms());
    const double budget = s.is_runtime() ? (0.01 + rng.uniform() * 1.2) * s.cutoff_seconds() : 0.0;
    out.steps.emplace_back(SolverStep{a, budget});
    solver_placed = true;
  }
  if (!s.is_runtime() && !solver_placed) out.steps.emplace_back(SolverStep{rng.below(s.num_algorithms()), 0.0});
  return out;
}

OracleOutcome tick_oracle(const Scenario& s, std::size_t instance, const Schedule& schedule) {
  const auto whole = [](double v) {
    if (v != std::floor(v)) throw std::invalid_argument("tick_oracle needs whole seconds");
    return static_cast<long>(v);
  };
  const long cutoff = whole(s.cutoff_seconds());
  long t = 0;
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    if (t >= cutoff) break;
    if (const auto* f = std::get_if<FeatureStep>(&schedule.steps[k])) {
      t += whole(s.group_cost(f->group, instance));
      continue;
    }
    const auto& step = std::get<SolverStep>(schedule.steps[k]);
    const RunRecord& run = s.run(instance, step.algorithm);
    const long runtime = whole(run.value);
    const long slice = std::min(whole(step.budget), cutoff - t);
    const bool ends_by_itself =
        run.status == RunStatus::memout || run.status == RunStatus::crash || run.status == RunStatus::other;
    for (long elapsed = 0;; ++elapsed, ++t) {
      if (run.status == RunStatus::ok && elapsed == runtime) return {true, static_cast<double>(t), k + 1};
      if (ends_by_itself && elapsed == runtime) break;
      if (elapsed == slice) break;
    }
  }
  return {false, static_cast<double>(cutoff), 0};
}

Scenario learnability_scenario(std::size_t train, std::size_t test, std::uint64_t seed) {
  CounterRng rng(seed, 0x6c6561726eULL);
  const std::size_t n = train + test;
  Scenario s;
  s.id = "learnability";
  s.objective = Objective::runtime;
  s.cutoff = 100.0;
  name_entities(s, 3, n, 4);
  FeatureGroup g{"basic", {0, 1, 2, 3}, "basic_cost", {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform() * 2.0 - 1.0;
    for (double v : x) s.features.emplace_back(v);
    const std::size_t best = x[0] < 0.0 ? 0 : (x[1] < 0.0 ? 1 : 2);
    for (std::size_t a = 0; a < 3; ++a) {
      if (a == best) {
        s.runs.emplace_back(RunRecord{1.0 + 4.0 * rng.uniform(), RunStatus::ok});
      } else if (rng.below(2) == 0) {
        s.runs.emplace_back(RunRecord{100.0, RunStatus::timeout});
      } else {
        s.runs.emplace_back(RunRecord{40.0 + 50.0 * rng.uniform(), RunStatus::ok});
      }
    }
    g.cost.emplace_back(0.1);
  }
  s.feature_groups.push_back(std::move(g));
  Split split;
  split.id = 1;
  for (std::size_t i = 0; i < n; ++i) (i < train ? split.train : split.test).push_back(i);
  s.splits.push_back(std::move(split));
  return s;
}

std::vector<SolverStep> presolver_oracle(const Scenario& s, const std::vector<std::size_t>& train,
                                         double budget_fraction, std::size_t max_steps) {
  std::vector<SolverStep> out;
  if (budget_fraction <= 0.0) return out;
  const double cutoff = s.cutoff_seconds();
  const double floor = cutoff * 1e-4;
  double left = budget_fraction * cutoff;
  std::vector<std::size_t> open = train;
  std::vector<std::size_t> used;
  auto solves = [&](std::size_t i, std::size_t a, double t) {
    const RunRecord& r = s.run(i, a);
    return r.status == RunStatus::ok && r.value <= cutoff && r.value <= t;
  };
  while (out.size() < max_steps) {
    struct Candidate {
      std::size_t algorithm;
      double time;
      std::size_t solved;
      double ratio;
    };
    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
      if (std::find(used.begin(), used.end(), a) != used.end()) continue;
      for (std::size_t i : open) {
        if (!solves(i, a, cutoff)) continue;
        const double t = std::max(s.run(i, a).value, floor);
        if (t > left) continue;
        std::size_t count = 0;
        for (std::size_t j : open) count += solves(j, a, t) ? 1 : 0;
        candidates.push_back({a, t, count, static_cast<double>(count) / t});
      }
    }
    if (candidates.empty()) break;
    const auto best = *std::min_element(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
      if (l.ratio != r.ratio) return l.ratio > r.ratio;
      if (l.solved != r.solved) return l.solved > r.solved;
      if (l.time != r.time) return l.time < r.time;
      return l.algorithm < r.algorithm;
    });
    out.push_back({best.algorithm, best.time});
    used.push_back(best.algorithm);
    left -= best.time;
    std::erase_if(open, [&](std::size_t i) { return solves(i, best.algorithm, best.time); });
    if (open.empty()) break;
  }
  return out;
}

}  // namespace asbench::testing
