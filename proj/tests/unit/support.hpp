#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "asbench/rng.hpp"
#include "asbench/scenario.hpp"
#include "asbench/schedule.hpp"

namespace asbench::testing {

std::filesystem::path fixture(const std::string& name);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

/// Runtime scenario with one feature group ("g", cost column "g_cost") over
/// `features` features. runs are row-major [instance][algorithm].
Scenario runtime_scenario(std::size_t algorithms, std::size_t instances, double cutoff,
                          const std::vector<RunRecord>& runs, std::size_t features = 1);

/// Random valid runtime scenario: up to max_algorithms algorithms, between
/// 1 and max_instances instances, two feature groups with costs, arbitrary
/// statuses. Used by the property suites.
Scenario random_runtime_scenario(CounterRng& rng, std::size_t max_algorithms, std::size_t max_instances);

/// Random valid quality scenario with the given direction.
Scenario random_quality_scenario(CounterRng& rng, std::size_t max_algorithms, std::size_t max_instances,
                                 Direction direction);

/// Random legal schedule for `scenario` with up to max_steps steps.
Schedule random_schedule(CounterRng& rng, const Scenario& scenario, std::size_t max_steps);

struct OracleOutcome {
  bool solved = false;
  double time_used = 0.0;
  std::size_t step = 0;  // 1-based, 0 when unsolved
};

/// Second-by-second replay of a schedule on integer data: every feature
/// cost, budget, runtime and the cutoff must be whole seconds.
OracleOutcome tick_oracle(const Scenario& scenario, std::size_t instance, const Schedule& schedule);

/// Learnability generator: features x0, x1 uniform in [-1, 1] plus two noise
/// features; the best of three algorithms is decided by the signs of x0 and
/// x1. Splits: one split, first `train` instances train, the rest test.
Scenario learnability_scenario(std::size_t train, std::size_t test, std::uint64_t seed);

/// Greedy pre-solver written as a plain search over every (algorithm, run
/// time) candidate, for cross-checking build_presolver.
std::vector<SolverStep> presolver_oracle(const Scenario& scenario, const std::vector<std::size_t>& train,
                                         double budget_fraction, std::size_t max_steps);

}  // namespace asbench::testing
