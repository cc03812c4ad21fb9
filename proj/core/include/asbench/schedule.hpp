#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "asbench/scenario.hpp"

namespace asbench {

struct FeatureStep {
  std::size_t group = 0;

  friend bool operator==(const FeatureStep&, const FeatureStep&) = default;
};

struct SolverStep {
  std::size_t algorithm = 0;
  double budget = 0.0;  // seconds; ignored for quality scenarios

  friend bool operator==(const SolverStep&, const SolverStep&) = default;
};

using ScheduleStep = std::variant<FeatureStep, SolverStep>;

/// What a selector emits for one instance: feature computations and
/// time-sliced solver runs, executed in order.
struct Schedule {
  std::vector<ScheduleStep> steps;

  [[nodiscard]] std::size_t num_solver_steps() const noexcept;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Empty string when the schedule is legal for the scenario, else the first problem:
/// unknown group/algorithm, a repeated feature group, a non-positive runtime budget,
/// or a quality schedule without exactly one solver step.
std::string schedule_problem(const Scenario& scenario, const Schedule& schedule);

/// Throws InvalidInput with schedule_problem()'s text.
void check_schedule(const Scenario& scenario, const Schedule& schedule);

}  // namespace asbench
