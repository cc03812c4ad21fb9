#include "asbench/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "asbench/errors.hpp"

namespace asbench {

std::size_t Schedule::num_solver_steps() const noexcept {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const ScheduleStep& s) {
    return std::holds_alternative<SolverStep>(s);
  }));
}

std::string schedule_problem(const Scenario& scenario, const Schedule& schedule) {
  std::vector<bool> used(scenario.feature_groups.size(), false);
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    const std::string where = "step " + std::to_string(k + 1) + ": ";
    if (const auto* f = std::get_if<FeatureStep>(&schedule.steps[k])) {
      if (f->group >= used.size()) return where + "unknown feature group";
      if (used[f->group]) return where + "feature group '" + scenario.feature_groups[f->group].name + "' repeated";
      used[f->group] = true;
    } else {
      const auto& solver = std::get<SolverStep>(schedule.steps[k]);
      if (solver.algorithm >= scenario.num_algorithms()) return where + "unknown algorithm";
      if (scenario.is_runtime() && !(solver.budget > 0.0 && std::isfinite(solver.budget))) {
        return where + "solver budget must be positive";
      }
    }
  }
  if (!scenario.is_runtime() && schedule.num_solver_steps() != 1) {
    return "quality scenarios take exactly one solver step, got " + std::to_string(schedule.num_solver_steps());
  }
  return {};
}

void check_schedule(const Scenario& scenario, const Schedule& schedule) {
  if (auto problem = schedule_problem(scenario, schedule); !problem.empty()) throw InvalidInput(problem);
}

}  // namespace asbench
