#include "asbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "asbench/errors.hpp"

namespace asbench {

EvaluationOutcome simulate(const Scenario& s, std::size_t instance, const Schedule& schedule) {
  if (instance >= s.num_instances()) throw std::out_of_range("simulate: unknown instance index");
  check_schedule(s, schedule);

  EvaluationOutcome outcome;
  if (!s.is_runtime()) {
    for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
      if (const auto* solver = std::get_if<SolverStep>(&schedule.steps[k])) {
        const RunRecord& r = s.run(instance, solver->algorithm);
        outcome.achieved_value = r.value;
        outcome.solved = r.status == RunStatus::ok;
        outcome.solving_step = k + 1;
      }
    }
    return outcome;
  }

  const double cutoff = s.cutoff_seconds();
  double clock = 0.0;
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    if (const auto* feature = std::get_if<FeatureStep>(&schedule.steps[k])) {
      clock += s.group_cost(feature->group, instance);
    } else {
      const auto& solver = std::get<SolverStep>(schedule.steps[k]);
      const RunRecord& r = s.run(instance, solver.algorithm);
      const double slice = std::min(solver.budget, cutoff - clock);
      if (r.status == RunStatus::ok && r.value <= slice) {
        outcome.solved = true;
        outcome.time_used = clock + r.value;
        outcome.solving_step = k + 1;
        return outcome;
      }
      const bool ended_early = (r.status == RunStatus::memout || r.status == RunStatus::crash ||
                                r.status == RunStatus::other) && r.value < slice;
      clock += ended_early ? r.value : slice;
    }
    if (clock >= cutoff) break;
  }
  outcome.time_used = cutoff;
  return outcome;
}

double par10(const EvaluationOutcome& outcome, double cutoff) {
  if (!outcome.time_used) throw std::invalid_argument("par10: outcome is not from a runtime scenario");
  return outcome.solved ? *outcome.time_used : 10.0 * cutoff;
}

double mcp(const EvaluationOutcome& outcome, const Scenario& s, std::size_t instance) {
  if (!s.is_runtime() || !outcome.time_used) throw std::invalid_argument("mcp: runtime scenarios only");
  const double cutoff = s.cutoff_seconds();
  double best = cutoff;
  for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
    const RunRecord& r = s.run(instance, a);
    if (r.status == RunStatus::ok) best = std::min(best, r.value);
  }
  return std::min(*outcome.time_used, cutoff) - best;
}

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::par10: return "par10";
    case Metric::mcp: return "mcp";
    case Metric::solved: return "solved";
    case Metric::quality: return "quality";
  }
  return "par10";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
  for (auto m : {Metric::par10, Metric::mcp, Metric::solved, Metric::quality}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

std::vector<Metric> metrics_for(const Scenario& s) {
  if (s.is_runtime()) return {Metric::par10, Metric::mcp, Metric::solved};
  return {Metric::quality};
}

const MetricScore* ScoreReport::find(Metric metric) const noexcept {
  for (const auto& m : metrics) {
    if (m.metric == metric) return &m;
  }
  return nullptr;
}

std::optional<double> closed_gap(double cost, double sbs_cost, double vbs_cost) noexcept {
  const double denominator = sbs_cost - vbs_cost;
  if (std::abs(denominator) < kDegenerateGap) return std::nullopt;
  return (cost - vbs_cost) / denominator;
}

namespace {

std::size_t best_algorithm(const Scenario& s, std::size_t instance) {
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
    const double c = effective_cost(s, instance, a);
    if (c < best_cost) {
      best_cost = c;
      best = a;
    }
  }
  return best;
}

Schedule single_step(const Scenario& s, std::size_t algorithm) {
  return Schedule{{SolverStep{algorithm, s.is_runtime() ? s.cutoff_seconds() : 0.0}}};
}

MetricScore make_score(Metric metric, double value, double sbs_value, double vbs_value, bool to_cost_negate,
                       bool to_cost_complement) {
  MetricScore m;
  m.metric = metric;
  m.value = value;
  m.sbs_value = sbs_value;
  m.vbs_value = vbs_value;
  auto cost = [&](double v) {
    if (to_cost_complement) return 1.0 - v;
    if (to_cost_negate) return -v;
    return v;
  };
  m.cost = cost(value);
  m.sbs_cost = cost(sbs_value);
  m.vbs_cost = cost(vbs_value);
  m.gap = closed_gap(m.cost, m.sbs_cost, m.vbs_cost);
  return m;
}

}  // namespace

PredictionTable sbs_predictions(const Scenario& s, const Split& split) {
  const std::size_t single_best = sbs(s, split.train);
  PredictionTable out;
  for (std::size_t i : split.test) out.emplace(i, single_step(s, single_best));
  return out;
}

PredictionTable oracle_predictions(const Scenario& s, std::span<const std::size_t> instances) {
  PredictionTable out;
  for (std::size_t i : instances) out.emplace(i, single_step(s, best_algorithm(s, i)));
  return out;
}

ScoreReport score_system(const Scenario& s, const Split& split, const PredictionTable& predictions,
                         std::string system) {
  if (split.test.empty()) throw InvalidInput("score_system: split has no test instances");
  ScoreReport report;
  report.system = std::move(system);
  report.scenario = s.id;
  report.split_id = split.id;
  const std::size_t single_best = sbs(s, split.train);
  report.sbs_algorithm = s.algorithms[single_best];
  report.num_test_instances = split.test.size();
  const Schedule sbs_schedule = single_step(s, single_best);
  const double n = static_cast<double>(split.test.size());

  auto prediction_for = [&](std::size_t inst) -> const Schedule& {
    auto it = predictions.find(inst);
    if (it == predictions.end()) {
      throw InvalidInput("score_system: no prediction for test instance '" + s.instances[inst] + "'");
    }
    return it->second;
  };

  if (s.is_runtime()) {
    const double cutoff = s.cutoff_seconds();
    double par10_sum = 0, mcp_sum = 0, solved_sum = 0;
    double sbs_par10 = 0, sbs_mcp = 0, sbs_solved = 0;
    double vbs_par10 = 0, vbs_solved = 0;
    for (std::size_t inst : split.test) {
      const auto outcome = simulate(s, inst, prediction_for(inst));
      par10_sum += par10(outcome, cutoff);
      mcp_sum += mcp(outcome, s, inst);
      solved_sum += outcome.solved ? 1.0 : 0.0;

      const auto baseline = simulate(s, inst, sbs_schedule);
      sbs_par10 += par10(baseline, cutoff);
      sbs_mcp += mcp(baseline, s, inst);
      sbs_solved += baseline.solved ? 1.0 : 0.0;

      const auto oracle = simulate(s, inst, single_step(s, best_algorithm(s, inst)));
      vbs_par10 += par10(oracle, cutoff);
      vbs_solved += oracle.solved ? 1.0 : 0.0;
    }
    report.metrics.push_back(make_score(Metric::par10, par10_sum / n, sbs_par10 / n, vbs_par10 / n, false, false));
    report.metrics.push_back(make_score(Metric::mcp, mcp_sum / n, sbs_mcp / n, 0.0, false, false));
    report.metrics.push_back(
        make_score(Metric::solved, solved_sum / n, sbs_solved / n, vbs_solved / n, false, true));
    return report;
  }

  double value_sum = 0, sbs_sum = 0, vbs_sum = 0;
  for (std::size_t inst : split.test) {
    const auto outcome = simulate(s, inst, prediction_for(inst));
    value_sum += *outcome.achieved_value;
    sbs_sum += s.run(inst, single_best).value;
    vbs_sum += s.run(inst, best_algorithm(s, inst)).value;
  }
  report.metrics.push_back(make_score(Metric::quality, value_sum / n, sbs_sum / n, vbs_sum / n,
                                      s.direction == Direction::maximize, false));
  return report;
}

std::string_view to_string(CompetitionMode mode) noexcept {
  return mode == CompetitionMode::icon2015 ? "icon2015" : "oasc2017";
}

std::optional<CompetitionMode> parse_mode(std::string_view text) noexcept {
  if (text == "icon2015") return CompetitionMode::icon2015;
  if (text == "oasc2017") return CompetitionMode::oasc2017;
  return std::nullopt;
}

AggregateScore aggregate(std::span<const ScoreReport> reports, CompetitionMode mode) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  AggregateScore result;
  std::vector<std::string> order;
  std::map<std::string, std::pair<double, int>> per_scenario;  // sum of split scores, count

  for (const auto& r : reports) {
    double split_sum = 0.0;
    int split_count = 0;
    for (const auto& m : r.metrics) {
      const bool counted = mode == CompetitionMode::icon2015 || m.metric == Metric::par10 ||
                           m.metric == Metric::quality;
      if (!counted) continue;
      if (!m.gap) {
        result.excluded.push_back(r.scenario + "/" + std::to_string(r.split_id) + "/" + std::string(to_string(m.metric)));
        continue;
      }
      split_sum += *m.gap;
      ++split_count;
    }
    if (split_count == 0) continue;
    if (!per_scenario.count(r.scenario)) order.push_back(r.scenario);
    auto& slot = per_scenario[r.scenario];
    slot.first += split_sum / split_count;
    slot.second += 1;
  }
  if (order.empty()) throw std::invalid_argument("aggregate: every gap is undefined");
  double total = 0.0;
  for (const auto& name : order) {
    const auto& [sum, count] = per_scenario[name];
    total += sum / count;
  }
  result.value = total / static_cast<double>(order.size());
  result.scenarios = order.size();
  return result;
}

}  // namespace asbench
