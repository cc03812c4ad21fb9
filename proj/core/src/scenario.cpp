#include "asbench/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "asbench/errors.hpp"

namespace asbench {

std::string_view to_string(Objective objective) noexcept {
  return objective == Objective::runtime ? "runtime" : "quality";
}

std::string_view to_string(Direction direction) noexcept {
  return direction == Direction::minimize ? "minimize" : "maximize";
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::ok: return "ok";
    case RunStatus::timeout: return "timeout";
    case RunStatus::memout: return "memout";
    case RunStatus::crash: return "crash";
    case RunStatus::other: return "other";
  }
  return "other";
}

std::optional<Objective> parse_objective(std::string_view text) noexcept {
  if (text == "runtime") return Objective::runtime;
  if (text == "quality") return Objective::quality;
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  if (text == "minimize") return Direction::minimize;
  if (text == "maximize") return Direction::maximize;
  return std::nullopt;
}

std::optional<RunStatus> parse_run_status(std::string_view text) noexcept {
  for (auto status : {RunStatus::ok, RunStatus::timeout, RunStatus::memout, RunStatus::crash,
                      RunStatus::other}) {
    if (text == to_string(status)) return status;
  }
  return std::nullopt;
}

int status_severity(RunStatus status) noexcept { return static_cast<int>(status); }

double Scenario::cutoff_seconds() const {
  if (!is_runtime()) throw std::logic_error("scenario '" + id + "' is a quality scenario and has no cutoff");
  if (!cutoff) throw std::logic_error("runtime scenario '" + id + "' has no cutoff");
  return *cutoff;
}

const RunRecord& Scenario::run(std::size_t instance, std::size_t algorithm) const {
  if (instance >= num_instances() || algorithm >= num_algorithms()) {
    throw std::out_of_range("run index out of range");
  }
  const auto& slot = runs.at(instance * num_algorithms() + algorithm);
  if (!slot) {
    throw InvalidInput("no run recorded for instance '" + instances[instance] + "' and algorithm '" +
                       algorithms[algorithm] + "'");
  }
  return *slot;
}

FeatureValue Scenario::feature(std::size_t instance, std::size_t feature) const {
  if (instance >= num_instances() || feature >= num_features()) {
    throw std::out_of_range("feature index out of range");
  }
  return features.at(instance * num_features() + feature);
}

double Scenario::group_cost(std::size_t group, std::size_t instance) const {
  const auto& g = feature_groups.at(group);
  if (!is_runtime() || g.cost.empty()) return 0.0;
  return g.cost.at(instance).value_or(0.0);
}

const Split& Scenario::split(int split_id) const {
  for (const auto& s : splits) {
    if (s.id == split_id) return s;
  }
  throw std::out_of_range("scenario '" + id + "' has no split " + std::to_string(split_id));
}

IdIndex make_index(std::span<const std::string> ids) {
  IdIndex index;
  index.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  return index;
}

std::size_t index_of(std::span<const std::string> ids, std::string_view id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw std::out_of_range("unknown id '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

std::vector<std::size_t> all_instances(const Scenario& scenario) {
  std::vector<std::size_t> out(scenario.num_instances());
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::duplicate_algorithm: return "duplicate_algorithm";
    case ViolationKind::duplicate_instance: return "duplicate_instance";
    case ViolationKind::empty_portfolio: return "empty_portfolio";
    case ViolationKind::missing_cutoff: return "missing_cutoff";
    case ViolationKind::unexpected_cutoff: return "unexpected_cutoff";
    case ViolationKind::run_table_shape: return "run_table_shape";
    case ViolationKind::missing_run: return "missing_run";
    case ViolationKind::negative_runtime: return "negative_runtime";
    case ViolationKind::value_exceeds_cutoff: return "value_exceeds_cutoff";
    case ViolationKind::nonfinite_value: return "nonfinite_value";
    case ViolationKind::feature_table_shape: return "feature_table_shape";
    case ViolationKind::feature_unassigned: return "feature_unassigned";
    case ViolationKind::feature_in_multiple_groups: return "feature_in_multiple_groups";
    case ViolationKind::feature_index_out_of_range: return "feature_index_out_of_range";
    case ViolationKind::duplicate_group: return "duplicate_group";
    case ViolationKind::cost_table_shape: return "cost_table_shape";
    case ViolationKind::negative_cost: return "negative_cost";
    case ViolationKind::missing_cost: return "missing_cost";
    case ViolationKind::duplicate_split: return "duplicate_split";
    case ViolationKind::split_unknown_instance: return "split_unknown_instance";
    case ViolationKind::split_empty_test: return "split_empty_test";
    case ViolationKind::split_overlap: return "split_overlap";
  }
  return "unknown";
}

namespace {

void check_unique(std::span<const std::string> ids, ViolationKind kind, std::vector<Violation>& out) {
  IdIndex seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.emplace(ids[i], i).second) {
      out.push_back({kind, Severity::error, ids[i], {}, "id appears more than once"});
    }
  }
}

void validate_runs(const Scenario& s, std::vector<Violation>& out) {
  const std::size_t expected = s.num_instances() * s.num_algorithms();
  if (s.runs.size() != expected) {
    out.push_back({ViolationKind::run_table_shape, Severity::error, s.id, {},
                   "run table has " + std::to_string(s.runs.size()) + " slots, expected " +
                       std::to_string(expected)});
    return;
  }
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
      const auto& slot = s.runs[i * s.num_algorithms() + a];
      if (!slot) {
        out.push_back({ViolationKind::missing_run, Severity::error, s.instances[i], s.algorithms[a],
                       "no run recorded"});
        continue;
      }
      if (!std::isfinite(slot->value)) {
        out.push_back({ViolationKind::nonfinite_value, Severity::error, s.instances[i], s.algorithms[a],
                       "recorded value is not finite"});
        continue;
      }
      if (!s.is_runtime()) continue;
      if (slot->value < 0.0) {
        out.push_back({ViolationKind::negative_runtime, Severity::error, s.instances[i], s.algorithms[a],
                       "runtime is negative"});
      } else if (s.cutoff && slot->status == RunStatus::ok && slot->value > *s.cutoff) {
        out.push_back({ViolationKind::value_exceeds_cutoff, Severity::error, s.instances[i], s.algorithms[a],
                       "ok run of " + std::to_string(slot->value) + " s exceeds cutoff " +
                           std::to_string(*s.cutoff)});
      }
    }
  }
}

void validate_features(const Scenario& s, std::vector<Violation>& out) {
  if (s.features.size() != s.num_instances() * s.num_features()) {
    out.push_back({ViolationKind::feature_table_shape, Severity::error, s.id, {},
                   "feature table does not match instances x features"});
  }
  std::vector<int> owners(s.num_features(), 0);
  std::vector<std::string> group_names;
  for (const auto& g : s.feature_groups) group_names.push_back(g.name);
  check_unique(group_names, ViolationKind::duplicate_group, out);

  for (const auto& g : s.feature_groups) {
    for (std::size_t f : g.feature_indices) {
      if (f >= s.num_features()) {
        out.push_back({ViolationKind::feature_index_out_of_range, Severity::error, g.name, std::to_string(f),
                       "feature index out of range"});
        continue;
      }
      ++owners[f];
    }
    if (g.cost.empty()) continue;
    if (g.cost.size() != s.num_instances()) {
      out.push_back({ViolationKind::cost_table_shape, Severity::error, g.name, {},
                     "cost column does not cover the instance list"});
      continue;
    }
    for (std::size_t i = 0; i < g.cost.size(); ++i) {
      if (!g.cost[i]) {
        if (s.is_runtime()) {
          out.push_back({ViolationKind::missing_cost, Severity::warning, g.name, s.instances[i],
                         "no feature cost recorded; treated as 0"});
        }
      } else if (!(*g.cost[i] >= 0.0) || !std::isfinite(*g.cost[i])) {
        out.push_back({ViolationKind::negative_cost, Severity::error, g.name, s.instances[i],
                       "feature cost must be a finite value >= 0"});
      }
    }
  }
  for (std::size_t f = 0; f < owners.size(); ++f) {
    if (owners[f] == 0) {
      out.push_back({ViolationKind::feature_unassigned, Severity::error, s.feature_names[f], {},
                     "feature belongs to no group"});
    } else if (owners[f] > 1) {
      out.push_back({ViolationKind::feature_in_multiple_groups, Severity::error, s.feature_names[f], {},
                     "feature belongs to more than one group"});
    }
  }
}

void validate_splits(const Scenario& s, std::vector<Violation>& out) {
  std::vector<int> ids;
  for (const auto& split : s.splits) {
    const std::string name = std::to_string(split.id);
    if (std::find(ids.begin(), ids.end(), split.id) != ids.end()) {
      out.push_back({ViolationKind::duplicate_split, Severity::error, name, {}, "split id appears twice"});
    }
    ids.push_back(split.id);
    if (split.test.empty()) {
      out.push_back({ViolationKind::split_empty_test, Severity::error, name, {}, "test set is empty"});
    }
    for (const auto* part : {&split.train, &split.test}) {
      for (std::size_t i : *part) {
        if (i >= s.num_instances()) {
          out.push_back({ViolationKind::split_unknown_instance, Severity::error, name, std::to_string(i),
                         "split references an instance outside the scenario"});
        }
      }
    }
    if (!split.bootstrap) {
      std::vector<std::size_t> train(split.train), test(split.test), both;
      std::sort(train.begin(), train.end());
      std::sort(test.begin(), test.end());
      std::set_intersection(train.begin(), train.end(), test.begin(), test.end(), std::back_inserter(both));
      for (std::size_t i : both) {
        out.push_back({ViolationKind::split_overlap, Severity::error, name,
                       i < s.num_instances() ? s.instances[i] : std::to_string(i),
                       "instance is in both train and test of a non-bootstrap split"});
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;
  if (s.algorithms.empty()) {
    out.push_back({ViolationKind::empty_portfolio, Severity::error, s.id, {}, "portfolio is empty"});
  }
  check_unique(s.algorithms, ViolationKind::duplicate_algorithm, out);
  check_unique(s.instances, ViolationKind::duplicate_instance, out);
  if (s.is_runtime() && !s.cutoff) {
    out.push_back({ViolationKind::missing_cutoff, Severity::error, s.id, {}, "runtime scenario needs a cutoff"});
  } else if (s.is_runtime() && !(*s.cutoff > 0.0 && std::isfinite(*s.cutoff))) {
    out.push_back({ViolationKind::missing_cutoff, Severity::error, s.id, {}, "cutoff must be a positive number"});
  } else if (!s.is_runtime() && s.cutoff) {
    out.push_back({ViolationKind::unexpected_cutoff, Severity::error, s.id, {},
                   "quality scenarios carry no cutoff"});
  }
  validate_runs(s, out);
  validate_features(s, out);
  validate_splits(s, out);
  return out;
}

bool has_errors(std::span<const Violation> violations) noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::error; });
}

bool is_solved(const RunRecord& run, double cutoff) noexcept {
  return run.status == RunStatus::ok && run.value <= cutoff;
}

double effective_cost(const Scenario& s, std::size_t instance, std::size_t algorithm) {
  const RunRecord& r = s.run(instance, algorithm);
  if (s.is_runtime()) {
    const double cutoff = s.cutoff_seconds();
    return is_solved(r, cutoff) ? r.value : 10.0 * cutoff;
  }
  return s.direction == Direction::minimize ? r.value : -r.value;
}

double vbs_cost(const Scenario& s, std::size_t instance) {
  if (instance >= s.num_instances()) throw std::out_of_range("unknown instance index");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < s.num_algorithms(); ++a) best = std::min(best, effective_cost(s, instance, a));
  return best;
}

double vbs_cost(const Scenario& s, std::string_view instance) {
  return vbs_cost(s, index_of(s.instances, instance));
}

std::size_t sbs(const Scenario& s, std::span<const std::size_t> train_instances) {
  if (train_instances.empty()) throw std::invalid_argument("sbs: empty training set");
  if (s.algorithms.empty()) throw std::invalid_argument("sbs: empty portfolio");
  std::size_t best = 0;
  double best_total = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
    double total = 0.0;
    for (std::size_t i : train_instances) total += effective_cost(s, i, a);
    if (total < best_total) {
      best_total = total;
      best = a;
    }
  }
  return best;
}

double improvement_factor(const Scenario& s) {
  if (s.algorithms.empty() || s.instances.empty()) throw std::invalid_argument("improvement_factor: empty scenario");
  if (s.is_runtime()) {
    const double cutoff = s.cutoff_seconds();
    std::vector<std::size_t> considered;
    for (std::size_t i = 0; i < s.num_instances(); ++i) {
      for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
        if (is_solved(s.run(i, a), cutoff)) {
          considered.push_back(i);
          break;
        }
      }
    }
    if (considered.empty()) throw std::domain_error("improvement_factor: no instance is solved by any algorithm");
    const std::size_t single_best = sbs(s, considered);
    auto capped = [&](std::size_t i, std::size_t a) {
      const RunRecord& r = s.run(i, a);
      return is_solved(r, cutoff) ? r.value : cutoff;
    };
    double sbs_total = 0.0, vbs_total = 0.0;
    for (std::size_t i : considered) {
      sbs_total += capped(i, single_best);
      double best = cutoff;
      for (std::size_t a = 0; a < s.num_algorithms(); ++a) best = std::min(best, capped(i, a));
      vbs_total += best;
    }
    if (!(vbs_total > 0.0)) throw std::domain_error("improvement_factor: VBS mean runtime is zero");
    return sbs_total / vbs_total;
  }

  const auto everything = all_instances(s);
  const std::size_t single_best = sbs(s, everything);
  double sbs_total = 0.0, vbs_total = 0.0;
  for (std::size_t i : everything) {
    sbs_total += s.run(i, single_best).value;
    double best = s.run(i, 0).value;
    for (std::size_t a = 1; a < s.num_algorithms(); ++a) {
      const double v = s.run(i, a).value;
      best = s.direction == Direction::minimize ? std::min(best, v) : std::max(best, v);
    }
    vbs_total += best;
  }
  const double num = s.direction == Direction::minimize ? sbs_total : vbs_total;
  const double den = s.direction == Direction::minimize ? vbs_total : sbs_total;
  if (!(den > 0.0) || !(num > 0.0)) {
    throw std::domain_error("improvement_factor: quality means must be positive to form a ratio");
  }
  return num / den;
}

}  // namespace asbench
