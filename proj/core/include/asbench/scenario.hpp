#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asbench {

enum class Objective { runtime, quality };
enum class Direction { minimize, maximize };
enum class RunStatus { ok, timeout, memout, crash, other };

std::string_view to_string(Objective objective) noexcept;
std::string_view to_string(Direction direction) noexcept;
std::string_view to_string(RunStatus status) noexcept;
std::optional<Objective> parse_objective(std::string_view text) noexcept;
std::optional<Direction> parse_direction(std::string_view text) noexcept;
std::optional<RunStatus> parse_run_status(std::string_view text) noexcept;

/// Severity order used when collapsing repeated runs: ok < timeout < memout < crash < other.
int status_severity(RunStatus status) noexcept;

struct RunRecord {
  double value = 0.0;
  RunStatus status = RunStatus::ok;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// A missing feature value is std::nullopt, never a sentinel number.
using FeatureValue = std::optional<double>;

struct FeatureGroup {
  std::string name;
  std::vector<std::size_t> feature_indices;
  // Column in the cost table; empty when the group carries no cost.
  std::string cost_column;
  // Per-instance computation cost, aligned with Scenario::instances. Empty if absent.
  std::vector<std::optional<double>> cost;

  friend bool operator==(const FeatureGroup&, const FeatureGroup&) = default;
};

struct Split {
  int id = 0;
  std::vector<std::size_t> train;  // instance indices, ascending
  std::vector<std::size_t> test;
  bool bootstrap = false;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Recorded performance of a portfolio on an instance set. Treated as
/// immutable once loaded; every operation in this library takes it by
/// const reference.
struct Scenario {
  std::string id;
  Objective objective = Objective::runtime;
  Direction direction = Direction::minimize;
  std::optional<double> cutoff;
  std::vector<std::string> algorithms;
  std::vector<std::string> instances;
  std::vector<std::string> feature_names;
  // Row-major [instance][algorithm]; nullopt marks a hole in the matrix.
  std::vector<std::optional<RunRecord>> runs;
  // Row-major [instance][feature].
  std::vector<FeatureValue> features;
  std::vector<FeatureGroup> feature_groups;
  std::vector<Split> splits;

  [[nodiscard]] std::size_t num_algorithms() const noexcept { return algorithms.size(); }
  [[nodiscard]] std::size_t num_instances() const noexcept { return instances.size(); }
  [[nodiscard]] std::size_t num_features() const noexcept { return feature_names.size(); }
  [[nodiscard]] bool is_runtime() const noexcept { return objective == Objective::runtime; }

  /// Throws std::logic_error for quality scenarios or a missing cutoff.
  [[nodiscard]] double cutoff_seconds() const;

  /// Throws std::out_of_range on bad indices and InvalidInput on a hole.
  [[nodiscard]] const RunRecord& run(std::size_t instance, std::size_t algorithm) const;
  [[nodiscard]] FeatureValue feature(std::size_t instance, std::size_t feature) const;
  /// Cost of computing `group` on `instance`; 0 when no cost is recorded or
  /// the scenario is a quality scenario.
  [[nodiscard]] double group_cost(std::size_t group, std::size_t instance) const;

  [[nodiscard]] const Split& split(int split_id) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

using IdIndex = std::unordered_map<std::string, std::size_t>;
IdIndex make_index(std::span<const std::string> ids);
std::size_t index_of(std::span<const std::string> ids, std::string_view id);
std::vector<std::size_t> all_instances(const Scenario& scenario);

enum class ViolationKind {
  duplicate_algorithm,
  duplicate_instance,
  empty_portfolio,
  missing_cutoff,
  unexpected_cutoff,
  run_table_shape,
  missing_run,
  negative_runtime,
  value_exceeds_cutoff,
  nonfinite_value,
  feature_table_shape,
  feature_unassigned,
  feature_in_multiple_groups,
  feature_index_out_of_range,
  duplicate_group,
  cost_table_shape,
  negative_cost,
  missing_cost,
  duplicate_split,
  split_unknown_instance,
  split_empty_test,
  split_overlap,
};

enum class Severity { error, warning };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  Severity severity = Severity::error;
  std::string entity;   // instance, algorithm, group or split the rule is about
  std::string related;  // second id for pairwise rules, e.g. the algorithm of a missing run
  std::string message;
};

/// Every broken invariant, in a deterministic order. Never throws.
std::vector<Violation> validate(const Scenario& scenario);
bool has_errors(std::span<const Violation> violations) noexcept;

/// Run solved within the cutoff (runtime scenarios).
bool is_solved(const RunRecord& run, double cutoff) noexcept;

/// Cost that selection minimizes: PAR10 for runtime scenarios, the value for
/// minimized quality and the negated value for maximized quality.
double effective_cost(const Scenario& scenario, std::size_t instance, std::size_t algorithm);

/// Cheapest effective cost over the portfolio, with no feature overhead.
double vbs_cost(const Scenario& scenario, std::size_t instance);
double vbs_cost(const Scenario& scenario, std::string_view instance);

/// Best algorithm on the given instances by total effective cost; ties go to
/// the earlier portfolio entry. Throws std::invalid_argument on an empty set.
std::size_t sbs(const Scenario& scenario, std::span<const std::size_t> train_instances);

/// Mean SBS cost over mean VBS cost. Runtime scenarios use runtimes capped
/// at the cutoff and skip instances nobody solved; maximized quality
/// scenarios report VBS/SBS so the factor stays >= 1.
double improvement_factor(const Scenario& scenario);

}  // namespace asbench
