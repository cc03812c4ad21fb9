#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asbench/scenario.hpp"
#include "asbench/scenario_io.hpp"
#include "asbench/schedule.hpp"

namespace asbench {

/// Replay of one schedule on one instance against the recorded runs.
struct EvaluationOutcome {
  bool solved = false;
  std::optional<double> time_used;       // runtime scenarios; equals the cutoff when unsolved
  std::optional<double> achieved_value;  // quality scenarios
  std::optional<std::size_t> solving_step;  // 1-based ordinal of the step that solved it

  friend bool operator==(const EvaluationOutcome&, const EvaluationOutcome&) = default;
};

/// Walks the schedule with a running clock. Feature steps add the group's
/// cost; a solver step gets min(budget, cutoff - clock) and solves if the
/// recorded run is ok and fits. A failed step costs its slice, or the
/// recorded runtime when the run ended early by itself (memout, crash,
/// other). Quality scenarios take the single solver step's value and ignore
/// feature costs.
EvaluationOutcome simulate(const Scenario& scenario, std::size_t instance, const Schedule& schedule);

/// time_used when solved, 10 x cutoff otherwise. Throws std::invalid_argument
/// for quality outcomes.
double par10(const EvaluationOutcome& outcome, double cutoff);

/// min(time_used, cutoff) minus the fastest ok run on the instance (cutoff if
/// none). Timeouts are charged the cutoff, not the PAR10 penalty.
double mcp(const EvaluationOutcome& outcome, const Scenario& scenario, std::size_t instance);

enum class Metric { par10, mcp, solved, quality };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view text) noexcept;

/// Metrics scored for a scenario: par10/mcp/solved for runtime, quality otherwise.
std::vector<Metric> metrics_for(const Scenario& scenario);

inline constexpr double kDegenerateGap = 1e-12;

struct MetricScore {
  Metric metric = Metric::par10;
  // Natural scale: mean PAR10, mean MCP, solved fraction, mean quality.
  double value = 0.0;
  double sbs_value = 0.0;
  double vbs_value = 0.0;
  // Cost-to-minimize form fed to the gap: solved becomes the unsolved
  // fraction, maximized quality is negated.
  double cost = 0.0;
  double sbs_cost = 0.0;
  double vbs_cost = 0.0;
  // (cost - vbs_cost) / (sbs_cost - vbs_cost); nullopt when the denominator
  // is below kDegenerateGap.
  std::optional<double> gap;
};

struct ScoreReport {
  std::string system;
  std::string scenario;
  int split_id = 0;
  std::string sbs_algorithm;
  std::size_t num_test_instances = 0;
  bool out_of_competition = false;
  std::vector<MetricScore> metrics;

  [[nodiscard]] const MetricScore* find(Metric metric) const noexcept;
};

/// Normalized gap between VBS (0) and SBS (1).
std::optional<double> closed_gap(double cost, double sbs_cost, double vbs_cost) noexcept;

/// Scores predictions on split.test; the SBS is picked on split.train.
/// Throws InvalidInput when a test instance has no prediction.
ScoreReport score_system(const Scenario& scenario, const Split& split, const PredictionTable& predictions,
                         std::string system = {});

/// Schedules that run the SBS (picked on split.train) for the full cutoff.
PredictionTable sbs_predictions(const Scenario& scenario, const Split& split);
/// Schedules that run the per-instance best algorithm with no feature steps.
PredictionTable oracle_predictions(const Scenario& scenario, std::span<const std::size_t> instances);

enum class CompetitionMode { icon2015, oasc2017 };

std::string_view to_string(CompetitionMode mode) noexcept;
std::optional<CompetitionMode> parse_mode(std::string_view text) noexcept;

struct AggregateScore {
  double value = 0.0;
  std::size_t scenarios = 0;
  // "scenario/split/metric" for every undefined gap left out of the mean.
  std::vector<std::string> excluded;
};

/// Unweighted means of one system's reports. icon2015: mean over metrics per
/// split, then over splits per scenario, then over scenarios. oasc2017: the
/// PAR10 gap (quality gap for quality scenarios) averaged over splits, then
/// scenarios. Throws std::invalid_argument when nothing is defined.
AggregateScore aggregate(std::span<const ScoreReport> reports, CompetitionMode mode);

// Report serialization ------------------------------------------------------

/// Rows of system,scenario,split,metric,value. Per metric M the rows are M,
/// gap_M, sbs_M, vbs_M in that order; an undefined gap is written "NA".
/// Out-of-competition systems get an extra out_of_competition,1 row.
std::string format_report_csv(std::span<const ScoreReport> reports);

/// JSON summary: one object per report with every metric's value, gap and
/// references, plus the aggregate per mode and the excluded gaps.
std::string format_report_json(std::span<const ScoreReport> reports, CompetitionMode mode);

struct ReportRow {
  std::string system;
  std::string scenario;
  int split = 0;
  std::string metric;
  std::optional<double> value;  // nullopt for "NA"
};

std::vector<ReportRow> parse_report_csv(std::string contents, const std::string& file_name);

}  // namespace asbench
