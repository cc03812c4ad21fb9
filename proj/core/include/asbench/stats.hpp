#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asbench/scenario.hpp"

namespace asbench::stats {

/// Scenario x system table of scores; a hole is std::nullopt.
struct ScoreMatrix {
  std::vector<std::string> scenarios;  // rows
  std::vector<std::string> systems;    // columns
  std::vector<std::optional<double>> values;  // row-major

  [[nodiscard]] std::optional<double> at(std::size_t scenario, std::size_t system) const {
    return values.at(scenario * systems.size() + system);
  }
  /// Throws std::invalid_argument naming the first missing cell.
  void require_complete() const;
  [[nodiscard]] ScoreMatrix without_systems(std::span<const std::string> excluded) const;
};

/// Ranks of one row, 1 = best; tied scores share the mean of the ranks they cover.
std::vector<double> rank_row(std::span<const double> scores, Direction direction);

struct RankTable {
  std::vector<std::string> scenarios;
  std::vector<std::string> systems;
  std::vector<double> ranks;  // row-major, same shape as the score matrix
  std::vector<double> average_ranks;

  [[nodiscard]] double rank(std::size_t scenario, std::size_t system) const {
    return ranks.at(scenario * systems.size() + system);
  }
};

/// Lower score is better for Direction::minimize (gaps, PAR10, MCP).
RankTable rank_table(const ScoreMatrix& scores, Direction direction = Direction::minimize);

/// Rank table from per-scenario ranks that were recorded elsewhere.
RankTable rank_table_from_ranks(std::vector<std::string> scenarios, std::vector<std::string> systems,
                                std::vector<double> ranks);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t systems = 0;
  std::size_t scenarios = 0;
};

/// chi2_F = 12N / (k(k+1)) * (sum_j R_j^2 - k(k+1)^2 / 4) on average ranks,
/// p from chi-square with k-1 degrees of freedom. Needs k >= 2 and N >= 2.
FriedmanResult friedman_test(const RankTable& ranks);

/// Studentized-range quantile at infinite df divided by sqrt(2), k in [2, 20],
/// alpha in {0.05, 0.10}. Throws std::invalid_argument otherwise.
double nemenyi_q(std::size_t k, double alpha);

/// q_alpha(k) * sqrt(k(k+1) / (6N)).
double nemenyi_cd(std::size_t k, std::size_t n, double alpha);

struct RankAnalysis {
  RankTable ranks;
  FriedmanResult friedman;
  double alpha = 0.05;
  double critical_distance = 0.0;
  // [a][b] is true iff |avg_rank_a - avg_rank_b| > critical_distance.
  std::vector<std::vector<bool>> pairwise_significant;
  // Maximal runs of systems (ordered by average rank) whose spread is within
  // the critical distance; the bars of a critical-distance diagram.
  std::vector<std::vector<std::string>> cliques;
};

RankAnalysis analyze(const ScoreMatrix& scores, Direction direction = Direction::minimize, double alpha = 0.05);
RankAnalysis analyze_ranks(RankTable ranks, double alpha = 0.05);

struct EcdfPoint {
  double x = 0.0;
  double f = 0.0;
};

struct EcdfAnalysis {
  std::vector<double> sorted_samples;
  double query = 0.0;
  double quantile = 0.0;  // fraction of samples <= query
  std::vector<EcdfPoint> curve;  // one point per distinct sample value
};

/// Throws std::invalid_argument on an empty sample.
EcdfAnalysis ecdf(std::span<const double> samples, double query);

struct VirtualBestSelector {
  std::vector<double> per_scenario_best;
  std::vector<std::string> best_system;  // first system reaching the best score
  double mean = 0.0;
};

/// Best score per scenario across systems, averaged over scenarios.
VirtualBestSelector virtual_best_selector(const ScoreMatrix& scores, Direction direction = Direction::minimize);

std::vector<double> column_means(const ScoreMatrix& scores);

// Serialization ---------------------------------------------------------------

/// Wide table: header "scenario,<system>,...", one row per scenario, "NA"
/// for a hole. Throws ParseError naming the line.
ScoreMatrix parse_score_matrix(std::string contents, const std::string& file_name);
std::string format_score_matrix(const ScoreMatrix& scores);

/// Same layout as the score matrix plus a final "average" row.
std::string format_rank_table(const RankTable& ranks);

/// system_a,system_b,rank_difference,significant for every unordered pair.
std::string format_significance(const RankAnalysis& analysis);

/// Data behind a critical-distance diagram: alpha, CD, Friedman result,
/// systems sorted by average rank and the non-significant cliques.
std::string format_cd_diagram_json(const RankAnalysis& analysis);

/// x,f rows of the ECDF curve.
std::string format_ecdf(const EcdfAnalysis& ecdf);

}  // namespace asbench::stats
