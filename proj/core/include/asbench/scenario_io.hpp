#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "asbench/scenario.hpp"
#include "asbench/schedule.hpp"

namespace asbench {

// Scenario bundle layout. All tables are comma-separated with a mandatory
// header row; missing feature values and costs are written as "?".
//
//   description.txt    key: value lines (scenario_id, objective, direction,
//                      cutoff, algorithms, feature_groups, bootstrap_splits)
//   runs.csv           instance_id,repetition,algorithm,value,status
//   features.csv       instance_id,<feature names...>
//   feature_costs.csv  instance_id,<cost columns...>      (optional)
//   splits.csv         split_id,instance_id,role          (role: train|test)
//
// feature_groups is "name=cost_column:i,j,k" entries joined by ';'. Feature
// indices are 0-based positions in the features.csv header (after instance_id).
// An empty cost_column means the group has no recorded cost.
inline constexpr const char* kDescriptionFile = "description.txt";
inline constexpr const char* kRunsFile = "runs.csv";
inline constexpr const char* kFeaturesFile = "features.csv";
inline constexpr const char* kFeatureCostsFile = "feature_costs.csv";
inline constexpr const char* kSplitsFile = "splits.csv";

/// Loads the bundle without enforcing model invariants. Throws ParseError for
/// malformed lines, duplicate rows and ids that do not resolve.
Scenario load_scenario(const std::filesystem::path& directory);

/// load_scenario() followed by validate(); throws InvalidInput listing every
/// error-severity violation. Warnings are tolerated.
Scenario parse_scenario(const std::filesystem::path& directory);

/// Deterministic writer: fixed key/column order, rows in model order,
/// shortest round-trip decimals. The cost table is omitted when no group
/// carries a cost.
void write_scenario(const Scenario& scenario, const std::filesystem::path& directory);

/// Split table on its own, for replacing a bundle's splits.
std::vector<Split> parse_splits(const std::filesystem::path& path, const Scenario& scenario);
std::string format_splits(const Scenario& scenario, std::span<const Split> splits);

// Prediction file: instance_id,step,kind,name,budget
// kind is "feature" (name = group, budget ignored, conventionally 0) or
// "solver" (name = algorithm, budget in seconds).
using PredictionTable = std::map<std::size_t, Schedule>;

/// Parses predictions and checks each schedule against the scenario. Every
/// instance in `required` must have a schedule.
PredictionTable parse_predictions(const std::filesystem::path& path, const Scenario& scenario,
                                  std::span<const std::size_t> required);
PredictionTable parse_predictions_text(std::string contents, const std::string& file_name,
                                       const Scenario& scenario, std::span<const std::size_t> required);
std::string format_predictions(const Scenario& scenario, const PredictionTable& predictions);

enum class SplitMode { bootstrap, holdout };

/// Bootstrap: train = distinct draws of |I| samples with replacement, test =
/// out-of-bag instances (a draw with an empty out-of-bag set is retried on the
/// next substream, up to 100 times). Holdout: random disjoint partition with
/// round-half-up(test_fraction * |I|) test instances. No stratification.
std::vector<Split> generate_splits(const Scenario& scenario, int n_splits, SplitMode mode,
                                   double test_fraction, std::uint64_t seed);

struct NameMap {
  // pseudonym -> original, in pseudonym order
  std::vector<std::pair<std::string, std::string>> algorithms;
  std::vector<std::pair<std::string, std::string>> instances;
};

/// Replaces algorithm and instance ids with algo_N / inst_N assigned in a
/// seeded shuffled order. Portfolio and instance order are preserved, so
/// every tie-break and every metric is unchanged.
std::pair<Scenario, NameMap> obfuscate(const Scenario& scenario, std::uint64_t seed);
Scenario deobfuscate(const Scenario& scenario, const NameMap& names);

/// Copy with every run on `instances` replaced by value 0, status ok, so a
/// selector that peeks at test performance would be caught.
Scenario blind_runs(const Scenario& scenario, std::span<const std::size_t> instances);

std::string format_name_map(const NameMap& names);
NameMap parse_name_map(const std::filesystem::path& path);

}  // namespace asbench
