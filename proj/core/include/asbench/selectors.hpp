#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asbench/evaluation.hpp"
#include "asbench/learners.hpp"
#include "asbench/scenario.hpp"
#include "asbench/scenario_io.hpp"
#include "asbench/schedule.hpp"

namespace asbench {

enum class SelectorKind { regression, cluster, pairwise, stacking, sunny };
enum class LearnerKind { forest, knn };

std::string_view to_string(SelectorKind kind) noexcept;
std::string_view to_string(LearnerKind kind) noexcept;
std::optional<SelectorKind> parse_selector_kind(std::string_view text) noexcept;
std::optional<LearnerKind> parse_learner_kind(std::string_view text) noexcept;

struct Hyperparameters {
  std::size_t k_neighbors = 32;        // k-NN learner
  std::size_t n_trees = 100;
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 0;  // 0 means ceil(sqrt(d))
  std::size_t k_clusters = 10;
  std::size_t sunny_k = 16;
  double presolve_budget_fraction = 0.1;  // of the cutoff; 0 disables pre-solving
  std::uint64_t seed = 0;
  // Learner behind regression, pairwise and stacking models.
  LearnerKind learner = LearnerKind::forest;
  // Feature groups the model may read; empty means all of them.
  std::vector<std::string> feature_groups;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Applies one "key=value" setting. feature_groups takes names joined by '+'.
/// Throws InvalidInput on an unknown key or a bad value.
void set_hyperparameter(Hyperparameters& hp, std::string_view key, std::string_view value);
void set_hyperparameter(Hyperparameters& hp, std::string_view assignment);
/// Every setting as key/value text, in declaration order.
std::vector<std::pair<std::string, std::string>> describe(const Hyperparameters& hp);
/// Throws InvalidInput when a count is zero or the budget fraction is outside [0, 1).
void check_hyperparameters(const Hyperparameters& hp);

/// Feature access used at prediction time, so callers can restrict or audit it.
class FeatureSource {
 public:
  virtual ~FeatureSource() = default;
  [[nodiscard]] virtual FeatureValue feature(std::size_t instance, std::size_t feature) const = 0;
};

class ScenarioFeatures final : public FeatureSource {
 public:
  explicit ScenarioFeatures(const Scenario& scenario) : scenario_(scenario) {}
  [[nodiscard]] FeatureValue feature(std::size_t instance, std::size_t feature) const override {
    return scenario_.feature(instance, feature);
  }

 private:
  const Scenario& scenario_;
};

/// Median imputation followed by z-standardization over the kept features.
struct FeaturePipeline {
  std::vector<std::size_t> groups;    // groups computed before selection, scenario order
  std::vector<std::size_t> features;  // kept feature indices, ascending
  std::vector<double> median;
  std::vector<double> mean;
  std::vector<double> scale;

  /// Standardized vector of the kept features; nullopt when every one of
  /// them is missing. Reads nothing outside `features`.
  [[nodiscard]] std::optional<std::vector<double>> transform(const FeatureSource& source,
                                                             std::size_t instance) const;

  friend bool operator==(const FeaturePipeline&, const FeaturePipeline&) = default;
};

struct TrainingSet {
  std::vector<std::size_t> instances;
  FeaturePipeline pipeline;
  learn::Matrix x;     // standardized features, one row per instance
  learn::Matrix cost;  // effective cost (PAR10 for runtime) [row][algorithm]

  /// Features come from the named groups (all groups when empty). Features
  /// with no observed value or zero spread are dropped. Throws InvalidInput
  /// on an empty instance list or an unknown group.
  static TrainingSet build(const Scenario& scenario, std::span<const std::size_t> instances,
                           std::span<const std::string> feature_groups = {});
};

struct Learner {
  LearnerKind kind = LearnerKind::forest;
  learn::RandomForest forest;
  learn::KnnModel knn;

  [[nodiscard]] double predict(std::span<const double> x) const;
  [[nodiscard]] std::size_t predict_class(std::span<const double> x) const;

  friend bool operator==(const Learner&, const Learner&) = default;
};

struct PairModel {
  std::size_t first = 0;   // class 0: first is better
  std::size_t second = 0;  // class 1: second is better
  // Set when the training data never separates the pair.
  std::optional<std::size_t> constant_winner;
  Learner model;

  friend bool operator==(const PairModel&, const PairModel&) = default;
};

struct SelectorModel {
  SelectorKind kind = SelectorKind::regression;
  Hyperparameters hp;
  std::string scenario_id;
  Objective objective = Objective::runtime;
  std::optional<double> cutoff;
  std::vector<std::string> algorithms;
  std::vector<SolverStep> presolve;  // static prefix run before any feature step
  FeaturePipeline pipeline;
  std::size_t fallback_algorithm = 0;  // SBS of the training data
  std::vector<double> training_cost;   // summed effective cost per algorithm, for tie-breaks

  std::vector<Learner> regressors;  // regression; stacking level 1
  std::vector<PairModel> pairs;     // pairwise
  Learner combiner;                 // stacking level 2
  learn::Matrix centroids;          // cluster
  std::vector<std::size_t> champions;
  learn::Matrix neighbors;          // sunny: standardized training features
  learn::Matrix neighbor_costs;     // sunny: effective cost [row][algorithm]

  friend bool operator==(const SelectorModel&, const SelectorModel&) = default;
};

/// One forest (or k-NN) regressor per algorithm on the effective cost;
/// selects the lowest prediction.
SelectorModel fit_regression(const Scenario& scenario, const TrainingSet& train, const Hyperparameters& hp);
/// One classifier per algorithm pair, trained on the instances where the two
/// differ; the most votes wins, ties go to the lower training cost.
SelectorModel fit_pairwise(const Scenario& scenario, const TrainingSet& train, const Hyperparameters& hp);
/// k-means on the standardized features; each cluster runs its cheapest
/// algorithm. k is reduced to the training size with a warning if needed.
SelectorModel fit_cluster(const Scenario& scenario, const TrainingSet& train, const Hyperparameters& hp,
                          std::vector<std::string>* warnings = nullptr);
/// Level 1: per-algorithm regressors, fed to level 2 through 5-fold
/// out-of-fold predictions. Level 2: classifier onto the best algorithm.
SelectorModel fit_stacking(const Scenario& scenario, const TrainingSet& train, const Hyperparameters& hp);
/// Sunny-style schedules: the remaining cutoff is split over the algorithms
/// in proportion to how many of the sunny_k nearest training instances each
/// solves. Slices are rounded down to 1/1024 s and the rounding remainder is
/// added to the neighborhood-best algorithm's slice.
SelectorModel fit_sunny(const Scenario& scenario, const TrainingSet& train, const Hyperparameters& hp);

/// Greedy static pre-solving prefix for runtime scenarios. Each step picks the
/// (algorithm, time) pair solving the most remaining training instances per
/// allocated second, with time floored at cutoff * 1e-4; all steps together
/// stay within presolve_budget_fraction * cutoff. icon2015 allows one step,
/// oasc2017 up to three. Empty when nothing fits.
std::vector<SolverStep> build_presolver(const Scenario& scenario, std::span<const std::size_t> train,
                                        const Hyperparameters& hp, CompetitionMode mode);

/// True when one of the prefix steps solves the instance within its budget.
bool presolved(const Scenario& scenario, std::size_t instance, std::span<const SolverStep> prefix);

/// Full pipeline: pre-solver on the training instances, removal of the
/// training instances it solves, then the selector fit on the rest.
SelectorModel fit_selector(const Scenario& scenario, std::span<const std::size_t> train, SelectorKind kind,
                           const Hyperparameters& hp, CompetitionMode mode,
                           std::vector<std::string>* warnings = nullptr);

/// Presolve prefix, feature steps of the model's groups, then the selected
/// solver step(s). Quality scenarios get a single solver step and nothing
/// else. An instance with every model feature missing falls back to the
/// training SBS, with a warning. Throws InvalidInput when the scenario does
/// not match the model's portfolio or objective.
Schedule predict(const SelectorModel& model, const Scenario& scenario, std::size_t instance,
                 const FeatureSource& features, std::vector<std::string>* warnings = nullptr);
Schedule predict(const SelectorModel& model, const Scenario& scenario, std::size_t instance);

PredictionTable predict_all(const SelectorModel& model, const Scenario& scenario,
                            std::span<const std::size_t> instances, std::vector<std::string>* warnings = nullptr);

}  // namespace asbench
