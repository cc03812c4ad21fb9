#include "asbench/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "asbench/errors.hpp"
#include "asbench/text.hpp"

namespace asbench {

std::string_view to_string(SelectorKind kind) noexcept {
  switch (kind) {
    case SelectorKind::regression: return "regression";
    case SelectorKind::cluster: return "cluster";
    case SelectorKind::pairwise: return "pairwise";
    case SelectorKind::stacking: return "stacking";
    case SelectorKind::sunny: return "sunny";
  }
  return "regression";
}

std::string_view to_string(LearnerKind kind) noexcept { return kind == LearnerKind::forest ? "forest" : "knn"; }

std::optional<SelectorKind> parse_selector_kind(std::string_view text) noexcept {
  for (auto k : {SelectorKind::regression, SelectorKind::cluster, SelectorKind::pairwise, SelectorKind::stacking,
                 SelectorKind::sunny}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<LearnerKind> parse_learner_kind(std::string_view text) noexcept {
  if (text == "forest") return LearnerKind::forest;
  if (text == "knn") return LearnerKind::knn;
  return std::nullopt;
}

namespace {

std::size_t parse_count(std::string_view key, std::string_view value) {
  const auto v = parse_integer(value);
  if (!v || *v < 0) throw InvalidInput("hyperparameter " + std::string(key) + ": '" + std::string(value) +
                                       "' is not a non-negative integer");
  return static_cast<std::size_t>(*v);
}

}  // namespace

void set_hyperparameter(Hyperparameters& hp, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "k_neighbors") {
    hp.k_neighbors = parse_count(key, value);
  } else if (key == "n_trees") {
    hp.n_trees = parse_count(key, value);
  } else if (key == "min_leaf") {
    hp.min_leaf = parse_count(key, value);
  } else if (key == "features_per_split") {
    hp.features_per_split = value == "auto" ? 0 : parse_count(key, value);
  } else if (key == "k_clusters") {
    hp.k_clusters = parse_count(key, value);
  } else if (key == "sunny_k") {
    hp.sunny_k = parse_count(key, value);
  } else if (key == "presolve_budget_fraction") {
    const auto v = parse_double(value);
    if (!v) throw InvalidInput("hyperparameter presolve_budget_fraction: '" + std::string(value) + "' is not a number");
    hp.presolve_budget_fraction = *v;
  } else if (key == "seed") {
    const auto v = parse_integer(value);
    if (!v || *v < 0) throw InvalidInput("hyperparameter seed: '" + std::string(value) + "' is not a non-negative integer");
    hp.seed = static_cast<std::uint64_t>(*v);
  } else if (key == "learner") {
    const auto v = parse_learner_kind(value);
    if (!v) throw InvalidInput("hyperparameter learner: expected forest or knn, got '" + std::string(value) + "'");
    hp.learner = *v;
  } else if (key == "feature_groups") {
    hp.feature_groups.clear();
    if (!value.empty()) {
      for (auto& name : split_fields(value, '+')) {
        if (name.empty()) throw InvalidInput("hyperparameter feature_groups: empty group name");
        hp.feature_groups.push_back(name);
      }
    }
  } else {
    throw InvalidInput("unknown hyperparameter '" + std::string(key) + "'");
  }
  check_hyperparameters(hp);
}

void set_hyperparameter(Hyperparameters& hp, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw InvalidInput("hyperparameter '" + std::string(assignment) + "' is not of the form key=value");
  }
  set_hyperparameter(hp, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> describe(const Hyperparameters& hp) {
  std::string groups;
  for (const auto& g : hp.feature_groups) groups += (groups.empty() ? "" : "+") + g;
  return {
      {"k_neighbors", std::to_string(hp.k_neighbors)},
      {"n_trees", std::to_string(hp.n_trees)},
      {"min_leaf", std::to_string(hp.min_leaf)},
      {"features_per_split", hp.features_per_split == 0 ? "auto" : std::to_string(hp.features_per_split)},
      {"k_clusters", std::to_string(hp.k_clusters)},
      {"sunny_k", std::to_string(hp.sunny_k)},
      {"presolve_budget_fraction", format_double(hp.presolve_budget_fraction)},
      {"seed", std::to_string(hp.seed)},
      {"learner", std::string(to_string(hp.learner))},
      {"feature_groups", groups.empty() ? "all" : groups},
  };
}

void check_hyperparameters(const Hyperparameters& hp) {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw InvalidInput(std::string("hyperparameter ") + name + " must be positive");
  };
  positive(hp.k_neighbors, "k_neighbors");
  positive(hp.n_trees, "n_trees");
  positive(hp.min_leaf, "min_leaf");
  positive(hp.k_clusters, "k_clusters");
  positive(hp.sunny_k, "sunny_k");
  if (!(hp.presolve_budget_fraction >= 0.0 && hp.presolve_budget_fraction < 1.0)) {
    throw InvalidInput("hyperparameter presolve_budget_fraction must lie in [0, 1)");
  }
}

std::optional<std::vector<double>> FeaturePipeline::transform(const FeatureSource& source,
                                                              std::size_t instance) const {
  std::vector<double> out(features.size());
  bool any = features.empty();
  for (std::size_t j = 0; j < features.size(); ++j) {
    const FeatureValue v = source.feature(instance, features[j]);
    if (v) any = true;
    out[j] = ((v ? *v : median[j]) - mean[j]) / scale[j];
  }
  if (!any) return std::nullopt;
  return out;
}

TrainingSet TrainingSet::build(const Scenario& s, std::span<const std::size_t> instances,
                               std::span<const std::string> feature_groups) {
  if (instances.empty()) throw InvalidInput("training set is empty");
  TrainingSet ts;
  ts.instances.assign(instances.begin(), instances.end());

  std::vector<std::size_t> groups;
  if (feature_groups.empty()) {
    groups.resize(s.feature_groups.size());
    std::iota(groups.begin(), groups.end(), std::size_t{0});
  } else {
    for (std::size_t g = 0; g < s.feature_groups.size(); ++g) {
      if (std::find(feature_groups.begin(), feature_groups.end(), s.feature_groups[g].name) != feature_groups.end()) {
        groups.push_back(g);
      }
    }
    for (const auto& name : feature_groups) {
      const bool known = std::any_of(s.feature_groups.begin(), s.feature_groups.end(),
                                     [&](const FeatureGroup& g) { return g.name == name; });
      if (!known) throw InvalidInput("unknown feature group '" + name + "'");
    }
  }
  std::vector<std::size_t> candidates;
  if (s.feature_groups.empty()) {
    candidates.resize(s.num_features());
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  } else {
    for (std::size_t g : groups) {
      const auto& idx = s.feature_groups[g].feature_indices;
      candidates.insert(candidates.end(), idx.begin(), idx.end());
    }
    std::sort(candidates.begin(), candidates.end());
  }

  auto& p = ts.pipeline;
  const double n = static_cast<double>(instances.size());
  for (std::size_t f : candidates) {
    std::vector<double> seen;
    for (std::size_t i : instances) {
      if (const auto v = s.feature(i, f)) seen.push_back(*v);
    }
    if (seen.empty()) continue;
    std::sort(seen.begin(), seen.end());
    const std::size_t m = seen.size();
    const double median = m % 2 == 1 ? seen[m / 2] : (seen[m / 2 - 1] + seen[m / 2]) / 2.0;
    double sum = 0.0;
    for (std::size_t i : instances) sum += s.feature(i, f).value_or(median);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i : instances) {
      const double d = s.feature(i, f).value_or(median) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) continue;
    p.features.push_back(f);
    p.median.push_back(median);
    p.mean.push_back(mean);
    p.scale.push_back(sd);
  }
  for (std::size_t g : groups) {
    const auto& idx = s.feature_groups[g].feature_indices;
    const bool used = std::any_of(idx.begin(), idx.end(), [&](std::size_t f) {
      return std::binary_search(p.features.begin(), p.features.end(), f);
    });
    if (used) p.groups.push_back(g);
  }

  const ScenarioFeatures source(s);
  ts.x = learn::Matrix(0, p.features.size());
  ts.cost = learn::Matrix(0, s.num_algorithms());
  std::vector<double> costs(s.num_algorithms());
  for (std::size_t i : instances) {
    // Imputation of a fully missing row is fine for training.
    std::vector<double> row(p.features.size());
    for (std::size_t j = 0; j < p.features.size(); ++j) {
      row[j] = (s.feature(i, p.features[j]).value_or(p.median[j]) - p.mean[j]) / p.scale[j];
    }
    ts.x.append_row(row);
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) costs[a] = effective_cost(s, i, a);
    ts.cost.append_row(costs);
  }
  return ts;
}

double Learner::predict(std::span<const double> x) const {
  return kind == LearnerKind::forest ? forest.predict(x) : knn.predict(x);
}

std::size_t Learner::predict_class(std::span<const double> x) const {
  return kind == LearnerKind::forest ? forest.predict_class(x) : knn.predict_class(x);
}

namespace {

std::uint64_t submodel_seed(std::uint64_t seed, std::uint64_t id) { return splitmix64(seed ^ splitmix64(id + 1)); }

learn::ForestParams forest_params(const Hyperparameters& hp, std::uint64_t id) {
  return {hp.n_trees, hp.min_leaf, hp.features_per_split, true, submodel_seed(hp.seed, id)};
}

Learner fit_regressor(const learn::Matrix& x, std::span<const double> y, const Hyperparameters& hp,
                      std::uint64_t id) {
  Learner l;
  l.kind = hp.learner;
  if (hp.learner == LearnerKind::forest) {
    l.forest = learn::RandomForest::fit_regression(x, y, forest_params(hp, id));
  } else {
    l.knn = learn::KnnModel::fit(x, {y.begin(), y.end()}, hp.k_neighbors);
  }
  return l;
}

Learner fit_classifier(const learn::Matrix& x, std::span<const std::size_t> labels, std::size_t classes,
                       const Hyperparameters& hp, std::uint64_t id) {
  Learner l;
  l.kind = hp.learner;
  if (hp.learner == LearnerKind::forest) {
    l.forest = learn::RandomForest::fit_classification(x, labels, classes, forest_params(hp, id));
  } else {
    std::vector<double> targets(labels.begin(), labels.end());
    l.knn = learn::KnnModel::fit(x, std::move(targets), hp.k_neighbors);
  }
  return l;
}

std::vector<double> column(const learn::Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = m(r, c);
  return out;
}

std::size_t argmin_cost_row(const learn::Matrix& cost, std::size_t r) {
  const auto row = cost.row(r);
  return static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
}

// Lower score wins; ties go to lower training cost, then portfolio order.
std::size_t pick_lowest(std::span<const double> score, std::span<const double> training_cost) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < score.size(); ++a) {
    if (score[a] < score[best] || (score[a] == score[best] && training_cost[a] < training_cost[best])) best = a;
  }
  return best;
}

SelectorModel base_model(const Scenario& s, const TrainingSet& train, const Hyperparameters& hp, SelectorKind kind) {
  check_hyperparameters(hp);
  if (train.instances.empty() || train.cost.rows == 0) throw InvalidInput("training set is empty");
  if (s.num_algorithms() == 0) throw InvalidInput("empty portfolio");
  SelectorModel m;
  m.kind = kind;
  m.hp = hp;
  m.scenario_id = s.id;
  m.objective = s.objective;
  m.cutoff = s.is_runtime() ? std::optional<double>(s.cutoff_seconds()) : std::nullopt;
  m.algorithms = s.algorithms;
  m.pipeline = train.pipeline;
  m.training_cost.assign(s.num_algorithms(), 0.0);
  for (std::size_t r = 0; r < train.cost.rows; ++r) {
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) m.training_cost[a] += train.cost(r, a);
  }
  m.fallback_algorithm = static_cast<std::size_t>(
      std::min_element(m.training_cost.begin(), m.training_cost.end()) - m.training_cost.begin());
  return m;
}

}  // namespace

SelectorModel fit_regression(const Scenario& s, const TrainingSet& train, const Hyperparameters& hp) {
  SelectorModel m = base_model(s, train, hp, SelectorKind::regression);
  for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
    m.regressors.push_back(fit_regressor(train.x, column(train.cost, a), hp, a));
  }
  return m;
}

SelectorModel fit_pairwise(const Scenario& s, const TrainingSet& train, const Hyperparameters& hp) {
  if (s.num_algorithms() < 2) throw InvalidInput("pairwise selector needs at least two algorithms");
  SelectorModel m = base_model(s, train, hp, SelectorKind::pairwise);
  const std::size_t k = s.num_algorithms();
  std::uint64_t id = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b, ++id) {
      PairModel pair;
      pair.first = a;
      pair.second = b;
      learn::Matrix x(0, train.x.cols);
      std::vector<std::size_t> labels;
      for (std::size_t r = 0; r < train.cost.rows; ++r) {
        const double ca = train.cost(r, a);
        const double cb = train.cost(r, b);
        if (ca == cb) continue;
        x.append_row(train.x.row(r));
        labels.push_back(ca < cb ? 0 : 1);
      }
      if (labels.empty()) {
        pair.constant_winner = m.training_cost[b] < m.training_cost[a] ? b : a;
      } else {
        pair.model = fit_classifier(x, labels, 2, hp, id);
      }
      m.pairs.push_back(std::move(pair));
    }
  }
  return m;
}

SelectorModel fit_cluster(const Scenario& s, const TrainingSet& train, const Hyperparameters& hp,
                          std::vector<std::string>* warnings) {
  SelectorModel m = base_model(s, train, hp, SelectorKind::cluster);
  std::size_t k = hp.k_clusters;
  if (k > train.x.rows) {
    if (warnings) {
      warnings->push_back("k_clusters=" + std::to_string(k) + " exceeds the " + std::to_string(train.x.rows) +
                          " training instances; using " + std::to_string(train.x.rows));
    }
    k = train.x.rows;
  }
  const auto result = learn::kmeans(train.x, k, CounterRng(hp.seed, 0x636c7573ULL));
  m.centroids = result.centroids;
  learn::Matrix totals(k, s.num_algorithms());
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t r = 0; r < train.x.rows; ++r) {
    const std::size_t c = result.assignment[r];
    ++sizes[c];
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) totals(c, a) += train.cost(r, a);
  }
  for (std::size_t c = 0; c < k; ++c) {
    m.champions.push_back(sizes[c] == 0 ? m.fallback_algorithm : argmin_cost_row(totals, c));
  }
  return m;
}

SelectorModel fit_stacking(const Scenario& s, const TrainingSet& train, const Hyperparameters& hp) {
  SelectorModel m = base_model(s, train, hp, SelectorKind::stacking);
  const std::size_t n = train.x.rows;
  const std::size_t k = s.num_algorithms();
  for (std::size_t a = 0; a < k; ++a) m.regressors.push_back(fit_regressor(train.x, column(train.cost, a), hp, a));

  learn::Matrix level1(n, k);
  const std::size_t folds = std::min<std::size_t>(5, n);
  if (folds < 2) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t a = 0; a < k; ++a) level1(r, a) = m.regressors[a].predict(train.x.row(r));
    }
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng(hp.seed, 0x737461636bULL).shuffle(std::span<std::size_t>(order));
    std::vector<std::size_t> fold_of(n);
    for (std::size_t p = 0; p < n; ++p) fold_of[order[p]] = p % folds;
    for (std::size_t f = 0; f < folds; ++f) {
      learn::Matrix x(0, train.x.cols);
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < n; ++r) {
        if (fold_of[r] != f) {
          x.append_row(train.x.row(r));
          rows.push_back(r);
        }
      }
      for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> y;
        for (std::size_t r : rows) y.push_back(train.cost(r, a));
        const Learner l = fit_regressor(x, y, hp, 1000 + a * folds + f);
        for (std::size_t r = 0; r < n; ++r) {
          if (fold_of[r] == f) level1(r, a) = l.predict(train.x.row(r));
        }
      }
    }
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t r = 0; r < n; ++r) labels[r] = argmin_cost_row(train.cost, r);
  Hyperparameters level2 = hp;
  level2.features_per_split = 0;
  m.combiner = fit_classifier(level1, labels, k, level2, 999);
  return m;
}

SelectorModel fit_sunny(const Scenario& s, const TrainingSet& train, const Hyperparameters& hp) {
  SelectorModel m = base_model(s, train, hp, SelectorKind::sunny);
  m.neighbors = train.x;
  m.neighbor_costs = train.cost;
  return m;
}

bool presolved(const Scenario& s, std::size_t instance, std::span<const SolverStep> prefix) {
  for (const auto& step : prefix) {
    const RunRecord& r = s.run(instance, step.algorithm);
    if (r.status == RunStatus::ok && r.value <= step.budget) return true;
  }
  return false;
}

std::vector<SolverStep> build_presolver(const Scenario& s, std::span<const std::size_t> train,
                                        const Hyperparameters& hp, CompetitionMode mode) {
  std::vector<SolverStep> prefix;
  if (!s.is_runtime() || hp.presolve_budget_fraction <= 0.0 || train.empty()) return prefix;
  const double cutoff = s.cutoff_seconds();
  const double floor = cutoff * 1e-4;
  const std::size_t max_steps = mode == CompetitionMode::icon2015 ? 1 : 3;
  double left = hp.presolve_budget_fraction * cutoff;
  std::vector<std::size_t> open(train.begin(), train.end());
  std::vector<bool> used(s.num_algorithms(), false);

  while (prefix.size() < max_steps && !open.empty()) {
    bool found = false;
    std::size_t best_alg = 0, best_solved = 0;
    double best_alloc = 0.0, best_ratio = 0.0;
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
      if (used[a]) continue;
      std::vector<double> times;
      for (std::size_t i : open) {
        const RunRecord& r = s.run(i, a);
        if (is_solved(r, cutoff)) times.push_back(r.value);
      }
      std::sort(times.begin(), times.end());
      for (std::size_t j = 0; j < times.size(); ++j) {
        if (j + 1 < times.size() && times[j + 1] == times[j]) continue;
        const double alloc = std::max(times[j], floor);
        if (alloc > left) break;
        const auto solved = static_cast<std::size_t>(
            std::upper_bound(times.begin(), times.end(), alloc) - times.begin());
        const double ratio = static_cast<double>(solved) / alloc;
        const bool better = !found || ratio > best_ratio ||
                            (ratio == best_ratio && (solved > best_solved ||
                                                     (solved == best_solved && alloc < best_alloc)));
        if (better) {
          found = true;
          best_alg = a;
          best_solved = solved;
          best_alloc = alloc;
          best_ratio = ratio;
        }
      }
    }
    if (!found) break;
    prefix.push_back({best_alg, best_alloc});
    used[best_alg] = true;
    left -= best_alloc;
    std::erase_if(open, [&](std::size_t i) {
      const RunRecord& r = s.run(i, best_alg);
      return r.status == RunStatus::ok && r.value <= best_alloc;
    });
  }
  return prefix;
}

SelectorModel fit_selector(const Scenario& s, std::span<const std::size_t> train, SelectorKind kind,
                           const Hyperparameters& hp, CompetitionMode mode, std::vector<std::string>* warnings) {
  check_hyperparameters(hp);
  if (train.empty()) throw InvalidInput("training set is empty");
  const auto prefix = build_presolver(s, train, hp, mode);
  std::vector<std::size_t> rest;
  for (std::size_t i : train) {
    if (!presolved(s, i, prefix)) rest.push_back(i);
  }
  if (rest.empty()) {
    if (warnings) warnings->push_back("pre-solver solves every training instance; fitting on all of them");
    rest.assign(train.begin(), train.end());
  }
  const TrainingSet ts = TrainingSet::build(s, rest, hp.feature_groups);
  SelectorModel m;
  switch (kind) {
    case SelectorKind::regression: m = fit_regression(s, ts, hp); break;
    case SelectorKind::cluster: m = fit_cluster(s, ts, hp, warnings); break;
    case SelectorKind::pairwise: m = fit_pairwise(s, ts, hp); break;
    case SelectorKind::stacking: m = fit_stacking(s, ts, hp); break;
    case SelectorKind::sunny: m = fit_sunny(s, ts, hp); break;
  }
  m.presolve = prefix;
  return m;
}

namespace {

std::size_t choose_single(const SelectorModel& m, std::span<const double> x) {
  const std::size_t k = m.algorithms.size();
  switch (m.kind) {
    case SelectorKind::regression: {
      std::vector<double> pred(k);
      for (std::size_t a = 0; a < k; ++a) pred[a] = m.regressors[a].predict(x);
      return pick_lowest(pred, m.training_cost);
    }
    case SelectorKind::pairwise: {
      std::vector<double> negative_votes(k, 0.0);
      for (const auto& pair : m.pairs) {
        std::size_t winner;
        if (pair.constant_winner) {
          winner = *pair.constant_winner;
        } else {
          winner = pair.model.predict_class(x) == 0 ? pair.first : pair.second;
        }
        negative_votes[winner] -= 1.0;
      }
      return pick_lowest(negative_votes, m.training_cost);
    }
    case SelectorKind::cluster: return m.champions[learn::nearest_centroid(m.centroids, x)];
    case SelectorKind::stacking: {
      std::vector<double> level1(k);
      for (std::size_t a = 0; a < k; ++a) level1[a] = m.regressors[a].predict(x);
      return m.combiner.predict_class(level1);
    }
    case SelectorKind::sunny: break;
  }
  throw std::logic_error("choose_single: sunny models emit schedules");
}

struct SunnySlice {
  std::size_t algorithm;
  double budget;
  std::size_t solved;
  double mean_cost;
};

std::vector<SolverStep> sunny_schedule(const SelectorModel& m, std::span<const double> x, double remaining) {
  const std::size_t k = m.algorithms.size();
  const auto nn = learn::nearest_neighbors(m.neighbors, x, m.hp.sunny_k);
  if (nn.empty()) throw InvalidInput("sunny: empty neighborhood");
  std::vector<std::size_t> solved(k, 0);
  std::vector<double> mean(k, 0.0);
  for (std::size_t r : nn) {
    for (std::size_t a = 0; a < k; ++a) {
      const double c = m.neighbor_costs(r, a);
      mean[a] += c / static_cast<double>(nn.size());
      if (m.cutoff && c <= *m.cutoff) ++solved[a];
    }
  }
  const std::size_t best = pick_lowest(mean, m.training_cost);
  const std::size_t total = std::accumulate(solved.begin(), solved.end(), std::size_t{0});
  if (!m.cutoff) return {SolverStep{best, 0.0}};
  if (total == 0) return {SolverStep{best, remaining}};

  std::vector<SunnySlice> slices;
  double assigned = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (solved[a] == 0 || a == best) continue;
    const double share = remaining * static_cast<double>(solved[a]) / static_cast<double>(total);
    const double budget = std::floor(share * 1024.0) / 1024.0;
    if (budget <= 0.0) continue;
    slices.push_back({a, budget, solved[a], mean[a]});
    assigned += budget;
  }
  // The best algorithm takes its share plus every rounding remainder.
  slices.push_back({best, remaining - assigned, solved[best], mean[best]});
  std::stable_sort(slices.begin(), slices.end(), [](const SunnySlice& l, const SunnySlice& r) {
    if (l.solved != r.solved) return l.solved > r.solved;
    if (l.mean_cost != r.mean_cost) return l.mean_cost < r.mean_cost;
    return l.algorithm < r.algorithm;
  });
  std::vector<SolverStep> out;
  for (const auto& sl : slices) out.push_back({sl.algorithm, sl.budget});
  return out;
}

}  // namespace

Schedule predict(const SelectorModel& m, const Scenario& s, std::size_t instance, const FeatureSource& features,
                 std::vector<std::string>* warnings) {
  if (s.algorithms != m.algorithms) throw InvalidInput("model portfolio does not match the scenario");
  if (s.objective != m.objective) throw InvalidInput("model objective does not match the scenario");
  if (!m.pipeline.features.empty() && m.pipeline.features.back() >= s.num_features()) {
    throw InvalidInput("scenario has fewer features than the model reads");
  }
  if (instance >= s.num_instances()) throw std::out_of_range("predict: unknown instance index");

  const auto x = m.pipeline.transform(features, instance);
  Schedule out;
  if (!s.is_runtime()) {
    std::size_t choice = m.fallback_algorithm;
    if (!x) {
      if (warnings) warnings->push_back("instance '" + s.instances[instance] + "' has no features; using the SBS");
    } else if (m.kind == SelectorKind::sunny) {
      choice = sunny_schedule(m, *x, 0.0).front().algorithm;
    } else {
      choice = choose_single(m, *x);
    }
    out.steps.emplace_back(SolverStep{choice, 0.0});
    return out;
  }

  const double cutoff = s.cutoff_seconds();
  double remaining = cutoff;
  for (const auto& step : m.presolve) {
    out.steps.emplace_back(step);
    remaining -= step.budget;
  }
  if (!x) {
    if (warnings) warnings->push_back("instance '" + s.instances[instance] + "' has no features; using the SBS");
    out.steps.emplace_back(SolverStep{m.fallback_algorithm, remaining});
    return out;
  }
  for (std::size_t g : m.pipeline.groups) out.steps.emplace_back(FeatureStep{g});
  if (m.kind == SelectorKind::sunny) {
    for (const auto& step : sunny_schedule(m, *x, remaining)) out.steps.emplace_back(step);
  } else {
    out.steps.emplace_back(SolverStep{choose_single(m, *x), remaining});
  }
  return out;
}

Schedule predict(const SelectorModel& model, const Scenario& scenario, std::size_t instance) {
  return predict(model, scenario, instance, ScenarioFeatures(scenario));
}

PredictionTable predict_all(const SelectorModel& model, const Scenario& scenario,
                            std::span<const std::size_t> instances, std::vector<std::string>* warnings) {
  const ScenarioFeatures source(scenario);
  PredictionTable out;
  for (std::size_t i : instances) out.emplace(i, predict(model, scenario, i, source, warnings));
  return out;
}

}  // namespace asbench
