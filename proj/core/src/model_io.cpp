#include "asbench/model_io.hpp"

#include "asbench/errors.hpp"
#include "asbench/text.hpp"
#include "json.hpp"

namespace asbench {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const learn::Matrix& m) { return Json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}; }

learn::Matrix matrix_from(const Json& j) {
  learn::Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) throw InvalidInput("matrix data does not match its shape");
  return m;
}

Json to_json(const learn::RandomForest& f) {
  Json trees = Json::array();
  for (const auto& t : f.trees) {
    Json feature = Json::array(), threshold = Json::array(), left = Json::array(), right = Json::array(),
         value = Json::array();
    for (const auto& n : t.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      value.push_back(n.value);
    }
    trees.push_back(Json{{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right},
                         {"value", value}});
  }
  return Json{{"classification", f.classification},
              {"num_features", f.num_features},
              {"num_classes", f.num_classes},
              {"trees", trees}};
}

learn::RandomForest forest_from(const Json& j) {
  learn::RandomForest f;
  f.classification = j.at("classification").get<bool>();
  f.num_features = j.at("num_features").get<std::size_t>();
  f.num_classes = j.at("num_classes").get<std::size_t>();
  for (const auto& t : j.at("trees")) {
    const auto feature = t.at("feature").get<std::vector<std::int32_t>>();
    const auto threshold = t.at("threshold").get<std::vector<double>>();
    const auto left = t.at("left").get<std::vector<std::int32_t>>();
    const auto right = t.at("right").get<std::vector<std::int32_t>>();
    const auto value = t.at("value").get<std::vector<std::vector<double>>>();
    const std::size_t n = feature.size();
    if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || value.size() != n) {
      throw InvalidInput("tree arrays differ in length");
    }
    learn::Tree tree;
    for (std::size_t k = 0; k < n; ++k) {
      const bool leaf = feature[k] < 0;
      const auto in_range = [&](std::int32_t c) { return c > static_cast<std::int32_t>(k) && c < static_cast<std::int32_t>(n); };
      if (!leaf && (static_cast<std::size_t>(feature[k]) >= f.num_features || !in_range(left[k]) ||
                    !in_range(right[k]))) {
        throw InvalidInput("tree node " + std::to_string(k) + " is inconsistent");
      }
      const std::size_t width = f.classification ? f.num_classes : 1;
      if (leaf && value[k].size() != width) throw InvalidInput("tree leaf " + std::to_string(k) + " has a bad payload");
      tree.nodes.push_back({feature[k], threshold[k], left[k], right[k], value[k]});
    }
    f.trees.push_back(std::move(tree));
  }
  if (f.trees.empty()) throw InvalidInput("forest has no trees");
  return f;
}

Json to_json(const Learner& l) {
  if (l.kind == LearnerKind::forest) return Json{{"kind", "forest"}, {"forest", to_json(l.forest)}};
  return Json{{"kind", "knn"}, {"k", l.knn.k}, {"points", to_json(l.knn.points)}, {"targets", l.knn.targets}};
}

Learner learner_from(const Json& j) {
  Learner l;
  const auto kind = parse_learner_kind(j.at("kind").get<std::string>());
  if (!kind) throw InvalidInput("unknown learner kind");
  l.kind = *kind;
  if (l.kind == LearnerKind::forest) {
    l.forest = forest_from(j.at("forest"));
  } else {
    l.knn.k = j.at("k").get<std::size_t>();
    l.knn.points = matrix_from(j.at("points"));
    l.knn.targets = j.at("targets").get<std::vector<double>>();
    if (l.knn.targets.size() != l.knn.points.rows || l.knn.points.rows == 0) {
      throw InvalidInput("k-NN store is inconsistent");
    }
  }
  return l;
}

Json to_json(const Hyperparameters& hp) {
  return Json{{"k_neighbors", hp.k_neighbors},
              {"n_trees", hp.n_trees},
              {"min_leaf", hp.min_leaf},
              {"features_per_split", hp.features_per_split},
              {"k_clusters", hp.k_clusters},
              {"sunny_k", hp.sunny_k},
              {"presolve_budget_fraction", hp.presolve_budget_fraction},
              {"seed", hp.seed},
              {"learner", std::string(to_string(hp.learner))},
              {"feature_groups", hp.feature_groups}};
}

Hyperparameters hyperparameters_from(const Json& j) {
  Hyperparameters hp;
  hp.k_neighbors = j.at("k_neighbors").get<std::size_t>();
  hp.n_trees = j.at("n_trees").get<std::size_t>();
  hp.min_leaf = j.at("min_leaf").get<std::size_t>();
  hp.features_per_split = j.at("features_per_split").get<std::size_t>();
  hp.k_clusters = j.at("k_clusters").get<std::size_t>();
  hp.sunny_k = j.at("sunny_k").get<std::size_t>();
  hp.presolve_budget_fraction = j.at("presolve_budget_fraction").get<double>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  const auto learner = parse_learner_kind(j.at("learner").get<std::string>());
  if (!learner) throw InvalidInput("unknown learner kind");
  hp.learner = *learner;
  hp.feature_groups = j.at("feature_groups").get<std::vector<std::string>>();
  check_hyperparameters(hp);
  return hp;
}

SelectorModel model_from(const Json& doc) {
  if (doc.at("format").get<std::string>() != "asbench-selector-model") throw InvalidInput("not a selector model");
  const int version = doc.at("version").get<int>();
  if (version != kModelFormatVersion) {
    throw InvalidInput("unsupported model version " + std::to_string(version) + " (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  }
  SelectorModel m;
  const auto kind = parse_selector_kind(doc.at("kind").get<std::string>());
  if (!kind) throw InvalidInput("unknown selector kind");
  m.kind = *kind;
  m.hp = hyperparameters_from(doc.at("hyperparameters"));
  m.scenario_id = doc.at("scenario").get<std::string>();
  const auto objective = parse_objective(doc.at("objective").get<std::string>());
  if (!objective) throw InvalidInput("unknown objective");
  m.objective = *objective;
  if (!doc.at("cutoff").is_null()) m.cutoff = doc.at("cutoff").get<double>();
  m.algorithms = doc.at("algorithms").get<std::vector<std::string>>();
  const std::size_t k = m.algorithms.size();
  if (k == 0) throw InvalidInput("model has an empty portfolio");
  auto check_algorithm = [&](std::size_t a) {
    if (a >= k) throw InvalidInput("algorithm index " + std::to_string(a) + " out of range");
    return a;
  };
  for (const auto& step : doc.at("presolve")) {
    m.presolve.push_back({check_algorithm(step.at("algorithm").get<std::size_t>()), step.at("budget").get<double>()});
  }
  const auto& p = doc.at("pipeline");
  m.pipeline.groups = p.at("groups").get<std::vector<std::size_t>>();
  m.pipeline.features = p.at("features").get<std::vector<std::size_t>>();
  m.pipeline.median = p.at("median").get<std::vector<double>>();
  m.pipeline.mean = p.at("mean").get<std::vector<double>>();
  m.pipeline.scale = p.at("scale").get<std::vector<double>>();
  const std::size_t d = m.pipeline.features.size();
  if (m.pipeline.median.size() != d || m.pipeline.mean.size() != d || m.pipeline.scale.size() != d) {
    throw InvalidInput("feature pipeline arrays differ in length");
  }
  m.fallback_algorithm = check_algorithm(doc.at("fallback_algorithm").get<std::size_t>());
  m.training_cost = doc.at("training_cost").get<std::vector<double>>();
  if (m.training_cost.size() != k) throw InvalidInput("training_cost does not match the portfolio");
  for (const auto& r : doc.at("regressors")) m.regressors.push_back(learner_from(r));
  for (const auto& pj : doc.at("pairs")) {
    PairModel pair;
    pair.first = check_algorithm(pj.at("first").get<std::size_t>());
    pair.second = check_algorithm(pj.at("second").get<std::size_t>());
    if (pj.at("constant_winner").is_null()) {
      pair.model = learner_from(pj.at("model"));
    } else {
      pair.constant_winner = check_algorithm(pj.at("constant_winner").get<std::size_t>());
    }
    m.pairs.push_back(std::move(pair));
  }
  if (!doc.at("combiner").is_null()) m.combiner = learner_from(doc.at("combiner"));
  m.centroids = matrix_from(doc.at("centroids"));
  m.champions = doc.at("champions").get<std::vector<std::size_t>>();
  for (std::size_t c : m.champions) check_algorithm(c);
  m.neighbors = matrix_from(doc.at("neighbors"));
  m.neighbor_costs = matrix_from(doc.at("neighbor_costs"));

  const bool needs_regressors = m.kind == SelectorKind::regression || m.kind == SelectorKind::stacking;
  if (needs_regressors && m.regressors.size() != k) throw InvalidInput("expected one regressor per algorithm");
  if (m.kind == SelectorKind::pairwise && m.pairs.size() != k * (k - 1) / 2) {
    throw InvalidInput("expected one model per algorithm pair");
  }
  if (m.kind == SelectorKind::cluster && (m.centroids.rows == 0 || m.champions.size() != m.centroids.rows)) {
    throw InvalidInput("cluster model is inconsistent");
  }
  if (m.kind == SelectorKind::sunny && (m.neighbors.rows == 0 || m.neighbor_costs.rows != m.neighbors.rows)) {
    throw InvalidInput("sunny neighbor store is inconsistent");
  }
  return m;
}

}  // namespace

std::string format_model(const SelectorModel& m) {
  Json doc;
  doc["format"] = "asbench-selector-model";
  doc["version"] = kModelFormatVersion;
  doc["kind"] = std::string(to_string(m.kind));
  doc["hyperparameters"] = to_json(m.hp);
  doc["scenario"] = m.scenario_id;
  doc["objective"] = std::string(to_string(m.objective));
  doc["cutoff"] = m.cutoff ? Json(*m.cutoff) : Json(nullptr);
  doc["algorithms"] = m.algorithms;
  doc["presolve"] = Json::array();
  for (const auto& step : m.presolve) doc["presolve"].push_back(Json{{"algorithm", step.algorithm}, {"budget", step.budget}});
  doc["pipeline"] = Json{{"groups", m.pipeline.groups},
                         {"features", m.pipeline.features},
                         {"median", m.pipeline.median},
                         {"mean", m.pipeline.mean},
                         {"scale", m.pipeline.scale}};
  doc["fallback_algorithm"] = m.fallback_algorithm;
  doc["training_cost"] = m.training_cost;
  doc["regressors"] = Json::array();
  for (const auto& r : m.regressors) doc["regressors"].push_back(to_json(r));
  doc["pairs"] = Json::array();
  for (const auto& pair : m.pairs) {
    Json pj{{"first", pair.first}, {"second", pair.second}};
    pj["constant_winner"] = pair.constant_winner ? Json(*pair.constant_winner) : Json(nullptr);
    if (!pair.constant_winner) pj["model"] = to_json(pair.model);
    doc["pairs"].push_back(pj);
  }
  doc["combiner"] = m.kind == SelectorKind::stacking ? to_json(m.combiner) : Json(nullptr);
  doc["centroids"] = to_json(m.centroids);
  doc["champions"] = m.champions;
  doc["neighbors"] = to_json(m.neighbors);
  doc["neighbor_costs"] = to_json(m.neighbor_costs);
  return doc.dump() + "\n";
}

SelectorModel parse_model(const std::string& contents, const std::string& file_name) {
  try {
    return model_from(Json::parse(contents));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(file_name + ": malformed model artifact: " + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(file_name + ": " + e.what());
  }
}

void write_model(const SelectorModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, format_model(model));
}

SelectorModel read_model(const std::filesystem::path& path) { return parse_model(read_file(path), path.string()); }

}  // namespace asbench
