#include "asbench/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace asbench::learn {

void Matrix::append_row(std::span<const double> values) {
  if (rows == 0 && cols == 0) cols = values.size();
  if (values.size() != cols) throw std::invalid_argument("Matrix::append_row: width mismatch");
  data.insert(data.end(), values.begin(), values.end());
  ++rows;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return sum;
}

const std::vector<double>& Tree::leaf(std::span<const double> x) const {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& n = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[node].value;
}

namespace {

struct Builder {
  const Matrix& x;
  std::span<const double> y;  // regression target or class label
  bool classification;
  std::size_t num_classes;
  std::size_t min_leaf;
  std::size_t mtry;
  CounterRng rng;

  // Impurity of a node given running statistics.
  struct Stats {
    double n = 0, sum = 0, sum_sq = 0;
    std::vector<double> counts;

    void add(double v, bool cls) {
      n += 1;
      if (cls) {
        counts[static_cast<std::size_t>(v)] += 1;
      } else {
        sum += v;
        sum_sq += v * v;
      }
    }
    void remove(double v, bool cls) {
      n -= 1;
      if (cls) {
        counts[static_cast<std::size_t>(v)] -= 1;
      } else {
        sum -= v;
        sum_sq -= v * v;
      }
    }
    [[nodiscard]] double impurity(bool cls) const {
      if (n == 0) return 0.0;
      if (cls) {
        double sq = 0.0;
        for (double c : counts) sq += c * c;
        return n - sq / n;
      }
      return std::max(0.0, sum_sq - sum * sum / n);
    }
  };

  std::vector<double> leaf_value(std::span<const std::size_t> idx) const {
    if (classification) {
      std::vector<double> freq(num_classes, 0.0);
      for (std::size_t i : idx) freq[static_cast<std::size_t>(y[i])] += 1.0;
      for (auto& f : freq) f /= static_cast<double>(idx.size());
      return freq;
    }
    double sum = 0.0;
    for (std::size_t i : idx) sum += y[i];
    return {sum / static_cast<double>(idx.size())};
  }

  bool pure(std::span<const std::size_t> idx) const {
    for (std::size_t i : idx) {
      if (y[i] != y[idx.front()]) return false;
    }
    return true;
  }

  Tree build(std::vector<std::size_t> idx) {
    Tree tree;
    struct Pending {
      std::size_t node, begin, end;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, idx.size()});
    std::vector<std::size_t> features(x.cols);
    std::vector<std::pair<double, std::size_t>> sorted;

    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      std::span<std::size_t> here(idx.data() + p.begin, p.end - p.begin);
      const std::size_t n = here.size();

      bool split_found = false;
      std::size_t best_feature = 0, best_pos = 0;
      double best_score = 0.0, best_threshold = 0.0;
      if (n >= 2 * min_leaf && !pure(here)) {
        std::iota(features.begin(), features.end(), std::size_t{0});
        // Drawing the order lazily keeps unused draws out of the stream.
        for (std::size_t f = 0; f < features.size(); ++f) {
          if (f >= mtry && split_found) break;
          std::swap(features[f], features[f + rng.below(features.size() - f)]);
          const std::size_t feat = features[f];
          sorted.clear();
          for (std::size_t i : here) sorted.emplace_back(x(i, feat), i);
          std::sort(sorted.begin(), sorted.end());
          Stats left, right;
          left.counts.assign(classification ? num_classes : 0, 0.0);
          right.counts = left.counts;
          for (const auto& [v, i] : sorted) right.add(y[i], classification);
          for (std::size_t pos = 1; pos < n; ++pos) {
            const std::size_t moved = sorted[pos - 1].second;
            left.add(y[moved], classification);
            right.remove(y[moved], classification);
            if (pos < min_leaf || n - pos < min_leaf) continue;
            if (!(sorted[pos - 1].first < sorted[pos].first)) continue;
            const double score = left.impurity(classification) + right.impurity(classification);
            if (!split_found || score < best_score) {
              split_found = true;
              best_score = score;
              best_feature = feat;
              best_pos = pos;
              const double lo = sorted[pos - 1].first;
              const double hi = sorted[pos].first;
              double mid = lo + (hi - lo) / 2.0;
              if (!(mid < hi)) mid = lo;
              best_threshold = mid;
            }
          }
        }
      }

      if (!split_found) {
        tree.nodes[p.node].value = leaf_value(here);
        continue;
      }
      std::stable_partition(here.begin(), here.end(),
                            [&](std::size_t i) { return x(i, best_feature) <= best_threshold; });
      const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[p.node];
      node.feature = static_cast<std::int32_t>(best_feature);
      node.threshold = best_threshold;
      node.left = left_id;
      node.right = left_id + 1;
      // Right first so the left subtree is expanded next.
      stack.push_back({static_cast<std::size_t>(left_id + 1), p.begin + best_pos, p.end});
      stack.push_back({static_cast<std::size_t>(left_id), p.begin, p.begin + best_pos});
    }
    return tree;
  }
};

RandomForest fit_forest(const Matrix& x, std::span<const double> y, bool classification, std::size_t num_classes,
                        const ForestParams& params) {
  if (x.rows == 0) throw std::invalid_argument("random forest: empty training data");
  if (y.size() != x.rows) throw std::invalid_argument("random forest: target count does not match rows");
  if (params.n_trees == 0 || params.min_leaf == 0) {
    throw std::invalid_argument("random forest: n_trees and min_leaf must be positive");
  }
  RandomForest forest;
  forest.classification = classification;
  forest.num_features = x.cols;
  forest.num_classes = num_classes;
  const std::size_t d = x.cols;
  std::size_t mtry = params.features_per_split;
  if (mtry == 0) mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
  mtry = std::min(mtry, d);
  const CounterRng base(params.seed);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Builder builder{x, y, classification, num_classes, params.min_leaf, mtry, base.substream(t)};
    std::vector<std::size_t> idx(x.rows);
    if (params.bootstrap) {
      for (auto& i : idx) i = builder.rng.below(x.rows);
      std::sort(idx.begin(), idx.end());
    } else {
      std::iota(idx.begin(), idx.end(), std::size_t{0});
    }
    forest.trees.push_back(builder.build(std::move(idx)));
  }
  return forest;
}

}  // namespace

RandomForest RandomForest::fit_regression(const Matrix& x, std::span<const double> y, const ForestParams& params) {
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("random forest: non-finite target");
  }
  return fit_forest(x, y, false, 0, params);
}

RandomForest RandomForest::fit_classification(const Matrix& x, std::span<const std::size_t> labels,
                                              std::size_t num_classes, const ForestParams& params) {
  if (num_classes == 0) throw std::invalid_argument("random forest: no classes");
  std::vector<double> y;
  y.reserve(labels.size());
  for (std::size_t l : labels) {
    if (l >= num_classes) throw std::invalid_argument("random forest: label out of range");
    y.push_back(static_cast<double>(l));
  }
  return fit_forest(x, y, true, num_classes, params);
}

double RandomForest::predict(std::span<const double> x) const {
  if (classification) throw std::logic_error("RandomForest::predict on a classifier");
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.leaf(x).front();
  return sum / static_cast<double>(trees.size());
}

std::vector<double> RandomForest::predict_proba(std::span<const double> x) const {
  if (!classification) throw std::logic_error("RandomForest::predict_proba on a regressor");
  std::vector<double> proba(num_classes, 0.0);
  for (const auto& tree : trees) {
    const auto& leaf = tree.leaf(x);
    for (std::size_t c = 0; c < num_classes; ++c) proba[c] += leaf[c];
  }
  for (auto& p : proba) p /= static_cast<double>(trees.size());
  return proba;
}

std::size_t RandomForest::predict_class(std::span<const double> x) const {
  const auto proba = predict_proba(x);
  return static_cast<std::size_t>(std::max_element(proba.begin(), proba.end()) - proba.begin());
}

std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::span<const double> query, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(points.rows);
  for (std::size_t r = 0; r < points.rows; ++r) dist.emplace_back(squared_distance(points.row(r), query), r);
  k = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back(dist[j].second);
  return out;
}

KnnModel KnnModel::fit(Matrix points, std::vector<double> targets, std::size_t k) {
  if (points.rows == 0) throw std::invalid_argument("k-NN: empty training data");
  if (targets.size() != points.rows) throw std::invalid_argument("k-NN: target count does not match rows");
  if (k == 0) throw std::invalid_argument("k-NN: k must be positive");
  return KnnModel{std::move(points), std::move(targets), k};
}

double KnnModel::predict(std::span<const double> x) const {
  const auto nn = nearest_neighbors(points, x, k);
  double sum = 0.0;
  for (std::size_t i : nn) sum += targets[i];
  return sum / static_cast<double>(nn.size());
}

std::size_t KnnModel::predict_class(std::span<const double> x) const {
  const auto nn = nearest_neighbors(points, x, k);
  std::vector<std::size_t> labels;
  for (std::size_t i : nn) labels.push_back(static_cast<std::size_t>(targets[i]));
  std::sort(labels.begin(), labels.end());
  std::size_t best = labels.front(), best_count = 0;
  for (std::size_t j = 0; j < labels.size();) {
    std::size_t end = j;
    while (end < labels.size() && labels[end] == labels[j]) ++end;
    if (end - j > best_count) {
      best_count = end - j;
      best = labels[j];
    }
    j = end;
  }
  return best;
}

std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> x) {
  std::size_t best = 0;
  double best_dist = squared_distance(centroids.row(0), x);
  for (std::size_t c = 1; c < centroids.rows; ++c) {
    const double d = squared_distance(centroids.row(c), x);
    if (d < best_dist) {
      best_dist = d;
      best = c;
    }
  }
  return best;
}

KMeansResult kmeans(const Matrix& points, std::size_t k, CounterRng rng, std::size_t max_iterations,
                    double tolerance) {
  const std::size_t n = points.rows;
  if (k == 0 || k > n) throw std::invalid_argument("kmeans: k must lie in [1, rows]");
  KMeansResult out;
  out.centroids = Matrix(0, points.cols);
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.below(n);
  chosen[first] = true;
  out.centroids.append_row(points.row(first));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), points.row(first));
  while (out.centroids.rows < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a centroid.
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    out.centroids.append_row(points.row(pick));
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(pick)));
  }

  out.assignment.assign(n, 0);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) out.assignment[i] = nearest_centroid(out.centroids, points.row(i));
    Matrix next(k, points.cols);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = out.assignment[i];
      ++sizes[c];
      for (std::size_t j = 0; j < points.cols; ++j) next(c, j) += points(i, j);
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < points.cols; ++j) {
        next(c, j) = sizes[c] == 0 ? out.centroids(c, j) : next(c, j) / static_cast<double>(sizes[c]);
      }
      shift = std::max(shift, std::sqrt(squared_distance(next.row(c), out.centroids.row(c))));
    }
    out.centroids = std::move(next);
    out.iterations = it + 1;
    if (shift <= tolerance) break;
  }
  for (std::size_t i = 0; i < n; ++i) out.assignment[i] = nearest_centroid(out.centroids, points.row(i));
  return out;
}

}  // namespace asbench::learn
