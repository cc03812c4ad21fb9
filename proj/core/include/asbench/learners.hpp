#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "asbench/rng.hpp"

namespace asbench::learn {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  /// Throws std::invalid_argument when the width does not match.
  void append_row(std::span<const double> values);

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Leaf payload: {mean} for regression, class frequencies for classification.
  std::vector<double> value;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  [[nodiscard]] const std::vector<double>& leaf(std::span<const double> x) const;

  friend bool operator==(const Tree&, const Tree&) = default;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 0;  // 0 means ceil(sqrt(d))
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

/// CART forest. Splits minimize the summed squared error (regression) or the
/// size-weighted Gini impurity (classification) over a random feature subset;
/// when the subset holds no usable split the remaining features are tried in
/// the same random order. Tree t draws from substream t, so the result does
/// not depend on the order trees are built in.
struct RandomForest {
  bool classification = false;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::vector<Tree> trees;

  /// Throws std::invalid_argument on empty or mismatched data.
  static RandomForest fit_regression(const Matrix& x, std::span<const double> y, const ForestParams& params);
  static RandomForest fit_classification(const Matrix& x, std::span<const std::size_t> labels,
                                         std::size_t num_classes, const ForestParams& params);

  [[nodiscard]] double predict(std::span<const double> x) const;
  [[nodiscard]] std::vector<double> predict_proba(std::span<const double> x) const;
  /// Most probable class; ties go to the lower label.
  [[nodiscard]] std::size_t predict_class(std::span<const double> x) const;

  friend bool operator==(const RandomForest&, const RandomForest&) = default;
};

/// Indices of the k rows closest to `query` (Euclidean), nearest first; equal
/// distances keep row order. k is clamped to the row count.
std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::span<const double> query, std::size_t k);

struct KnnModel {
  Matrix points;
  std::vector<double> targets;  // value or class label per row
  std::size_t k = 1;

  /// Throws std::invalid_argument on empty or mismatched data.
  static KnnModel fit(Matrix points, std::vector<double> targets, std::size_t k);

  /// Mean target of the neighborhood.
  [[nodiscard]] double predict(std::span<const double> x) const;
  /// Majority label of the neighborhood; ties go to the lower label.
  [[nodiscard]] std::size_t predict_class(std::span<const double> x) const;

  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

struct KMeansResult {
  Matrix centroids;
  std::vector<std::size_t> assignment;
  std::size_t iterations = 0;
};

/// Index of the closest centroid; ties go to the lower index.
std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> x);

/// Lloyd iterations from a k-means++ seeding, stopping when no centroid moves
/// more than `tolerance` or after `max_iterations`. A cluster that loses all
/// its points keeps its previous centroid. Requires 1 <= k <= rows.
KMeansResult kmeans(const Matrix& points, std::size_t k, CounterRng rng, std::size_t max_iterations = 100,
                    double tolerance = 1e-6);

}  // namespace asbench::learn
