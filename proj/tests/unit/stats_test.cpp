#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asbench/errors.hpp"
#include "asbench/rng.hpp"
#include "asbench/stats.hpp"

namespace asbench::stats {
namespace {

ScoreMatrix matrix(std::vector<std::vector<double>> rows, std::vector<std::string> systems = {}) {
  ScoreMatrix m;
  if (systems.empty()) {
    for (std::size_t c = 0; c < rows.at(0).size(); ++c) systems.push_back("s" + std::to_string(c));
  }
  m.systems = std::move(systems);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.scenarios.push_back("r" + std::to_string(r));
    for (double v : rows[r]) m.values.emplace_back(v);
  }
  return m;
}

const std::vector<std::vector<double>> kFriedmanFixture = {
    {0.1, 0.4, 0.7}, {0.2, 0.5, 0.9}, {0.15, 0.3, 0.6}, {0.05, 0.8, 0.35}};

double friedman_statistic_by_hand(const std::vector<std::vector<double>>& ranks) {
  const double n = static_cast<double>(ranks.size());
  const double k = static_cast<double>(ranks[0].size());
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < ranks[0].size(); ++j) {
    double r = 0.0;
    for (const auto& row : ranks) r += row[j];
    sum_sq += (r / n) * (r / n);
  }
  return 12.0 * n / (k * (k + 1)) * (sum_sq - k * (k + 1) * (k + 1) / 4.0);
}

TEST(Ranks, TiesShareMeanRank) {
  EXPECT_EQ(rank_row(std::vector<double>{1, 2, 2, 3}, Direction::minimize), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(rank_row(std::vector<double>{1, 2, 2, 3}, Direction::maximize), (std::vector<double>{4, 2.5, 2.5, 1}));
  EXPECT_EQ(rank_row(std::vector<double>{5, 5, 5}, Direction::minimize), (std::vector<double>{2, 2, 2}));
}

TEST(Ranks, RowsSumToTriangularNumber) {
  CounterRng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 2 + rng.below(9);
    std::vector<double> row(k);
    for (auto& v : row) v = static_cast<double>(rng.below(4));
    const auto r = rank_row(row, Direction::minimize);
    EXPECT_DOUBLE_EQ(std::accumulate(r.begin(), r.end(), 0.0), static_cast<double>(k * (k + 1)) / 2.0);
  }
}

TEST(Friedman, MatchesHandComputation) {
  const RankTable ranks = rank_table(matrix(kFriedmanFixture));
  EXPECT_EQ(ranks.average_ranks, (std::vector<double>{1.0, 2.25, 2.75}));
  const FriedmanResult f = friedman_test(ranks);
  EXPECT_NEAR(f.statistic, 6.5, 1e-6);
  EXPECT_NEAR(f.p_value, std::exp(-3.25), 1e-9);
}

TEST(Friedman, AgreesWithPermutationOracle) {
  const RankTable ranks = rank_table(matrix(kFriedmanFixture));
  const FriedmanResult f = friedman_test(ranks);
  // Exact null distribution: every combination of within-row permutations.
  std::vector<double> base = {1, 2, 3};
  std::vector<std::vector<double>> perms;
  do perms.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
  std::size_t extreme = 0, total = 0;
  for (const auto& a : perms)
    for (const auto& b : perms)
      for (const auto& c : perms)
        for (const auto& d : perms) {
          ++total;
          if (friedman_statistic_by_hand({a, b, c, d}) >= f.statistic - 1e-9) ++extreme;
        }
  const double exact = static_cast<double>(extreme) / static_cast<double>(total);
  EXPECT_NEAR(f.p_value, exact, 0.02);
}

TEST(Friedman, IdenticalSystemsAreNotSignificant) {
  const RankAnalysis a = analyze(matrix({{0.3, 0.3}, {0.5, 0.5}, {0.1, 0.1}}));
  EXPECT_DOUBLE_EQ(a.ranks.average_ranks[0], a.ranks.average_ranks[1]);
  EXPECT_DOUBLE_EQ(a.friedman.statistic, 0.0);
  EXPECT_DOUBLE_EQ(a.friedman.p_value, 1.0);
  EXPECT_FALSE(a.pairwise_significant[0][1]);
  ASSERT_EQ(a.cliques.size(), 1u);
  EXPECT_THROW((void)friedman_test(rank_table(matrix({{1, 2}}))), std::invalid_argument);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// P(range of k standard normals <= w) by Simpson's rule.
double range_cdf(std::size_t k, double w) {
  const int n = 4000;
  const double lo = -9.0, hi = 9.0, h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double z = lo + h * i;
    const double f = normal_pdf(z) * std::pow(normal_cdf(z + w) - normal_cdf(z), static_cast<double>(k - 1));
    sum += f * (i == 0 || i == n ? 1 : (i % 2 == 1 ? 4 : 2));
  }
  return static_cast<double>(k) * sum * h / 3.0;
}

TEST(Nemenyi, TableMatchesStudentizedRange) {
  for (double alpha : {0.05, 0.10}) {
    for (std::size_t k = 2; k <= 20; ++k) {
      const double w = nemenyi_q(k, alpha) * std::sqrt(2.0);
      EXPECT_NEAR(1.0 - range_cdf(k, w), alpha, 1.5e-3) << "k=" << k << " alpha=" << alpha;
    }
  }
  EXPECT_THROW((void)nemenyi_q(1, 0.05), std::invalid_argument);
  EXPECT_THROW((void)nemenyi_q(21, 0.05), std::invalid_argument);
  EXPECT_THROW((void)nemenyi_q(4, 0.01), std::invalid_argument);
}

TEST(Nemenyi, CriticalDistanceFormula) {
  EXPECT_NEAR(nemenyi_cd(8, 11, 0.05), nemenyi_q(8, 0.05) * std::sqrt(8.0 * 9.0 / 66.0), 1e-12);
  EXPECT_NEAR(nemenyi_q(8, 0.05), 3.031, 1e-3);
}

TEST(Nemenyi, CliquesAreMaximalRuns) {
  // Six scenarios, four systems with clearly separated average ranks.
  std::vector<std::vector<double>> rows;
  for (int r = 0; r < 6; ++r) rows.push_back({1, 2, 3, 4});
  rows[0] = {2, 1, 3, 4};
  rows[1] = {1, 2, 4, 3};
  const RankAnalysis a = analyze(matrix(rows, {"a", "b", "c", "d"}));
  for (const auto& clique : a.cliques) {
    ASSERT_GE(clique.size(), 2u);
    EXPECT_TRUE(std::is_sorted(clique.begin(), clique.end()));
  }
  const double cd = a.critical_distance;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_EQ(a.pairwise_significant[i][j],
                std::abs(a.ranks.average_ranks[i] - a.ranks.average_ranks[j]) > cd);
}

TEST(Ecdf, QuantileIsFractionAtOrBelow) {
  const std::vector<double> samples = {0.5, 0.1, 0.3, 0.3, 0.9};
  const EcdfAnalysis e = ecdf(samples, 0.3);
  EXPECT_DOUBLE_EQ(e.quantile, 0.6);
  EXPECT_EQ(e.sorted_samples, (std::vector<double>{0.1, 0.3, 0.3, 0.5, 0.9}));
  ASSERT_EQ(e.curve.size(), 4u);
  EXPECT_DOUBLE_EQ(e.curve[1].f, 0.6);
  EXPECT_DOUBLE_EQ(e.curve.back().f, 1.0);
  for (std::size_t i = 1; i < e.curve.size(); ++i) EXPECT_GT(e.curve[i].f, e.curve[i - 1].f);
  EXPECT_DOUBLE_EQ(ecdf(std::vector<double>{2.0}, 2.0).quantile, 1.0);
  EXPECT_THROW((void)ecdf(std::vector<double>{}, 0.0), std::invalid_argument);
}

TEST(Vbs, RowMinimaMean) {
  const auto vbs = virtual_best_selector(matrix({{0.3, 0.1}, {0.2, 0.6}}, {"x", "y"}));
  EXPECT_EQ(vbs.best_system, (std::vector<std::string>{"y", "x"}));
  EXPECT_DOUBLE_EQ(vbs.mean, 0.15);
  EXPECT_EQ(column_means(matrix({{1, 2}, {3, 6}})), (std::vector<double>{2, 4}));
}

TEST(ScoreMatrixIo, RoundTripAndErrors) {
  const std::string text = "scenario,a,b\nx,0.5,NA\ny,1,2\n";
  const ScoreMatrix m = parse_score_matrix(text, "m.csv");
  EXPECT_FALSE(m.at(0, 1).has_value());
  EXPECT_THROW(m.require_complete(), std::invalid_argument);
  EXPECT_EQ(format_score_matrix(m), text);
  const std::vector<std::string> drop = {"b"};
  EXPECT_NO_THROW(m.without_systems(drop).require_complete());
  EXPECT_THROW((void)parse_score_matrix("scenario,a\nx,oops\n", "m.csv"), ParseError);
  EXPECT_THROW((void)parse_score_matrix("scenario,a\nx,1\nx,2\n", "m.csv"), ParseError);
  try {
    (void)parse_score_matrix("scenario,a,b\nx,1,2\ny,1\n", "m.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

}  // namespace
}  // namespace asbench::stats
