#include <gtest/gtest.h>

#include "asbench/errors.hpp"
#include "asbench/evaluation.hpp"
#include "support.hpp"

namespace asbench {
namespace {

using testing::fixture;

class Tutorial : public ::testing::Test {
 protected:
  Scenario s = parse_scenario(fixture("tutorial"));
};

TEST_F(Tutorial, FeatureCostThenSolve) {
  const auto out = simulate(s, 0, Schedule{{FeatureStep{0}, SolverStep{0, 10.0}}});
  EXPECT_TRUE(out.solved);
  EXPECT_DOUBLE_EQ(*out.time_used, 5.5);
  EXPECT_EQ(out.solving_step, 2u);
}

TEST_F(Tutorial, EarlyEndCostsRecordedRuntime) {
  const auto out = simulate(s, 2, Schedule{{SolverStep{2, 50.0}, SolverStep{0, 100.0}}});
  EXPECT_TRUE(out.solved);
  EXPECT_DOUBLE_EQ(*out.time_used, 70.0);
}

TEST_F(Tutorial, SliceIsClippedAtCutoff) {
  const auto out = simulate(s, 2, Schedule{{SolverStep{1, 80.0}, SolverStep{0, 100.0}}});
  EXPECT_FALSE(out.solved);
  EXPECT_DOUBLE_EQ(*out.time_used, 100.0);
  EXPECT_FALSE(out.solving_step.has_value());
  EXPECT_DOUBLE_EQ(par10(out, 100.0), 1000.0);
}

TEST_F(Tutorial, BudgetShorterThanRuntimeFails) {
  const auto out = simulate(s, 1, Schedule{{SolverStep{2, 7.0}}});
  EXPECT_FALSE(out.solved);
  const auto exact = simulate(s, 1, Schedule{{SolverStep{2, 8.0}}});
  EXPECT_TRUE(exact.solved);
  EXPECT_DOUBLE_EQ(*exact.time_used, 8.0);
}

TEST_F(Tutorial, McpChargesCutoffNotPenalty) {
  const auto slow = simulate(s, 0, Schedule{{SolverStep{1, 100.0}}});
  EXPECT_DOUBLE_EQ(mcp(slow, s, 0), 45.0);
  const auto none = simulate(s, 3, Schedule{{SolverStep{0, 100.0}}});
  EXPECT_DOUBLE_EQ(mcp(none, s, 3), 0.0);
  const auto miss = simulate(s, 0, Schedule{{SolverStep{2, 100.0}}});
  EXPECT_DOUBLE_EQ(mcp(miss, s, 0), 95.0);
}

TEST_F(Tutorial, SbsAndOracleGaps) {
  for (const Split& split : s.splits) {
    const ScoreReport sbs_report = score_system(s, split, sbs_predictions(s, split), "sbs");
    const ScoreReport oracle = score_system(s, split, oracle_predictions(s, split.test), "oracle");
    for (const MetricScore& m : sbs_report.metrics) {
      if (m.gap) {
        EXPECT_DOUBLE_EQ(*m.gap, 1.0) << to_string(m.metric);
      }
    }
    for (const MetricScore& m : oracle.metrics) {
      if (m.gap) {
        EXPECT_DOUBLE_EQ(*m.gap, 0.0) << to_string(m.metric);
      }
    }
    ASSERT_NE(sbs_report.find(Metric::par10), nullptr);
    EXPECT_TRUE(sbs_report.find(Metric::par10)->gap.has_value());
  }
}

TEST_F(Tutorial, MissingPredictionThrows) {
  const Split& split = s.split(1);
  PredictionTable p = sbs_predictions(s, split);
  p.erase(p.begin());
  EXPECT_THROW((void)score_system(s, split, p), InvalidInput);
}

TEST(Evaluation, Par10IsTenTimesCutoff) {
  for (double c : {1.0, 1200.0, 5000.0}) {
    const Scenario s = testing::runtime_scenario(1, 1, c, {{c, RunStatus::timeout}});
    EXPECT_EQ(par10(simulate(s, 0, Schedule{{SolverStep{0, c}}}), c), 10.0 * c);
  }
}

TEST(Evaluation, QualityUsesSingleStepValue) {
  CounterRng rng(2);
  const Scenario q = testing::random_quality_scenario(rng, 3, 3, Direction::maximize);
  const auto out = simulate(q, 0, Schedule{{FeatureStep{0}, SolverStep{0, 0.0}}});
  ASSERT_TRUE(out.achieved_value);
  EXPECT_DOUBLE_EQ(*out.achieved_value, q.run(0, 0).value);
  EXPECT_THROW((void)par10(out, 1.0), std::invalid_argument);
}

TEST(Evaluation, ClosedGapDegenerate) {
  EXPECT_FALSE(closed_gap(3.0, 2.0, 2.0).has_value());
  EXPECT_DOUBLE_EQ(*closed_gap(3.0, 4.0, 2.0), 0.5);
}

ScoreReport report(std::string scenario, int split, double par10_gap, double mcp_gap, double solved_gap) {
  ScoreReport r;
  r.system = "sys";
  r.scenario = std::move(scenario);
  r.split_id = split;
  r.metrics = {MetricScore{Metric::par10, 0, 0, 0, 0, 0, 0, par10_gap},
               MetricScore{Metric::mcp, 0, 0, 0, 0, 0, 0, mcp_gap},
               MetricScore{Metric::solved, 0, 0, 0, 0, 0, 0, solved_gap}};
  return r;
}

TEST(Evaluation, AggregateModes) {
  std::vector<ScoreReport> rs = {report("a", 1, 0.2, 0.4, 0.6), report("a", 2, 0.4, 0.4, 0.4),
                                 report("b", 1, 1.0, 0.0, 0.5)};
  // icon2015: a = mean(0.4, 0.4) = 0.4, b = 0.5
  EXPECT_NEAR(aggregate(rs, CompetitionMode::icon2015).value, 0.45, 1e-12);
  // oasc2017: par10 only, a = 0.3, b = 1.0
  const auto o = aggregate(rs, CompetitionMode::oasc2017);
  EXPECT_NEAR(o.value, 0.65, 1e-12);
  EXPECT_EQ(o.scenarios, 2u);
  rs[2].metrics[0].gap.reset();
  const auto dropped = aggregate(rs, CompetitionMode::oasc2017);
  EXPECT_NEAR(dropped.value, 0.3, 1e-12);
  EXPECT_EQ(dropped.excluded.size(), 1u);
  EXPECT_THROW((void)aggregate(std::span<const ScoreReport>{}, CompetitionMode::icon2015), std::invalid_argument);
}

TEST_F(Tutorial, ReportCsvParsesBack) {
  std::vector<ScoreReport> rs;
  for (const Split& split : s.splits) rs.push_back(score_system(s, split, sbs_predictions(s, split), "sbs"));
  rs[0].out_of_competition = true;
  const std::string csv = format_report_csv(rs);
  const auto rows = parse_report_csv(csv, "r.csv");
  ASSERT_FALSE(rows.empty());
  bool saw_ooc = false;
  for (const auto& row : rows) {
    EXPECT_EQ(row.system, "sbs");
    if (row.metric == "out_of_competition") saw_ooc = true;
    if (row.metric == "gap_par10") {
      EXPECT_DOUBLE_EQ(*row.value, 1.0);
    }
  }
  EXPECT_TRUE(saw_ooc);
  EXPECT_FALSE(format_report_json(rs, CompetitionMode::icon2015).empty());
}

}  // namespace
}  // namespace asbench
