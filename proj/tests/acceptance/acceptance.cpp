// Acceptance gate: one PASS/FAIL line per criterion.
//
//   asbench_acceptance [--criterion NAME|all]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "asbench/evaluation.hpp"
#include "asbench/scenario_io.hpp"
#include "asbench/selectors.hpp"
#include "asbench/stats.hpp"
#include "asbench/text.hpp"
#include "cli.hpp"
#include "support.hpp"

namespace {

using namespace asbench;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Collects detail lines; any failed check turns the criterion red.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures_;
      std::cout << "  mismatch: " << what << "\n";
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s << what << " = " << got << ", expected " << want << " +- " << tol;
    expect(std::abs(got - want) <= tol + 1e-12, s.str());
  }
  void info(const std::string& line) { std::cout << "  " << line << "\n"; }
  [[nodiscard]] bool ok() const { return failures_ == 0; }
  [[nodiscard]] int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct SummaryRow {
  double mean = 0.0;
  std::optional<double> rank;
};

std::map<std::string, SummaryRow> parse_summary(const std::string& text) {
  std::map<std::string, SummaryRow> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto f = split_fields(line);
    if (f.size() != 4) continue;
    rows[f[0]] = SummaryRow{*parse_double(f[1]), parse_double(f[2])};
  }
  return rows;
}

stats::ScoreMatrix load_matrix(const std::string& name) {
  const fs::path p = testing::fixture("competitions/" + name);
  return stats::parse_score_matrix(read_file(p), p.string());
}

// --- 1: 2017 gap table ---------------------------------------------------------

bool gap_table(Check& c) {
  struct Row {
    const char* system;
    double gap;
    double rank;
  };
  // Published rows: Zilla 0.93/5.3 and Zilla(dyn) 0.96/5.4.
  const Row expected[] = {{"ASAP.v2", 0.38, 2.6},        {"ASAP.v3", 0.40, 2.8},
                          {"Sunny-fkvar", 0.43, 2.7},    {"Sunny-autok", 0.57, 3.9},
                          {"star-zilla", 0.93, 5.3},     {"star-zilla_dyn_sched", 0.96, 5.4},
                          {"AS-RF", 2.10, 6.1},          {"AS-ASL", 2.51, 7.2}};

  // Append an out-of-competition copy of the winner; it must not move any rank.
  testing::TempDir dir("c1");
  stats::ScoreMatrix m = load_matrix("oasc2017_gap.csv");
  stats::ScoreMatrix with_ooc;
  with_ooc.scenarios = m.scenarios;
  with_ooc.systems = m.systems;
  with_ooc.systems.push_back("ooc-copy");
  for (std::size_t r = 0; r < m.scenarios.size(); ++r) {
    for (std::size_t s = 0; s < m.systems.size(); ++s) with_ooc.values.push_back(m.at(r, s));
    with_ooc.values.push_back(*m.at(r, 0) - 0.01);
  }
  const fs::path plain = dir.path() / "plain.csv";
  const fs::path extended = dir.path() / "with_ooc.csv";
  write_file_atomic(plain, stats::format_score_matrix(m));
  write_file_atomic(extended, stats::format_score_matrix(with_ooc));

  const auto start = Clock::now();
  const CliRun run = cli_run({"compare", "--matrix", extended.string(), "--ooc", "ooc-copy", "--mode", "oasc2017"});
  const double elapsed = seconds_since(start);
  c.expect(run.code == 0, "compare exit code " + std::to_string(run.code) + ": " + run.err);
  const auto rows = parse_summary(run.out);
  const auto reference = parse_summary(cli_run({"compare", "--matrix", plain.string()}).out);

  for (const Row& e : expected) {
    const auto it = rows.find(e.system);
    if (it == rows.end() || !it->second.rank) {
      c.expect(false, std::string("missing system ") + e.system);
      continue;
    }
    c.near(it->second.mean, e.gap, 0.005, std::string(e.system) + " mean gap");
    c.near(*it->second.rank, e.rank, 0.05, std::string(e.system) + " average rank");
    c.expect(reference.at(e.system).rank == it->second.rank,
             std::string(e.system) + " rank changed when an ooc system was added");
  }
  c.expect(rows.count("ooc-copy") && !rows.at("ooc-copy").rank.has_value(), "ooc system must carry no rank");
  c.expect(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s exceeds 1 s");
  c.info("compare took " + std::to_string(elapsed) + " s");
  return c.ok();
}

// --- 2: meta-VBS ------------------------------------------------------------

bool meta_vbs(Check& c) {
  const fs::path p = testing::fixture("competitions/oasc2017_gap.csv");
  const CliRun run = cli_run({"compare", "--matrix", p.string(), "--mode", "oasc2017"});
  c.expect(run.code == 0, "compare failed: " + run.err);
  const auto rows = parse_summary(run.out);
  c.expect(rows.count("meta_vbs") == 1, "no meta_vbs row");
  if (rows.count("meta_vbs")) c.near(rows.at("meta_vbs").mean, 0.29, 0.02, "meta-VBS gap");
  return c.ok();
}

// --- 3: 2015 average rows -----------------------------------------------------

bool icon2015_tables(Check& c) {
  struct Table {
    const char* scores;
    const char* ranks;
    Direction direction;
    double mean_tol;
    std::vector<double> means;
    std::vector<double> avg_ranks;
    bool ranks_from_scores;
  };
  // System order: zilla, zillafolio, autofolio, flexfolio-schedules, ASAP_RF, ASAP_kNN, sunny, sunny-presolv.
  const Table tables[] = {
      {"icon2015_par10.csv", "icon2015_par10_ranks.csv", Direction::minimize, 1.0,
       {6114, 6139, 6087, 6179, 6183, 6136, 6421, 6453}, {3.8, 3.8, 3.6, 4.1, 4.3, 4.5, 6.1, 5.8}, true},
      {"icon2015_mcp.csv", "icon2015_mcp_ranks.csv", Direction::minimize, 1.0,
       {194, 194, 205, 224, 193, 185, 215, 209}, {3.1, 3.5, 4.1, 5.5, 4.8, 4.7, 4.9, 5.4}, false},
      {"icon2015_solved.csv", "icon2015_solved_ranks.csv", Direction::maximize, 0.001,
       {0.806, 0.805, 0.807, 0.802, 0.802, 0.803, 0.792, 0.791}, {3.8, 3.8, 3.3, 3.9, 4.3, 4.3, 6.3, 6.2}, false},
  };
  for (const Table& t : tables) {
    const stats::ScoreMatrix scores = load_matrix(t.scores);
    const stats::ScoreMatrix recorded = load_matrix(t.ranks);
    const auto means = stats::column_means(scores);
    std::vector<double> flat;
    for (const auto& v : recorded.values) flat.push_back(v.value_or(NAN));
    const stats::RankTable ranks = t.ranks_from_scores
                                       ? stats::rank_table(scores, t.direction)
                                       : stats::rank_table_from_ranks(recorded.scenarios, recorded.systems, flat);
    for (std::size_t s = 0; s < scores.systems.size(); ++s) {
      c.near(means[s], t.means[s], t.mean_tol, std::string(t.scores) + " " + scores.systems[s] + " mean");
      c.near(ranks.average_ranks[s], t.avg_ranks[s], 0.05, std::string(t.scores) + " " + scores.systems[s] + " rank");
    }
    if (t.ranks_from_scores) {
      // Recomputed ranks agree with the recorded ones cell by cell.
      for (std::size_t i = 0; i < flat.size(); ++i) {
        c.expect(ranks.ranks[i] == flat[i], std::string(t.scores) + " rank cell " + std::to_string(i));
      }
    }
  }
  return c.ok();
}

// --- 4: PAR10 penalty -------------------------------------------------------------

bool par10_rule(Check& c) {
  for (double cutoff : {1.0, 1200.0, 5000.0}) {
    const Scenario s = testing::runtime_scenario(2, 1, cutoff, {{cutoff, RunStatus::timeout}, {cutoff / 2, RunStatus::crash}});
    for (std::size_t a = 0; a < 2; ++a) {
      const auto outcome = simulate(s, 0, Schedule{{SolverStep{a, cutoff}}});
      c.expect(!outcome.solved, "instance should be unsolved");
      const double score = par10(outcome, cutoff);
      c.expect(score == 10.0 * cutoff, "par10 " + format_double(score) + " != 10 x " + format_double(cutoff));
    }
    const Split split{1, {0}, {0}, false};
    const ScoreReport r = score_system(s, split, sbs_predictions(s, split));
    c.expect(r.find(Metric::par10)->value == 10.0 * cutoff, "reported par10 for cutoff " + format_double(cutoff));
  }
  return c.ok();
}

// --- 5a: simulator vs. tick oracle --------------------------------------------------

bool simulator_oracle(Check& c) {
  const double runtimes[] = {0, 1, 4, 9, 10};
  const double budgets[] = {1, 4, 10, 12};
  const double feature_costs[] = {0, 4};
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    // Every combination of per-algorithm outcomes, each instance twice (one per feature cost).
    std::vector<RunRecord> options;
    for (double r : runtimes) {
      options.push_back({r, RunStatus::ok});
      options.push_back({r, RunStatus::memout});
      options.push_back({r, RunStatus::other});
    }
    options.push_back({10, RunStatus::timeout});
    std::size_t combos = 1;
    for (std::size_t a = 0; a < k; ++a) combos *= options.size();
    std::vector<RunRecord> runs;
    for (double fc : feature_costs) {
      (void)fc;
      for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rest = code;
        for (std::size_t a = 0; a < k; ++a) {
          runs.push_back(options[rest % options.size()]);
          rest /= options.size();
        }
      }
    }
    Scenario s = testing::runtime_scenario(k, 2 * combos, 10.0, runs);
    for (std::size_t i = 0; i < s.num_instances(); ++i) s.feature_groups[0].cost[i] = feature_costs[i / combos];

    std::vector<ScheduleStep> step_options = {FeatureStep{0}};
    for (std::size_t a = 0; a < k; ++a) {
      for (double b : budgets) step_options.push_back(SolverStep{a, b});
    }
    std::vector<Schedule> schedules;
    const std::size_t n = step_options.size();
    for (std::size_t len = 1; len <= 3; ++len) {
      std::size_t total = 1;
      for (std::size_t j = 0; j < len; ++j) total *= n;
      for (std::size_t code = 0; code < total; ++code) {
        Schedule sch;
        std::size_t rest = code;
        for (std::size_t j = 0; j < len; ++j) {
          sch.steps.push_back(step_options[rest % n]);
          rest /= n;
        }
        if (schedule_problem(s, sch).empty()) schedules.push_back(std::move(sch));
      }
    }
    for (const Schedule& sch : schedules) {
      for (std::size_t i = 0; i < s.num_instances(); ++i) {
        const EvaluationOutcome got = simulate(s, i, sch);
        const testing::OracleOutcome want = testing::tick_oracle(s, i, sch);
        ++cases;
        const bool same = got.solved == want.solved && got.time_used == want.time_used &&
                          got.solving_step.value_or(0) == want.step;
        if (!same && ++mismatches <= 5) {
          c.expect(false, "k=" + std::to_string(k) + " instance " + std::to_string(i) + ": simulate " +
                              format_double(*got.time_used) + " vs oracle " + format_double(want.time_used));
        }
      }
    }
  }
  c.info(std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches");
  c.expect(mismatches == 0, "simulator disagrees with the tick oracle");
  c.expect(cases >= 10000, "fewer than 10^4 cases");
  return c.ok();
}

// --- 5b: VBS dominance ----------------------------------------------------------

Split random_split(CounterRng& rng, std::size_t n) {
  Split split{1, {}, {}, false};
  for (std::size_t i = 0; i < n; ++i) (rng.below(2) == 0 ? split.train : split.test).push_back(i);
  if (split.train.empty()) split.train.push_back(0);
  if (split.test.empty()) split.test.push_back(n - 1);
  return split;
}

bool vbs_dominance(Check& c) {
  CounterRng rng(2017);
  std::size_t draws = 0, defined = 0;
  for (; draws < 1000; ++draws) {
    const Scenario s = testing::random_runtime_scenario(rng, 4, 8);
    const Schedule sch = testing::random_schedule(rng, s, 4);
    const std::size_t i = rng.below(s.num_instances());
    const double score = par10(simulate(s, i, sch), s.cutoff_seconds());
    c.expect(score >= vbs_cost(s, i), "draw " + std::to_string(draws) + ": par10 below the VBS");

    const Split split = random_split(rng, s.num_instances());
    const ScoreReport sbs_report = score_system(s, split, sbs_predictions(s, split));
    const ScoreReport oracle = score_system(s, split, oracle_predictions(s, split.test));
    for (std::size_t m = 0; m < sbs_report.metrics.size(); ++m) {
      const auto& g1 = sbs_report.metrics[m].gap;
      const auto& g0 = oracle.metrics[m].gap;
      c.expect(g1.has_value() == g0.has_value(), "gap definedness differs");
      if (g1 && g0) {
        ++defined;
        c.expect(*g1 == 1.0, "SBS gap " + format_double(*g1) + " in draw " + std::to_string(draws));
        c.expect(*g0 == 0.0, "oracle gap " + format_double(*g0) + " in draw " + std::to_string(draws));
      }
    }
  }
  c.info(std::to_string(draws) + " draws, " + std::to_string(defined) + " defined gaps checked");
  c.expect(defined > 500, "too few defined gaps to be meaningful");
  return c.ok();
}

// --- 5c: obfuscation invariance ----------------------------------------------------

bool obfuscation(Check& c) {
  CounterRng rng(99);
  std::size_t metrics_checked = 0;
  for (int k = 0; k < 100; ++k) {
    Scenario s = k % 4 == 3 ? testing::random_quality_scenario(rng, 4, 10, k % 8 == 3 ? Direction::maximize
                                                                                      : Direction::minimize)
                            : testing::random_runtime_scenario(rng, 4, 10);
    s.splits = {random_split(rng, s.num_instances())};
    PredictionTable p;
    for (std::size_t i : s.splits[0].test) p[i] = testing::random_schedule(rng, s, 4);
    const auto [hidden, names] = obfuscate(s, rng.next());
    const ScoreReport a = score_system(s, s.splits[0], p, "x");
    const ScoreReport b = score_system(hidden, hidden.splits[0], p, "x");
    c.expect(a.metrics.size() == b.metrics.size(), "metric count differs");
    for (std::size_t m = 0; m < std::min(a.metrics.size(), b.metrics.size()); ++m) {
      const auto& x = a.metrics[m];
      const auto& y = b.metrics[m];
      ++metrics_checked;
      c.expect(x.value == y.value && x.gap == y.gap && x.sbs_value == y.sbs_value && x.vbs_value == y.vbs_value,
               "scenario " + std::to_string(k) + " metric " + std::string(to_string(x.metric)) + " changed");
    }
    c.expect(names.algorithms.size() == s.num_algorithms(), "name map size");
  }
  c.info(std::to_string(metrics_checked) + " metric values compared");
  return c.ok();
}

// --- 5d: end-to-end determinism -------------------------------------------------------

bool determinism(Check& c) {
  testing::TempDir dir("c5-determinism");
  const Scenario learn = testing::learnability_scenario(120, 40, 8);
  const fs::path bundle = dir.path() / "bundle";
  write_scenario(learn, bundle);
  for (const char* selector : {"regression", "cluster", "pairwise", "stacking", "sunny"}) {
    std::vector<std::string> artifacts;
    for (int round = 0; round < 2; ++round) {
      const fs::path base = dir.path() / (std::string(selector) + std::to_string(round));
      fs::create_directories(base);
      const std::string model = (base / "model.json").string();
      const std::string preds = (base / "predictions.csv").string();
      const std::string report = (base / "report.csv").string();
      const CliRun t = cli_run({"train", "--scenario", bundle.string(), "--selector", selector, "--hp", "n_trees=20",
                                "--seed", "42", "--out", model});
      const CliRun p = cli_run({"predict", "--scenario", bundle.string(), "--model", model, "--out", preds});
      const CliRun e = cli_run({"evaluate", "--scenario", bundle.string(), "--predictions", preds, "--out", report});
      c.expect(t.code == 0 && p.code == 0 && e.code == 0, std::string(selector) + " pipeline failed: " + t.err + p.err + e.err);
      artifacts.push_back(read_file(model) + "\x1f" + read_file(preds) + "\x1f" + read_file(report));
    }
    c.expect(artifacts[0] == artifacts[1], std::string(selector) + " artifacts differ between runs");
  }
  return c.ok();
}

// --- 5e: learnability --------------------------------------------------------------

bool learnability(Check& c) {
  const Scenario s = testing::learnability_scenario(500, 200, 1);
  const Split& split = s.split(1);
  for (SelectorKind kind : {SelectorKind::regression, SelectorKind::pairwise}) {
    Hyperparameters hp;
    hp.seed = 1;
    const auto start = Clock::now();
    const SelectorModel m = fit_selector(s, split.train, kind, hp, CompetitionMode::oasc2017);
    const ScoreReport r = score_system(s, split, predict_all(m, s, split.test), std::string(to_string(kind)));
    const double elapsed = seconds_since(start);
    const auto gap = r.find(Metric::par10)->gap;
    c.expect(gap.has_value(), "undefined gap");
    if (gap) {
      c.info(std::string(to_string(kind)) + ": gap " + format_double(*gap) + " in " + std::to_string(elapsed) + " s");
      c.expect(*gap <= 0.2, std::string(to_string(kind)) + " gap " + format_double(*gap) + " above 0.2");
    }
    c.expect(elapsed < 60.0, std::string(to_string(kind)) + " took " + std::to_string(elapsed) + " s");
  }
  return c.ok();
}

// --- 5f: Friedman / Nemenyi ---------------------------------------------------------

double friedman_by_hand(const std::vector<std::vector<double>>& ranks) {
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

bool friedman(Check& c) {
  stats::ScoreMatrix m;
  m.systems = {"a", "b", "c"};
  const double rows[4][3] = {{0.1, 0.4, 0.7}, {0.2, 0.5, 0.9}, {0.15, 0.3, 0.6}, {0.05, 0.8, 0.35}};
  std::vector<std::vector<double>> hand_ranks = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 3, 2}};
  for (int r = 0; r < 4; ++r) {
    m.scenarios.push_back("s" + std::to_string(r));
    for (double v : rows[r]) m.values.emplace_back(v);
  }
  const stats::RankAnalysis a = stats::analyze(m);
  const double hand = friedman_by_hand(hand_ranks);
  c.near(a.friedman.statistic, hand, 1e-6, "Friedman statistic");
  c.near(a.friedman.statistic, 6.5, 1e-6, "Friedman statistic (closed form)");

  std::vector<double> base = {1, 2, 3};
  std::vector<std::vector<double>> perms;
  do perms.push_back(base);
  while (std::next_permutation(base.begin(), base.end()));
  std::size_t extreme = 0, total = 0;
  for (const auto& p0 : perms)
    for (const auto& p1 : perms)
      for (const auto& p2 : perms)
        for (const auto& p3 : perms) {
          ++total;
          if (friedman_by_hand({p0, p1, p2, p3}) >= hand - 1e-9) ++extreme;
        }
  const double exact = static_cast<double>(extreme) / static_cast<double>(total);
  c.info("chi-square p " + format_double(a.friedman.p_value) + ", permutation p " + format_double(exact));
  c.near(a.friedman.p_value, exact, 0.02, "Friedman p-value against the permutation oracle");
  c.near(a.critical_distance, stats::nemenyi_q(3, 0.05) * std::sqrt(12.0 / 24.0), 1e-12, "critical distance");
  return c.ok();
}

// --- 5g: ECDF mechanics ------------------------------------------------------------

bool ecdf_study(Check& c) {
  // 1500 seed gaps; the query is reached or beaten by exactly 7 of them.
  CounterRng rng(15);
  const double query = 0.25;
  std::vector<double> samples;
  for (int i = 0; i < 7; ++i) samples.push_back(query - 0.1 * rng.uniform());
  samples[0] = query;
  for (int i = 7; i < 1500; ++i) samples.push_back(query + 0.001 + rng.uniform());
  CounterRng(16).shuffle(std::span<double>(samples));
  const auto e = stats::ecdf(samples, query);
  c.info("quantile " + format_double(100.0 * e.quantile) + "%");
  c.near(100.0 * e.quantile, 0.467, 0.001, "quantile in percent");
  for (std::size_t i = 1; i < e.curve.size(); ++i) c.expect(e.curve[i].f > e.curve[i - 1].f, "ECDF not increasing");
  return c.ok();
}

const std::vector<std::pair<std::string, std::function<bool(Check&)>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<bool(Check&)>>> list = {
      {"c1_gap_table", gap_table},
      {"c2_meta_vbs", meta_vbs},
      {"c3_icon2015_tables", icon2015_tables},
      {"c4_par10_rule", par10_rule},
      {"c5_simulator_oracle", simulator_oracle},
      {"c5_vbs_dominance", vbs_dominance},
      {"c5_obfuscation", obfuscation},
      {"c5_determinism", determinism},
      {"c5_learnability", learnability},
      {"c5_friedman", friedman},
      {"c5_ecdf", ecdf_study},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::string wanted = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      wanted = argv[++i];
    } else {
      std::cerr << "usage: asbench_acceptance [--criterion NAME|all]\n";
      return 2;
    }
  }
  bool all_passed = true;
  bool matched = false;
  for (const auto& [name, fn] : criteria()) {
    if (wanted != "all" && wanted != name) continue;
    matched = true;
    Check check;
    bool passed = false;
    const auto start = Clock::now();
    try {
      passed = fn(check);
    } catch (const std::exception& e) {
      std::cout << "  exception: " << e.what() << "\n";
    }
    std::cout << (passed ? "PASS " : "FAIL ") << name << " (" << std::to_string(seconds_since(start)) << " s)\n";
    all_passed = all_passed && passed;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << wanted << "'\n";
    return 2;
  }
  return all_passed ? 0 : 1;
}
