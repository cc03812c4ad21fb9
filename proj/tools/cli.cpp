#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "asbench/errors.hpp"
#include "asbench/evaluation.hpp"
#include "asbench/model_io.hpp"
#include "asbench/scenario_io.hpp"
#include "asbench/selectors.hpp"
#include "asbench/stats.hpp"
#include "asbench/text.hpp"
#include "json.hpp"

namespace asbench::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Options {
  std::string scenario;
  std::string splits;
  std::vector<int> split_ids;
  std::string selector;
  std::vector<std::string> hp;
  std::optional<std::uint64_t> seed;
  std::string mode = "oasc2017";
  double alpha = 0.05;
  std::string out;
  bool json = false;

  // splits
  int n_splits = 10;
  std::string split_mode = "bootstrap";
  double test_fraction = 0.3;
  // obfuscate
  std::string names;
  // predict / evaluate
  std::string model;
  std::string predictions;
  std::string system;
  bool ooc = false;
  bool anonymize_test = false;
  // compare
  std::vector<std::string> reports;
  std::string matrix;
  std::string metric;
  std::string direction = "minimize";
  std::vector<std::string> ooc_systems;
  // seed-study
  int n_seeds = 10;
};

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {}
  void config(const std::string& key, const std::string& value) { err_ << "# " << key << " = " << value << "\n"; }
  void warn(const std::string& message) { err_ << "# warning: " << message << "\n"; }
  void note(const std::string& message) { err_ << "# " << message << "\n"; }

 private:
  std::ostream& err_;
};

std::string join(const std::vector<std::string>& items, const std::string& sep = ",") {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

CompetitionMode competition_mode(const Options& o) {
  const auto m = parse_mode(o.mode);
  if (!m) throw InvalidInput("--mode must be icon2015 or oasc2017");
  return *m;
}

Scenario load(const Options& o) {
  Scenario s = parse_scenario(o.scenario);
  if (!o.splits.empty()) {
    s.splits = parse_splits(o.splits, s);
    const auto violations = validate(s);
    if (has_errors(violations)) {
      for (const auto& v : violations) {
        if (v.severity == Severity::error) throw InvalidInput(o.splits + ": " + v.message + " (" + v.entity + ")");
      }
    }
  }
  return s;
}

const Split& chosen_split(const Scenario& s, const Options& o) {
  if (s.splits.empty()) throw InvalidInput("scenario has no splits; create them with 'asbench splits'");
  if (o.split_ids.size() > 1) throw InvalidInput("this command takes a single --split-id");
  if (o.split_ids.empty()) {
    return *std::min_element(s.splits.begin(), s.splits.end(),
                             [](const Split& a, const Split& b) { return a.id < b.id; });
  }
  try {
    return s.split(o.split_ids.front());
  } catch (const std::exception&) {
    throw InvalidInput("unknown split id " + std::to_string(o.split_ids.front()));
  }
}

Hyperparameters hyperparameters(const Options& o) {
  Hyperparameters hp;
  for (const auto& kv : o.hp) set_hyperparameter(hp, kv);
  if (o.seed) hp.seed = *o.seed;
  check_hyperparameters(hp);
  return hp;
}

SelectorKind selector_kind(const Options& o) {
  const auto k = parse_selector_kind(o.selector);
  if (!k) throw InvalidInput("--selector must be regression, cluster, pairwise, stacking or sunny");
  return *k;
}

void log_selector(Log& log, SelectorKind kind, const Hyperparameters& hp) {
  log.config("selector", std::string(to_string(kind)));
  for (const auto& [k, v] : describe(hp)) log.config("hp." + k, v);
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomic(o.out, text);
  }
}

std::string with_split(std::string pattern, int split_id) {
  const std::string key = "{split}";
  for (auto pos = pattern.find(key); pos != std::string::npos; pos = pattern.find(key)) {
    pattern.replace(pos, key.size(), std::to_string(split_id));
  }
  return pattern;
}

// validate ---------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out, Log& log) {
  log.config("scenario", o.scenario);
  Scenario s;
  try {
    s = load_scenario(o.scenario);
    if (!o.splits.empty()) s.splits = parse_splits(o.splits, s);
  } catch (const ParseError& e) {
    out << (o.json ? Json{{"valid", false}, {"parse_error", e.what()}}.dump(2) + "\n"
                   : "severity,kind,entity,related,message\nerror,parse_error,,," + std::string(e.what()) + "\n");
    return kExitInvalidInput;
  }
  const auto violations = validate(s);
  if (o.json) {
    Json doc;
    doc["valid"] = !has_errors(violations);
    doc["violations"] = Json::array();
    for (const auto& v : violations) {
      doc["violations"].push_back({{"severity", v.severity == Severity::error ? "error" : "warning"},
                                   {"kind", std::string(to_string(v.kind))},
                                   {"entity", v.entity},
                                   {"related", v.related},
                                   {"message", v.message}});
    }
    out << doc.dump(2) << "\n";
  } else {
    out << "severity,kind,entity,related,message\n";
    for (const auto& v : violations) {
      out << (v.severity == Severity::error ? "error" : "warning") << "," << to_string(v.kind) << "," << v.entity
          << "," << v.related << "," << v.message << "\n";
    }
  }
  return has_errors(violations) ? kExitInvalidInput : kExitOk;
}

// baselines --------------------------------------------------------------------

int cmd_baselines(const Options& o, std::ostream& out, Log& log) {
  log.config("scenario", o.scenario);
  const Scenario s = load(o);
  const auto instances = all_instances(s);
  const std::size_t best = sbs(s, instances);
  double sbs_sum = 0.0, vbs_sum = 0.0;
  for (std::size_t i : instances) {
    if (s.is_runtime()) {
      sbs_sum += effective_cost(s, i, best);
      vbs_sum += vbs_cost(s, i);
    } else {
      double v = s.run(i, 0).value;
      for (std::size_t a = 1; a < s.num_algorithms(); ++a) {
        v = s.direction == Direction::minimize ? std::min(v, s.run(i, a).value) : std::max(v, s.run(i, a).value);
      }
      sbs_sum += s.run(i, best).value;
      vbs_sum += v;
    }
  }
  const double n = static_cast<double>(instances.size());
  std::string factor = "NA";
  try {
    factor = fixed3(improvement_factor(s));
  } catch (const std::domain_error&) {
    log.warn("improvement factor undefined: the VBS mean is zero");
  }
  std::vector<std::pair<std::string, std::string>> rows = {
      {"scenario", s.id},
      {"algorithms", std::to_string(s.num_algorithms())},
      {"instances", std::to_string(s.num_instances())},
      {"features", std::to_string(s.num_features())},
      {"objective", std::string(to_string(s.objective))},
      {"direction", std::string(to_string(s.direction))},
      {"cutoff", s.cutoff ? format_double(*s.cutoff) : "NA"},
      {"sbs", s.algorithms[best]},
      {s.is_runtime() ? "sbs_par10" : "sbs_mean", format_double(sbs_sum / n)},
      {s.is_runtime() ? "vbs_par10" : "vbs_mean", format_double(vbs_sum / n)},
      {"improvement_factor", factor},
  };
  if (o.json) {
    Json doc;
    for (const auto& [k, v] : rows) doc[k] = v;
    out << doc.dump(2) << "\n";
  } else {
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << k << "," << v << "\n";
  }
  return kExitOk;
}

// splits / obfuscate -------------------------------------------------------------

int cmd_splits(const Options& o, std::ostream& out, Log& log) {
  const std::uint64_t seed = o.seed.value_or(0);
  log.config("scenario", o.scenario);
  log.config("n", std::to_string(o.n_splits));
  log.config("split_mode", o.split_mode);
  log.config("test_fraction", format_double(o.test_fraction));
  log.config("seed", std::to_string(seed));
  log.config("out", o.out.empty() ? "-" : o.out);
  const Scenario s = parse_scenario(o.scenario);
  SplitMode mode;
  if (o.split_mode == "bootstrap") {
    mode = SplitMode::bootstrap;
  } else if (o.split_mode == "holdout") {
    mode = SplitMode::holdout;
  } else {
    throw InvalidInput("--split-mode must be bootstrap or holdout");
  }
  if (o.n_splits < 1) throw InvalidInput("--n must be positive");
  const auto splits = generate_splits(s, o.n_splits, mode, o.test_fraction, seed);
  emit(o, out, format_splits(s, splits));
  return kExitOk;
}

bool same_path(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::exists(a) && fs::exists(b) && fs::equivalent(a, b, ec);
}

int cmd_obfuscate(const Options& o, std::ostream&, Log& log) {
  const std::uint64_t seed = o.seed.value_or(0);
  log.config("scenario", o.scenario);
  log.config("seed", std::to_string(seed));
  log.config("out", o.out);
  log.config("names", o.names);
  if (same_path(o.scenario, o.out)) throw InvalidInput("--out must not be the input scenario directory");
  const Scenario s = load(o);
  const auto [hidden, names] = obfuscate(s, seed);
  write_scenario(hidden, o.out);
  write_file_atomic(o.names, format_name_map(names));
  return kExitOk;
}

// train / predict ----------------------------------------------------------------

int cmd_train(const Options& o, std::ostream& out, Log& log) {
  const auto kind = selector_kind(o);
  const auto hp = hyperparameters(o);
  const auto mode = competition_mode(o);
  const Scenario s = load(o);
  const Split& split = chosen_split(s, o);
  log.config("scenario", o.scenario);
  log.config("split_id", std::to_string(split.id));
  log.config("mode", o.mode);
  log_selector(log, kind, hp);
  log.config("out", o.out);
  std::vector<std::string> warnings;
  const auto start = std::chrono::steady_clock::now();
  const SelectorModel model = fit_selector(s, split.train, kind, hp, mode, &warnings);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  for (const auto& w : warnings) log.warn(w);
  write_model(model, o.out);
  out << "key,value\n";
  out << "training_instances," << split.train.size() << "\n";
  out << "presolve_steps," << model.presolve.size() << "\n";
  out << "training_seconds," << fixed3(elapsed.count()) << "\n";
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out, Log& log) {
  const Scenario s = load(o);
  const Split& split = chosen_split(s, o);
  log.config("scenario", o.scenario);
  log.config("split_id", std::to_string(split.id));
  log.config("model", o.model);
  log.config("out", o.out.empty() ? "-" : o.out);
  const SelectorModel model = read_model(o.model);
  std::vector<std::string> warnings;
  const auto predictions = predict_all(model, s, split.test, &warnings);
  for (const auto& w : warnings) log.warn(w);
  emit(o, out, format_predictions(s, predictions));
  return kExitOk;
}

// evaluate -----------------------------------------------------------------------

int cmd_evaluate(const Options& o, std::ostream& out, Log& log) {
  const auto mode = competition_mode(o);
  const Scenario s = load(o);
  if (s.splits.empty()) throw InvalidInput("scenario has no splits");
  if (o.predictions.empty() == o.model.empty()) throw InvalidInput("give exactly one of --predictions or --model");
  if (o.anonymize_test && o.model.empty()) throw InvalidInput("--anonymize-test needs --model");

  std::vector<const Split*> splits;
  if (!o.split_ids.empty()) {
    for (int id : o.split_ids) {
      try {
        splits.push_back(&s.split(id));
      } catch (const std::exception&) {
        throw InvalidInput("unknown split id " + std::to_string(id));
      }
    }
  } else if (mode == CompetitionMode::icon2015) {
    for (const auto& sp : s.splits) splits.push_back(&sp);
  } else {
    splits.push_back(&chosen_split(s, o));
  }
  if (!o.model.empty() && splits.size() != 1) throw InvalidInput("--model scores a single split; pass --split-id");

  std::string system = o.system;
  if (system.empty()) system = fs::path(o.model.empty() ? o.predictions : o.model).stem().string();
  log.config("scenario", o.scenario);
  log.config("mode", o.mode);
  log.config("system", system);
  log.config("out_of_competition", o.ooc ? "yes" : "no");
  std::vector<std::string> ids;
  for (const auto* sp : splits) ids.push_back(std::to_string(sp->id));
  log.config("splits", join(ids));
  log.config(o.model.empty() ? "predictions" : "model", o.model.empty() ? o.predictions : o.model);

  std::vector<ScoreReport> reports;
  for (const Split* split : splits) {
    PredictionTable predictions;
    if (!o.model.empty()) {
      const SelectorModel model = read_model(o.model);
      std::vector<std::string> warnings;
      if (o.anonymize_test) {
        const Scenario blinded = blind_runs(s, split->test);
        predictions = predict_all(model, blinded, split->test, &warnings);
        const bool same = predictions == predict_all(model, s, split->test);
        log.note(std::string("blinded test runs ") + (same ? "leave predictions unchanged" : "CHANGE predictions"));
        if (!same) throw std::runtime_error("selector output depends on test performance data");
      } else {
        predictions = predict_all(model, s, split->test, &warnings);
      }
      for (const auto& w : warnings) log.warn(w);
    } else {
      predictions = parse_predictions(with_split(o.predictions, split->id), s, split->test);
    }
    auto report = score_system(s, *split, predictions, system);
    report.out_of_competition = o.ooc;
    reports.push_back(std::move(report));
  }
  emit(o, out, o.json ? format_report_json(reports, mode) : format_report_csv(reports));
  try {
    const auto agg = aggregate(reports, mode);
    log.note("score (" + o.mode + ") = " + format_double(agg.value));
    for (const auto& e : agg.excluded) log.warn("undefined gap left out: " + e);
  } catch (const std::invalid_argument&) {
    log.warn("every gap is undefined; no aggregate score");
  }
  return kExitOk;
}

// compare ------------------------------------------------------------------------

stats::ScoreMatrix matrix_from_reports(const Options& o, CompetitionMode mode, std::vector<std::string>& ooc) {
  std::vector<ReportRow> rows;
  for (const auto& path : o.reports) {
    auto part = parse_report_csv(read_file(path), path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::vector<std::string> systems, scenarios;
  // (system, scenario) -> split -> metric -> value
  std::map<std::pair<std::string, std::string>, std::map<int, std::map<std::string, std::optional<double>>>> cells;
  for (const auto& r : rows) {
    if (std::find(systems.begin(), systems.end(), r.system) == systems.end()) systems.push_back(r.system);
    if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end()) scenarios.push_back(r.scenario);
    if (r.metric == "out_of_competition") {
      if (std::find(ooc.begin(), ooc.end(), r.system) == ooc.end()) ooc.push_back(r.system);
      continue;
    }
    cells[{r.system, r.scenario}][r.split][r.metric] = r.value;
  }
  stats::ScoreMatrix m;
  m.systems = systems;
  m.scenarios = scenarios;
  for (const auto& scenario : scenarios) {
    for (const auto& system : systems) {
      auto it = cells.find({system, scenario});
      double sum = 0.0;
      int count = 0;
      if (it != cells.end()) {
        for (const auto& [split, metrics] : it->second) {
          std::vector<std::string> wanted;
          if (!o.metric.empty()) {
            wanted = {o.metric};
          } else if (metrics.count("gap_quality")) {
            wanted = {"gap_quality"};
          } else if (mode == CompetitionMode::oasc2017) {
            wanted = {"gap_par10"};
          } else {
            wanted = {"gap_par10", "gap_mcp", "gap_solved"};
          }
          double split_sum = 0.0;
          int split_count = 0;
          for (const auto& w : wanted) {
            auto mv = metrics.find(w);
            if (mv != metrics.end() && mv->second) {
              split_sum += *mv->second;
              ++split_count;
            }
          }
          if (split_count > 0) {
            sum += split_sum / split_count;
            ++count;
          }
        }
      }
      m.values.push_back(count > 0 ? std::optional<double>(sum / count) : std::nullopt);
    }
  }
  return m;
}

int cmd_compare(const Options& o, std::ostream& out, Log& log) {
  const auto mode = competition_mode(o);
  const auto direction = parse_direction(o.direction);
  if (!direction) throw InvalidInput("--direction must be minimize or maximize");
  if (o.reports.empty() == o.matrix.empty()) throw InvalidInput("give either --reports or --matrix");
  std::vector<std::string> ooc = o.ooc_systems;
  const stats::ScoreMatrix all = o.matrix.empty() ? matrix_from_reports(o, mode, ooc)
                                                 : stats::parse_score_matrix(read_file(o.matrix), o.matrix);
  for (const auto& name : ooc) {
    if (std::find(all.systems.begin(), all.systems.end(), name) == all.systems.end()) {
      throw InvalidInput("--ooc names unknown system '" + name + "'");
    }
  }
  log.config(o.matrix.empty() ? "reports" : "matrix", o.matrix.empty() ? join(o.reports) : o.matrix);
  log.config("mode", o.mode);
  log.config("metric", o.metric.empty() ? "gap" : o.metric);
  log.config("direction", o.direction);
  log.config("alpha", format_double(o.alpha));
  log.config("out_of_competition", ooc.empty() ? "none" : join(ooc));
  log.config("out", o.out.empty() ? "-" : o.out);

  try {
    all.require_complete();
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  const auto means = stats::column_means(all);
  const auto ranked = all.without_systems(ooc);
  const auto analysis = stats::analyze(ranked, *direction, o.alpha);
  const auto vbs = stats::virtual_best_selector(ranked, *direction);

  auto rank_of = [&](const std::string& name) -> std::optional<double> {
    for (std::size_t c = 0; c < ranked.systems.size(); ++c) {
      if (ranked.systems[c] == name) return analysis.ranks.average_ranks[c];
    }
    return std::nullopt;
  };
  std::string summary = "system,mean,average_rank,out_of_competition\n";
  for (std::size_t c = 0; c < all.systems.size(); ++c) {
    const auto r = rank_of(all.systems[c]);
    summary += all.systems[c] + "," + format_double(means[c]) + "," + (r ? format_double(*r) : "NA") + "," +
               (r ? "0" : "1") + "\n";
  }
  summary += "meta_vbs," + format_double(vbs.mean) + ",NA,1\n";
  std::string meta = "scenario,best,system\n";
  for (std::size_t r = 0; r < ranked.scenarios.size(); ++r) {
    meta += ranked.scenarios[r] + "," + format_double(vbs.per_scenario_best[r]) + "," + vbs.best_system[r] + "\n";
  }

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    write_file_atomic(dir / "summary.csv", summary);
    write_file_atomic(dir / "scores.csv", stats::format_score_matrix(all));
    write_file_atomic(dir / "ranks.csv", stats::format_rank_table(analysis.ranks));
    write_file_atomic(dir / "significance.csv", stats::format_significance(analysis));
    write_file_atomic(dir / "cd_diagram.json", stats::format_cd_diagram_json(analysis));
    write_file_atomic(dir / "meta_vbs.csv", meta);
  }
  if (o.json) {
    Json doc;
    doc["systems"] = Json::array();
    for (std::size_t c = 0; c < all.systems.size(); ++c) {
      const auto r = rank_of(all.systems[c]);
      doc["systems"].push_back({{"name", all.systems[c]},
                                {"mean", means[c]},
                                {"average_rank", r ? Json(*r) : Json(nullptr)},
                                {"out_of_competition", !r.has_value()}});
    }
    doc["meta_vbs"] = vbs.mean;
    doc["rank_analysis"] = Json::parse(stats::format_cd_diagram_json(analysis));
    out << doc.dump(2) << "\n";
  } else {
    out << summary;
  }
  log.note("friedman statistic = " + format_double(analysis.friedman.statistic) +
           ", p = " + format_double(analysis.friedman.p_value));
  log.note("critical distance = " + format_double(analysis.critical_distance));
  return kExitOk;
}

// seed-study -----------------------------------------------------------------------

int cmd_seed_study(const Options& o, std::ostream& out, Log& log) {
  const auto kind = selector_kind(o);
  const auto mode = competition_mode(o);
  Hyperparameters hp = hyperparameters(o);
  const std::uint64_t base = hp.seed;
  if (o.n_seeds < 1) throw InvalidInput("--n-seeds must be positive");
  const Scenario s = load(o);
  const Split& split = chosen_split(s, o);
  log.config("scenario", o.scenario);
  log.config("split_id", std::to_string(split.id));
  log.config("mode", o.mode);
  log.config("n_seeds", std::to_string(o.n_seeds));
  log_selector(log, kind, hp);
  log.config("out", o.out.empty() ? "-" : o.out);

  std::vector<double> samples;
  std::string sample_rows = "seed,gap\n";
  for (int k = 0; k < o.n_seeds; ++k) {
    hp.seed = base + static_cast<std::uint64_t>(k);
    std::vector<std::string> warnings;
    const auto model = fit_selector(s, split.train, kind, hp, mode, &warnings);
    const auto predictions = predict_all(model, s, split.test, &warnings);
    const auto report = score_system(s, split, predictions, std::string(to_string(kind)));
    double gap;
    try {
      gap = aggregate(std::span<const ScoreReport>(&report, 1), mode).value;
    } catch (const std::invalid_argument&) {
      throw InvalidInput("the gap is undefined on this split (SBS equals VBS)");
    }
    samples.push_back(gap);
    sample_rows += std::to_string(hp.seed) + "," + format_double(gap) + "\n";
  }
  const auto e = stats::ecdf(samples, samples.front());
  const double lo = *std::min_element(samples.begin(), samples.end());
  const double hi = *std::max_element(samples.begin(), samples.end());
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    write_file_atomic(dir / "samples.csv", sample_rows);
    write_file_atomic(dir / "ecdf.csv", stats::format_ecdf(e));
  }
  if (o.json) {
    Json doc{{"n_seeds", o.n_seeds}, {"first_seed_gap", samples.front()}, {"quantile", e.quantile},
             {"min", lo},           {"max", hi},                          {"samples", samples}};
    out << doc.dump(2) << "\n";
  } else {
    out << "key,value\n";
    out << "n_seeds," << o.n_seeds << "\n";
    out << "first_seed_gap," << format_double(samples.front()) << "\n";
    out << "quantile," << format_double(e.quantile) << "\n";
    out << "min," << format_double(lo) << "\n";
    out << "max," << format_double(hi) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Algorithm selection benchmark toolkit", "asbench"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", o.scenario, "Scenario bundle directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--splits", o.splits, "Split table replacing the bundle's splits.csv")->check(CLI::ExistingFile);
  };
  auto selector = [&](CLI::App* cmd) {
    cmd->add_option("--selector", o.selector, "regression, cluster, pairwise, stacking or sunny")->required();
    cmd->add_option("--hp", o.hp, "Hyperparameter as key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Random seed (overrides --hp seed=)");
  };
  auto mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", o.mode, "Competition rules: icon2015 or oasc2017")->capture_default_str();
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario bundle; exit 2 on errors");
  scenario(validate_cmd);
  validate_cmd->add_flag("--json", o.json, "JSON output");

  auto* baselines_cmd = app.add_subcommand("baselines", "Portfolio size, SBS, VBS and improvement factor");
  scenario(baselines_cmd);
  baselines_cmd->add_flag("--json", o.json, "JSON output");

  auto* splits_cmd = app.add_subcommand("splits", "Generate train/test splits");
  splits_cmd->add_option("--scenario", o.scenario, "Scenario bundle directory")->required()->check(CLI::ExistingDirectory);
  splits_cmd->add_option("--n", o.n_splits, "Number of splits")->capture_default_str();
  splits_cmd->add_option("--split-mode", o.split_mode, "bootstrap or holdout")->capture_default_str();
  splits_cmd->add_option("--test-fraction", o.test_fraction, "Holdout test fraction")->capture_default_str();
  splits_cmd->add_option("--seed", o.seed, "Random seed");
  splits_cmd->add_option("--out", o.out, "Output splits.csv (stdout if omitted)");

  auto* obfuscate_cmd = app.add_subcommand("obfuscate", "Rename algorithms and instances");
  scenario(obfuscate_cmd);
  obfuscate_cmd->add_option("--seed", o.seed, "Random seed");
  obfuscate_cmd->add_option("--out", o.out, "Output bundle directory")->required();
  obfuscate_cmd->add_option("--names", o.names, "Output pseudonym table")->required();

  auto* train_cmd = app.add_subcommand("train", "Fit a selector on a split's training instances");
  scenario(train_cmd);
  train_cmd->add_option("--split-id", o.split_ids, "Split id (default: lowest)")->expected(1);
  selector(train_cmd);
  mode(train_cmd);
  train_cmd->add_option("--out", o.out, "Model artifact path")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Write schedules for a split's test instances");
  scenario(predict_cmd);
  predict_cmd->add_option("--split-id", o.split_ids, "Split id (default: lowest)")->expected(1);
  predict_cmd->add_option("--model", o.model, "Model artifact")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", o.out, "Prediction file (stdout if omitted)");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against the recorded runs");
  scenario(evaluate_cmd);
  evaluate_cmd->add_option("--split-id", o.split_ids, "Split ids (default: all for icon2015, lowest for oasc2017)");
  auto* predictions_opt =
      evaluate_cmd->add_option("--predictions", o.predictions, "Prediction file; {split} expands to the split id");
  auto* model_opt = evaluate_cmd->add_option("--model", o.model, "Model artifact to predict with")->check(CLI::ExistingFile);
  predictions_opt->excludes(model_opt);
  evaluate_cmd->add_flag("--anonymize-test", o.anonymize_test, "Predict from blinded test runs and check equality")
      ->needs(model_opt);
  evaluate_cmd->add_option("--system", o.system, "System name in the report");
  evaluate_cmd->add_flag("--ooc", o.ooc, "Mark the system out of competition");
  mode(evaluate_cmd);
  evaluate_cmd->add_option("--out", o.out, "Report path (stdout if omitted)");
  evaluate_cmd->add_flag("--json", o.json, "JSON report");

  auto* compare_cmd = app.add_subcommand("compare", "Rank systems across scenarios");
  auto* reports_opt = compare_cmd->add_option("--reports", o.reports, "Score reports from evaluate")->check(CLI::ExistingFile);
  auto* matrix_opt = compare_cmd->add_option("--matrix", o.matrix, "Wide scenario x system score table")->check(CLI::ExistingFile);
  reports_opt->excludes(matrix_opt);
  compare_cmd->add_option("--metric", o.metric, "Report metric to rank (default: the mode's gap)");
  compare_cmd->add_option("--direction", o.direction, "minimize or maximize")->capture_default_str();
  compare_cmd->add_option("--ooc", o.ooc_systems, "Out-of-competition systems (left out of ranks)");
  compare_cmd->add_option("--alpha", o.alpha, "Nemenyi significance level: 0.05 or 0.1")->capture_default_str();
  mode(compare_cmd);
  compare_cmd->add_option("--out", o.out, "Directory for the result tables");
  compare_cmd->add_flag("--json", o.json, "JSON summary");

  auto* seed_cmd = app.add_subcommand("seed-study", "Refit across seeds and report the ECDF of the gap");
  scenario(seed_cmd);
  seed_cmd->add_option("--split-id", o.split_ids, "Split id (default: lowest)")->expected(1);
  selector(seed_cmd);
  seed_cmd->add_option("--n-seeds", o.n_seeds, "Number of seeds")->capture_default_str();
  mode(seed_cmd);
  seed_cmd->add_option("--out", o.out, "Directory for samples.csv and ecdf.csv");
  seed_cmd->add_flag("--json", o.json, "JSON summary");

  std::vector<const char*> argv{"asbench"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  Log log(err);
  try {
    auto* cmd = app.get_subcommands().front();
    log.config("command", cmd->get_name());
    const std::string name = cmd->get_name();
    if (name == "validate") return cmd_validate(o, out, log);
    if (name == "baselines") return cmd_baselines(o, out, log);
    if (name == "splits") return cmd_splits(o, out, log);
    if (name == "obfuscate") return cmd_obfuscate(o, out, log);
    if (name == "train") return cmd_train(o, out, log);
    if (name == "predict") return cmd_predict(o, out, log);
    if (name == "evaluate") return cmd_evaluate(o, out, log);
    if (name == "compare") return cmd_compare(o, out, log);
    if (name == "seed-study") return cmd_seed_study(o, out, log);
    err << "# error: unknown command\n";
    return kExitInvalidInput;
  } catch (const ParseError& e) {
    err << "# error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const InvalidInput& e) {
    err << "# error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "# error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace asbench::cli
