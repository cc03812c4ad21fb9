#include "asbench/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "asbench/errors.hpp"
#include "asbench/rng.hpp"
#include "asbench/text.hpp"

namespace fs = std::filesystem;

namespace asbench {

namespace {

constexpr std::array<std::string_view, 7> kDescriptionKeys = {
    "scenario_id", "objective", "direction", "cutoff", "algorithms", "feature_groups", "bootstrap_splits"};

struct DescriptionEntry {
  std::string value;
  std::size_t line = 0;
};

std::map<std::string, DescriptionEntry, std::less<>> read_description(const fs::path& path) {
  LineReader reader(read_file(path), path.string());
  std::map<std::string, DescriptionEntry, std::less<>> entries;
  std::string_view line;
  while (reader.next(line)) {
    const auto text = trim(line);
    if (text.front() == '#') continue;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) reader.fail("expected 'key: value'");
    const std::string key(trim(text.substr(0, colon)));
    if (std::find(kDescriptionKeys.begin(), kDescriptionKeys.end(), key) == kDescriptionKeys.end()) {
      reader.fail("unknown key '" + key + "'");
    }
    if (!entries.emplace(key, DescriptionEntry{std::string(trim(text.substr(colon + 1))), reader.line_number()})
             .second) {
      reader.fail("key '" + key + "' given twice");
    }
  }
  return entries;
}

std::vector<std::string> read_header(LineReader& reader, std::span<const std::string_view> expected_prefix) {
  std::string_view line;
  if (!reader.next(line)) reader.fail("missing header row");
  auto header = split_fields(line);
  if (header.size() < expected_prefix.size()) reader.fail("header has too few columns");
  for (std::size_t k = 0; k < expected_prefix.size(); ++k) {
    if (header[k] != expected_prefix[k]) {
      reader.fail("header column " + std::to_string(k + 1) + " must be '" + std::string(expected_prefix[k]) + "'");
    }
  }
  return header;
}

struct PendingGroup {
  FeatureGroup group;
  std::size_t line = 0;
};

std::vector<PendingGroup> parse_groups(const DescriptionEntry& entry, const std::string& file) {
  std::vector<PendingGroup> out;
  if (entry.value.empty()) return out;
  for (const auto& item : split_fields(entry.value, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos || eq == 0) {
      throw ParseError(file, entry.line, "feature group '" + item + "' must read name=cost_column:indices");
    }
    PendingGroup pending;
    pending.line = entry.line;
    pending.group.name = std::string(trim(std::string_view(item).substr(0, eq)));
    pending.group.cost_column = std::string(trim(std::string_view(item).substr(eq + 1, colon - eq - 1)));
    const auto indices = std::string_view(item).substr(colon + 1);
    if (!trim(indices).empty()) {
      for (const auto& idx : split_fields(indices, ',')) {
        const auto value = parse_integer(idx);
        if (!value || *value < 0) {
          throw ParseError(file, entry.line, "bad feature index '" + idx + "' in group '" + pending.group.name + "'");
        }
        pending.group.feature_indices.push_back(static_cast<std::size_t>(*value));
      }
    }
    out.push_back(std::move(pending));
  }
  return out;
}

std::size_t resolve(const IdIndex& index, const std::string& id, const LineReader& reader, std::string_view what) {
  auto it = index.find(id);
  if (it == index.end()) reader.fail("unknown " + std::string(what) + " '" + id + "'");
  return it->second;
}

FeatureValue parse_cell(const std::string& cell, const LineReader& reader) {
  if (cell == "?") return std::nullopt;
  auto value = parse_double(cell);
  if (!value) reader.fail("'" + cell + "' is not a number");
  return value;
}

std::string format_cell(const std::optional<double>& value) { return value ? format_double(*value) : "?"; }

std::string join(std::span<const std::string> items, char separator) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += separator;
    out += items[k];
  }
  return out;
}

std::vector<Split> read_split_table(LineReader reader, const Scenario& s, bool bootstrap) {
  static constexpr std::array<std::string_view, 3> kHeader = {"split_id", "instance_id", "role"};
  const auto header = read_header(reader, kHeader);
  if (header.size() != kHeader.size()) reader.fail("split table has exactly three columns");
  const auto instances = make_index(s.instances);
  std::vector<Split> splits;
  std::set<std::tuple<int, std::size_t, bool>> seen;
  std::string_view line;
  while (reader.next(line)) {
    const auto cells = split_fields(line);
    if (cells.size() != 3) reader.fail("expected 3 fields, got " + std::to_string(cells.size()));
    const auto id = parse_integer(cells[0]);
    if (!id) reader.fail("bad split id '" + cells[0] + "'");
    const std::size_t inst = resolve(instances, cells[1], reader, "instance");
    if (cells[2] != "train" && cells[2] != "test") reader.fail("role must be train or test");
    const bool is_test = cells[2] == "test";
    if (!seen.emplace(static_cast<int>(*id), inst, is_test).second) {
      reader.fail("duplicate split row for instance '" + cells[1] + "'");
    }
    auto it = std::find_if(splits.begin(), splits.end(), [&](const Split& sp) { return sp.id == *id; });
    if (it == splits.end()) {
      splits.push_back(Split{static_cast<int>(*id), {}, {}, bootstrap});
      it = splits.end() - 1;
    }
    (is_test ? it->test : it->train).push_back(inst);
  }
  for (auto& sp : splits) {
    std::sort(sp.train.begin(), sp.train.end());
    std::sort(sp.test.begin(), sp.test.end());
  }
  return splits;
}

}  // namespace

Scenario load_scenario(const fs::path& dir) {
  Scenario s;
  const fs::path description_path = dir / kDescriptionFile;
  const std::string description_name = description_path.string();
  const auto description = read_description(description_path);

  auto require = [&](std::string_view key) -> const DescriptionEntry& {
    auto it = description.find(key);
    if (it == description.end()) throw ParseError(description_name, 0, "missing key '" + std::string(key) + "'");
    return it->second;
  };

  s.id = require("scenario_id").value;
  const auto& objective = require("objective");
  if (auto o = parse_objective(objective.value)) {
    s.objective = *o;
  } else {
    throw ParseError(description_name, objective.line, "objective must be runtime or quality");
  }
  const auto& direction = require("direction");
  if (auto d = parse_direction(direction.value)) {
    s.direction = *d;
  } else {
    throw ParseError(description_name, direction.line, "direction must be minimize or maximize");
  }
  if (auto it = description.find("cutoff"); it != description.end()) {
    auto value = parse_double(it->second.value);
    if (!value) throw ParseError(description_name, it->second.line, "cutoff is not a number");
    s.cutoff = *value;
  }
  const auto& algorithms = require("algorithms");
  for (auto& a : split_fields(algorithms.value)) {
    if (a.empty()) throw ParseError(description_name, algorithms.line, "empty algorithm name");
    if (std::find(s.algorithms.begin(), s.algorithms.end(), a) != s.algorithms.end()) {
      throw ParseError(description_name, algorithms.line, "duplicate algorithm '" + a + "'");
    }
    s.algorithms.push_back(std::move(a));
  }
  bool bootstrap = false;
  if (auto it = description.find("bootstrap_splits"); it != description.end()) {
    if (it->second.value != "true" && it->second.value != "false") {
      throw ParseError(description_name, it->second.line, "bootstrap_splits must be true or false");
    }
    bootstrap = it->second.value == "true";
  }
  std::vector<PendingGroup> groups;
  if (auto it = description.find("feature_groups"); it != description.end()) {
    groups = parse_groups(it->second, description_name);
  }

  // Features fix the instance list and its order.
  {
    const fs::path path = dir / kFeaturesFile;
    LineReader reader(read_file(path), path.string());
    static constexpr std::array<std::string_view, 1> kHeader = {"instance_id"};
    auto header = read_header(reader, kHeader);
    s.feature_names.assign(header.begin() + 1, header.end());
    {
      std::set<std::string> names;
      for (const auto& n : s.feature_names) {
        if (!names.insert(n).second) reader.fail("duplicate feature '" + n + "'");
      }
    }
    std::set<std::string> seen;
    std::string_view line;
    while (reader.next(line)) {
      auto cells = split_fields(line);
      if (cells.size() != header.size()) {
        reader.fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
      }
      if (!seen.insert(cells[0]).second) reader.fail("duplicate instance '" + cells[0] + "'");
      s.instances.push_back(cells[0]);
      for (std::size_t k = 1; k < cells.size(); ++k) s.features.push_back(parse_cell(cells[k], reader));
    }
  }
  const auto instance_index = make_index(s.instances);
  const auto algorithm_index = make_index(s.algorithms);

  {
    const fs::path path = dir / kRunsFile;
    LineReader reader(read_file(path), path.string());
    static constexpr std::array<std::string_view, 5> kHeader = {"instance_id", "repetition", "algorithm", "value",
                                                                "status"};
    if (read_header(reader, kHeader).size() != kHeader.size()) reader.fail("run table has exactly five columns");
    struct Accumulator {
      double sum = 0.0;
      int count = 0;
      RunStatus worst = RunStatus::ok;
    };
    std::vector<Accumulator> acc(s.num_instances() * s.num_algorithms());
    std::set<std::tuple<std::size_t, long long, std::size_t>> seen;
    std::string_view line;
    while (reader.next(line)) {
      const auto cells = split_fields(line);
      if (cells.size() != 5) reader.fail("expected 5 fields, got " + std::to_string(cells.size()));
      const std::size_t inst = resolve(instance_index, cells[0], reader, "instance");
      const auto rep = parse_integer(cells[1]);
      if (!rep || *rep < 1) reader.fail("repetition must be a positive integer");
      const std::size_t alg = resolve(algorithm_index, cells[2], reader, "algorithm");
      const auto value = parse_double(cells[3]);
      if (!value) reader.fail("'" + cells[3] + "' is not a number");
      const auto status = parse_run_status(cells[4]);
      if (!status) reader.fail("unknown run status '" + cells[4] + "'");
      if (!seen.emplace(inst, *rep, alg).second) {
        reader.fail("duplicate run for instance '" + cells[0] + "', algorithm '" + cells[2] + "', repetition " +
                    cells[1]);
      }
      auto& a = acc[inst * s.num_algorithms() + alg];
      a.sum += *value;
      ++a.count;
      if (status_severity(*status) > status_severity(a.worst)) a.worst = *status;
    }
    s.runs.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (acc[k].count > 0) s.runs[k] = RunRecord{acc[k].sum / acc[k].count, acc[k].worst};
    }
  }

  {
    const fs::path path = dir / kFeatureCostsFile;
    const bool wants_costs = std::any_of(groups.begin(), groups.end(),
                                         [](const PendingGroup& g) { return !g.group.cost_column.empty(); });
    if (fs::exists(path)) {
      LineReader reader(read_file(path), path.string());
      static constexpr std::array<std::string_view, 1> kHeader = {"instance_id"};
      const auto header = read_header(reader, kHeader);
      std::map<std::string, std::size_t> columns;
      for (std::size_t k = 1; k < header.size(); ++k) {
        if (!columns.emplace(header[k], k).second) reader.fail("duplicate cost column '" + header[k] + "'");
      }
      for (auto& g : groups) {
        if (g.group.cost_column.empty()) continue;
        if (!columns.count(g.group.cost_column)) {
          throw ParseError(description_name, g.line,
                           "cost column '" + g.group.cost_column + "' of group '" + g.group.name +
                               "' not found in " + kFeatureCostsFile);
        }
        g.group.cost.assign(s.num_instances(), std::nullopt);
      }
      std::set<std::size_t> seen;
      std::string_view line;
      while (reader.next(line)) {
        const auto cells = split_fields(line);
        if (cells.size() != header.size()) {
          reader.fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
        }
        const std::size_t inst = resolve(instance_index, cells[0], reader, "instance");
        if (!seen.insert(inst).second) reader.fail("duplicate instance '" + cells[0] + "'");
        for (auto& g : groups) {
          if (g.group.cost_column.empty()) continue;
          g.group.cost[inst] = parse_cell(cells[columns.at(g.group.cost_column)], reader);
        }
      }
    } else if (wants_costs) {
      throw ParseError(description_name, groups.front().line,
                       "feature groups name cost columns but " + std::string(kFeatureCostsFile) + " is missing");
    }
  }
  for (auto& g : groups) s.feature_groups.push_back(std::move(g.group));

  {
    const fs::path path = dir / kSplitsFile;
    s.splits = read_split_table(LineReader(read_file(path), path.string()), s, bootstrap);
  }
  return s;
}

Scenario parse_scenario(const fs::path& dir) {
  Scenario s = load_scenario(dir);
  const auto violations = validate(s);
  if (has_errors(violations)) {
    std::ostringstream msg;
    msg << "scenario '" << s.id << "' in " << dir.string() << " is invalid:";
    for (const auto& v : violations) {
      if (v.severity != Severity::error) continue;
      msg << "\n  " << to_string(v.kind) << " " << v.entity;
      if (!v.related.empty()) msg << " / " << v.related;
      msg << ": " << v.message;
    }
    throw InvalidInput(msg.str());
  }
  return s;
}

std::vector<Split> parse_splits(const fs::path& path, const Scenario& scenario) {
  const bool bootstrap = !scenario.splits.empty() && scenario.splits.front().bootstrap;
  return read_split_table(LineReader(read_file(path), path.string()), scenario, bootstrap);
}

std::string format_splits(const Scenario& s, std::span<const Split> splits) {
  std::string out = "split_id,instance_id,role\n";
  for (const auto& sp : splits) {
    for (std::size_t i : sp.train) out += std::to_string(sp.id) + "," + s.instances.at(i) + ",train\n";
    for (std::size_t i : sp.test) out += std::to_string(sp.id) + "," + s.instances.at(i) + ",test\n";
  }
  return out;
}

void write_scenario(const Scenario& s, const fs::path& dir) {
  fs::create_directories(dir);

  std::string description;
  description += "scenario_id: " + s.id + "\n";
  description += "objective: " + std::string(to_string(s.objective)) + "\n";
  description += "direction: " + std::string(to_string(s.direction)) + "\n";
  if (s.cutoff) description += "cutoff: " + format_double(*s.cutoff) + "\n";
  description += "algorithms: " + join(s.algorithms, ',') + "\n";
  {
    std::vector<std::string> groups;
    for (const auto& g : s.feature_groups) {
      std::vector<std::string> idx;
      for (std::size_t f : g.feature_indices) idx.push_back(std::to_string(f));
      groups.push_back(g.name + "=" + (g.cost.empty() ? std::string() : g.cost_column) + ":" + join(idx, ','));
    }
    description += "feature_groups: " + join(groups, ';') + "\n";
  }
  const bool bootstrap = !s.splits.empty() &&
                         std::all_of(s.splits.begin(), s.splits.end(), [](const Split& sp) { return sp.bootstrap; });
  description += std::string("bootstrap_splits: ") + (bootstrap ? "true" : "false") + "\n";
  write_file_atomic(dir / kDescriptionFile, description);

  std::string runs = "instance_id,repetition,algorithm,value,status\n";
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
      const auto& slot = s.runs.at(i * s.num_algorithms() + a);
      if (!slot) continue;
      runs += s.instances[i] + ",1," + s.algorithms[a] + "," + format_double(slot->value) + "," +
              std::string(to_string(slot->status)) + "\n";
    }
  }
  write_file_atomic(dir / kRunsFile, runs);

  std::string features = "instance_id";
  for (const auto& f : s.feature_names) features += "," + f;
  features += "\n";
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    features += s.instances[i];
    for (std::size_t f = 0; f < s.num_features(); ++f) features += "," + format_cell(s.feature(i, f));
    features += "\n";
  }
  write_file_atomic(dir / kFeaturesFile, features);

  std::vector<const FeatureGroup*> costed;
  std::vector<std::string> columns;
  for (const auto& g : s.feature_groups) {
    if (g.cost.empty() || g.cost_column.empty()) continue;
    if (std::find(columns.begin(), columns.end(), g.cost_column) != columns.end()) continue;
    columns.push_back(g.cost_column);
    costed.push_back(&g);
  }
  const fs::path cost_path = dir / kFeatureCostsFile;
  if (!costed.empty()) {
    std::string costs = "instance_id," + join(columns, ',') + "\n";
    for (std::size_t i = 0; i < s.num_instances(); ++i) {
      costs += s.instances[i];
      for (const auto* g : costed) costs += "," + format_cell(g->cost.at(i));
      costs += "\n";
    }
    write_file_atomic(cost_path, costs);
  } else if (fs::exists(cost_path)) {
    fs::remove(cost_path);
  }

  write_file_atomic(dir / kSplitsFile, format_splits(s, s.splits));
}

PredictionTable parse_predictions_text(std::string contents, const std::string& file_name, const Scenario& s,
                                       std::span<const std::size_t> required) {
  LineReader reader(std::move(contents), file_name);
  static constexpr std::array<std::string_view, 5> kHeader = {"instance_id", "step", "kind", "name", "budget"};
  if (read_header(reader, kHeader).size() != kHeader.size()) reader.fail("prediction table has exactly five columns");
  const auto instances = make_index(s.instances);
  const auto algorithms = make_index(s.algorithms);
  IdIndex groups;
  for (std::size_t g = 0; g < s.feature_groups.size(); ++g) groups.emplace(s.feature_groups[g].name, g);

  struct Row {
    long long ordinal;
    ScheduleStep step;
    std::size_t line;
  };
  std::map<std::size_t, std::vector<Row>> rows;
  std::string_view line;
  while (reader.next(line)) {
    const auto cells = split_fields(line);
    if (cells.size() != 5) reader.fail("expected 5 fields, got " + std::to_string(cells.size()));
    const std::size_t inst = resolve(instances, cells[0], reader, "instance");
    const auto ordinal = parse_integer(cells[1]);
    if (!ordinal || *ordinal < 1) reader.fail("step ordinal must be a positive integer");
    const auto budget = parse_double(cells[4]);
    if (!budget || *budget < 0.0) reader.fail("budget must be a number >= 0");
    ScheduleStep step;
    if (cells[2] == "feature") {
      step = FeatureStep{resolve(groups, cells[3], reader, "feature group")};
    } else if (cells[2] == "solver") {
      step = SolverStep{resolve(algorithms, cells[3], reader, "algorithm"), *budget};
    } else {
      reader.fail("step kind must be feature or solver, got '" + cells[2] + "'");
    }
    rows[inst].push_back(Row{*ordinal, step, reader.line_number()});
  }

  PredictionTable table;
  for (auto& [inst, list] : rows) {
    std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) { return a.ordinal < b.ordinal; });
    Schedule schedule;
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k].ordinal != static_cast<long long>(k + 1)) {
        throw ParseError(file_name, list[k].line,
                         "step ordinals for instance '" + s.instances[inst] + "' are not contiguous from 1");
      }
      schedule.steps.push_back(list[k].step);
    }
    if (auto problem = schedule_problem(s, schedule); !problem.empty()) {
      throw ParseError(file_name, list.front().line, "instance '" + s.instances[inst] + "': " + problem);
    }
    table.emplace(inst, std::move(schedule));
  }
  for (std::size_t inst : required) {
    if (!table.count(inst)) throw InvalidInput(file_name + ": no prediction for instance '" + s.instances.at(inst) + "'");
  }
  return table;
}

PredictionTable parse_predictions(const fs::path& path, const Scenario& s, std::span<const std::size_t> required) {
  return parse_predictions_text(read_file(path), path.string(), s, required);
}

std::string format_predictions(const Scenario& s, const PredictionTable& predictions) {
  std::string out = "instance_id,step,kind,name,budget\n";
  for (const auto& [inst, schedule] : predictions) {
    for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
      out += s.instances.at(inst) + "," + std::to_string(k + 1) + ",";
      if (const auto* f = std::get_if<FeatureStep>(&schedule.steps[k])) {
        out += "feature," + s.feature_groups.at(f->group).name + ",0\n";
      } else {
        const auto& solver = std::get<SolverStep>(schedule.steps[k]);
        out += "solver," + s.algorithms.at(solver.algorithm) + "," + format_double(solver.budget) + "\n";
      }
    }
  }
  return out;
}

std::vector<Split> generate_splits(const Scenario& s, int n_splits, SplitMode mode, double test_fraction,
                                   std::uint64_t seed) {
  if (n_splits < 1) throw std::invalid_argument("generate_splits: n_splits must be >= 1");
  const std::size_t n = s.num_instances();
  if (n == 0) throw std::invalid_argument("generate_splits: scenario has no instances");
  const CounterRng root(seed);
  std::vector<Split> out;
  for (int k = 0; k < n_splits; ++k) {
    const CounterRng split_stream = root.substream(static_cast<std::uint64_t>(k));
    Split split;
    split.id = k + 1;
    if (mode == SplitMode::bootstrap) {
      split.bootstrap = true;
      bool found = false;
      for (std::uint64_t attempt = 0; attempt < 100 && !found; ++attempt) {
        CounterRng rng = split_stream.substream(attempt);
        std::vector<bool> drawn(n, false);
        for (std::size_t d = 0; d < n; ++d) drawn[rng.below(n)] = true;
        split.train.clear();
        split.test.clear();
        for (std::size_t i = 0; i < n; ++i) (drawn[i] ? split.train : split.test).push_back(i);
        found = !split.test.empty();
      }
      if (!found) throw std::runtime_error("generate_splits: out-of-bag sample stayed empty after 100 attempts");
    } else {
      if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("generate_splits: test_fraction must lie in (0, 1)");
      }
      const auto test_size = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n) + 0.5));
      if (test_size == 0 || test_size >= n) {
        throw std::invalid_argument("generate_splits: holdout leaves an empty train or test set");
      }
      CounterRng rng = split_stream;
      std::vector<std::size_t> order = all_instances(s);
      rng.shuffle(std::span<std::size_t>(order));
      split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_size));
      split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(test_size), order.end());
      std::sort(split.test.begin(), split.test.end());
      std::sort(split.train.begin(), split.train.end());
    }
    out.push_back(std::move(split));
  }
  return out;
}

std::pair<Scenario, NameMap> obfuscate(const Scenario& s, std::uint64_t seed) {
  Scenario out = s;
  NameMap names;
  auto rename = [](std::vector<std::string>& ids, const char* prefix, CounterRng rng,
                   std::vector<std::pair<std::string, std::string>>& map) {
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<std::string> renamed(ids.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      std::string pseudonym = prefix + std::to_string(k + 1);
      map.emplace_back(pseudonym, ids[order[k]]);
      renamed[order[k]] = std::move(pseudonym);
    }
    ids = std::move(renamed);
  };
  const CounterRng root(seed);
  rename(out.algorithms, "algo_", root.substream(0), names.algorithms);
  rename(out.instances, "inst_", root.substream(1), names.instances);
  return {std::move(out), std::move(names)};
}

Scenario blind_runs(const Scenario& s, std::span<const std::size_t> instances) {
  Scenario out = s;
  for (std::size_t i : instances) {
    if (i >= s.num_instances()) throw std::out_of_range("blind_runs: unknown instance index");
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) out.runs[i * s.num_algorithms() + a] = RunRecord{0.0, RunStatus::ok};
  }
  return out;
}

Scenario deobfuscate(const Scenario& s, const NameMap& names) {
  Scenario out = s;
  auto restore = [](std::vector<std::string>& ids, const std::vector<std::pair<std::string, std::string>>& map) {
    std::map<std::string, std::string, std::less<>> lookup(map.begin(), map.end());
    for (auto& id : ids) {
      auto it = lookup.find(id);
      if (it == lookup.end()) throw InvalidInput("name map has no entry for '" + id + "'");
      id = it->second;
    }
  };
  restore(out.algorithms, names.algorithms);
  restore(out.instances, names.instances);
  return out;
}

std::string format_name_map(const NameMap& names) {
  std::string out = "kind,pseudonym,original\n";
  for (const auto& [p, o] : names.algorithms) out += "algorithm," + p + "," + o + "\n";
  for (const auto& [p, o] : names.instances) out += "instance," + p + "," + o + "\n";
  return out;
}

NameMap parse_name_map(const fs::path& path) {
  LineReader reader(read_file(path), path.string());
  static constexpr std::array<std::string_view, 3> kHeader = {"kind", "pseudonym", "original"};
  read_header(reader, kHeader);
  NameMap names;
  std::string_view line;
  while (reader.next(line)) {
    auto cells = split_fields(line);
    if (cells.size() != 3) reader.fail("expected 3 fields");
    if (cells[0] == "algorithm") {
      names.algorithms.emplace_back(cells[1], cells[2]);
    } else if (cells[0] == "instance") {
      names.instances.emplace_back(cells[1], cells[2]);
    } else {
      reader.fail("kind must be algorithm or instance");
    }
  }
  return names;
}

}  // namespace asbench
