#include <array>
#include <map>

#include "asbench/errors.hpp"
#include "asbench/evaluation.hpp"
#include "asbench/text.hpp"
#include "json.hpp"

namespace asbench {

namespace {

std::string row(const ScoreReport& r, const std::string& metric, const std::string& value) {
  return r.system + "," + r.scenario + "," + std::to_string(r.split_id) + "," + metric + "," + value + "\n";
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_report_csv(std::span<const ScoreReport> reports) {
  std::string out = "system,scenario,split,metric,value\n";
  for (const auto& r : reports) {
    for (const auto& m : r.metrics) {
      const std::string name(to_string(m.metric));
      out += row(r, name, format_double(m.value));
      out += row(r, "gap_" + name, m.gap ? format_double(*m.gap) : "NA");
      out += row(r, "sbs_" + name, format_double(m.sbs_value));
      out += row(r, "vbs_" + name, format_double(m.vbs_value));
    }
    if (r.out_of_competition) out += row(r, "out_of_competition", "1");
  }
  return out;
}

std::string format_report_json(std::span<const ScoreReport> reports, CompetitionMode mode) {
  nlohmann::ordered_json doc;
  doc["format"] = "asbench-score-report";
  doc["version"] = 1;
  doc["mode"] = std::string(to_string(mode));
  auto& list = doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json item;
    item["system"] = r.system;
    item["scenario"] = r.scenario;
    item["split"] = r.split_id;
    item["sbs_algorithm"] = r.sbs_algorithm;
    item["test_instances"] = r.num_test_instances;
    item["out_of_competition"] = r.out_of_competition;
    for (const auto& m : r.metrics) {
      nlohmann::ordered_json metric;
      metric["value"] = m.value;
      metric["sbs"] = m.sbs_value;
      metric["vbs"] = m.vbs_value;
      metric["cost"] = m.cost;
      metric["sbs_cost"] = m.sbs_cost;
      metric["vbs_cost"] = m.vbs_cost;
      metric["gap"] = optional_number(m.gap);
      item["metrics"][std::string(to_string(m.metric))] = metric;
    }
    list.push_back(item);
  }
  // Per-system aggregate, systems in first-seen order.
  std::vector<std::string> systems;
  std::map<std::string, std::vector<ScoreReport>> by_system;
  for (const auto& r : reports) {
    if (!by_system.count(r.system)) systems.push_back(r.system);
    by_system[r.system].push_back(r);
  }
  auto& summary = doc["aggregate"] = nlohmann::ordered_json::array();
  for (const auto& name : systems) {
    nlohmann::ordered_json item;
    item["system"] = name;
    try {
      const auto agg = aggregate(by_system[name], mode);
      item["score"] = agg.value;
      item["scenarios"] = agg.scenarios;
      item["excluded_gaps"] = agg.excluded;
    } catch (const std::invalid_argument&) {
      item["score"] = nullptr;
    }
    summary.push_back(item);
  }
  return doc.dump(2) + "\n";
}

std::vector<ReportRow> parse_report_csv(std::string contents, const std::string& file_name) {
  LineReader reader(std::move(contents), file_name);
  std::string_view line;
  if (!reader.next(line)) reader.fail("missing header row");
  static const std::vector<std::string> kHeader = {"system", "scenario", "split", "metric", "value"};
  if (split_fields(line) != kHeader) reader.fail("header must be system,scenario,split,metric,value");
  std::vector<ReportRow> rows;
  while (reader.next(line)) {
    auto cells = split_fields(line);
    if (cells.size() != 5) reader.fail("expected 5 fields, got " + std::to_string(cells.size()));
    ReportRow r;
    r.system = cells[0];
    r.scenario = cells[1];
    const auto split = parse_integer(cells[2]);
    if (!split) reader.fail("bad split id '" + cells[2] + "'");
    r.split = static_cast<int>(*split);
    r.metric = cells[3];
    if (cells[4] != "NA") {
      r.value = parse_double(cells[4]);
      if (!r.value) reader.fail("'" + cells[4] + "' is not a number");
    }
    if (r.system.empty() || r.scenario.empty() || r.metric.empty()) reader.fail("empty field");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace asbench
