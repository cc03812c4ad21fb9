#include <algorithm>
#include <numeric>

#include "asbench/stats.hpp"
#include "asbench/text.hpp"
#include "json.hpp"

namespace asbench::stats {

ScoreMatrix parse_score_matrix(std::string contents, const std::string& file_name) {
  LineReader reader(std::move(contents), file_name);
  std::string_view line;
  if (!reader.next(line)) reader.fail("missing header row");
  auto header = split_fields(line);
  if (header.size() < 2 || header.front() != "scenario") reader.fail("header must be scenario,<system>,...");
  ScoreMatrix m;
  m.systems.assign(header.begin() + 1, header.end());
  for (std::size_t a = 0; a < m.systems.size(); ++a) {
    if (m.systems[a].empty()) reader.fail("empty system name");
    for (std::size_t b = 0; b < a; ++b) {
      if (m.systems[a] == m.systems[b]) reader.fail("duplicate system '" + m.systems[a] + "'");
    }
  }
  while (reader.next(line)) {
    auto cells = split_fields(line);
    if (cells.size() != header.size()) {
      reader.fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
    }
    if (cells[0].empty()) reader.fail("empty scenario name");
    if (std::find(m.scenarios.begin(), m.scenarios.end(), cells[0]) != m.scenarios.end()) {
      reader.fail("duplicate scenario '" + cells[0] + "'");
    }
    m.scenarios.push_back(cells[0]);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c] == "NA") {
        m.values.emplace_back(std::nullopt);
        continue;
      }
      const auto v = parse_double(cells[c]);
      if (!v) reader.fail("'" + cells[c] + "' is not a number");
      m.values.emplace_back(*v);
    }
  }
  return m;
}

std::string format_score_matrix(const ScoreMatrix& m) {
  std::string out = "scenario";
  for (const auto& s : m.systems) out += "," + s;
  out += "\n";
  for (std::size_t r = 0; r < m.scenarios.size(); ++r) {
    out += m.scenarios[r];
    for (std::size_t c = 0; c < m.systems.size(); ++c) {
      const auto v = m.at(r, c);
      out += "," + (v ? format_double(*v) : std::string("NA"));
    }
    out += "\n";
  }
  return out;
}

std::string format_rank_table(const RankTable& t) {
  std::string out = "scenario";
  for (const auto& s : t.systems) out += "," + s;
  out += "\n";
  for (std::size_t r = 0; r < t.scenarios.size(); ++r) {
    out += t.scenarios[r];
    for (std::size_t c = 0; c < t.systems.size(); ++c) out += "," + format_double(t.rank(r, c));
    out += "\n";
  }
  out += "average";
  for (double a : t.average_ranks) out += "," + format_double(a);
  return out + "\n";
}

std::string format_significance(const RankAnalysis& a) {
  std::string out = "system_a,system_b,rank_difference,significant\n";
  const auto& names = a.ranks.systems;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      const double diff = a.ranks.average_ranks[i] - a.ranks.average_ranks[j];
      out += names[i] + "," + names[j] + "," + format_double(diff) + "," +
             (a.pairwise_significant[i][j] ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string format_cd_diagram_json(const RankAnalysis& a) {
  nlohmann::ordered_json doc;
  doc["alpha"] = a.alpha;
  doc["critical_distance"] = a.critical_distance;
  doc["friedman"] = {{"statistic", a.friedman.statistic},
                     {"p_value", a.friedman.p_value},
                     {"systems", a.friedman.systems},
                     {"scenarios", a.friedman.scenarios}};
  std::vector<std::size_t> order(a.ranks.systems.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return a.ranks.average_ranks[l] < a.ranks.average_ranks[r];
  });
  auto& systems = doc["systems"] = nlohmann::ordered_json::array();
  for (std::size_t i : order) {
    systems.push_back({{"name", a.ranks.systems[i]}, {"average_rank", a.ranks.average_ranks[i]}});
  }
  doc["cliques"] = a.cliques;
  return doc.dump(2) + "\n";
}

std::string format_ecdf(const EcdfAnalysis& e) {
  std::string out = "x,f\n";
  for (const auto& p : e.curve) out += format_double(p.x) + "," + format_double(p.f) + "\n";
  return out;
}

}  // namespace asbench::stats
