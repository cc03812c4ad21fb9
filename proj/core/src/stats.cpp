#include "asbench/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace asbench::stats {

namespace {

// q_alpha(k) for k = 2..20: scipy.stats.studentized_range.ppf(1 - alpha, k, inf) / sqrt(2).
constexpr std::array<double, 19> kQ005 = {1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878,
                                          3.101730, 3.163684, 3.218654, 3.268004, 3.312739, 3.353618, 3.391230,
                                          3.426041, 3.458425, 3.488685, 3.517073, 3.543799};
constexpr std::array<double, 19> kQ010 = {1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884,
                                          2.854606, 2.919889, 2.977768, 3.029694, 3.076733, 3.119693, 3.159199,
                                          3.195743, 3.229723, 3.261461, 3.291224, 3.319233};

std::vector<double> averages(const std::vector<double>& ranks, std::size_t rows, std::size_t cols) {
  std::vector<double> avg(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) avg[c] += ranks[r * cols + c];
  }
  for (auto& a : avg) a /= static_cast<double>(rows);
  return avg;
}

}  // namespace

void ScoreMatrix::require_complete() const {
  if (values.size() != scenarios.size() * systems.size()) {
    throw std::invalid_argument("score matrix shape does not match its labels");
  }
  for (std::size_t r = 0; r < scenarios.size(); ++r) {
    for (std::size_t c = 0; c < systems.size(); ++c) {
      if (!at(r, c)) {
        throw std::invalid_argument("missing score for system '" + systems[c] + "' on scenario '" + scenarios[r] +
                                    "'");
      }
    }
  }
}

ScoreMatrix ScoreMatrix::without_systems(std::span<const std::string> excluded) const {
  ScoreMatrix out;
  out.scenarios = scenarios;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < systems.size(); ++c) {
    if (std::find(excluded.begin(), excluded.end(), systems[c]) == excluded.end()) {
      keep.push_back(c);
      out.systems.push_back(systems[c]);
    }
  }
  for (std::size_t r = 0; r < scenarios.size(); ++r) {
    for (std::size_t c : keep) out.values.push_back(at(r, c));
  }
  return out;
}

std::vector<double> rank_row(std::span<const double> scores, Direction direction) {
  const std::size_t k = scores.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto better = [&](std::size_t a, std::size_t b) {
    return direction == Direction::minimize ? scores[a] < scores[b] : scores[a] > scores[b];
  };
  std::stable_sort(order.begin(), order.end(), better);
  std::vector<double> ranks(k);
  std::size_t start = 0;
  while (start < k) {
    std::size_t end = start + 1;
    while (end < k && scores[order[end]] == scores[order[start]]) ++end;
    // positions start..end-1 hold ranks start+1..end
    const double shared = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t p = start; p < end; ++p) ranks[order[p]] = shared;
    start = end;
  }
  return ranks;
}

RankTable rank_table(const ScoreMatrix& scores, Direction direction) {
  scores.require_complete();
  RankTable table;
  table.scenarios = scores.scenarios;
  table.systems = scores.systems;
  const std::size_t k = scores.systems.size();
  std::vector<double> row(k);
  for (std::size_t r = 0; r < scores.scenarios.size(); ++r) {
    for (std::size_t c = 0; c < k; ++c) row[c] = *scores.at(r, c);
    const auto ranked = rank_row(row, direction);
    table.ranks.insert(table.ranks.end(), ranked.begin(), ranked.end());
  }
  table.average_ranks = averages(table.ranks, table.scenarios.size(), k);
  return table;
}

RankTable rank_table_from_ranks(std::vector<std::string> scenarios, std::vector<std::string> systems,
                                std::vector<double> ranks) {
  if (ranks.size() != scenarios.size() * systems.size()) {
    throw std::invalid_argument("rank matrix shape does not match its labels");
  }
  RankTable table{std::move(scenarios), std::move(systems), std::move(ranks), {}};
  table.average_ranks = averages(table.ranks, table.scenarios.size(), table.systems.size());
  return table;
}

FriedmanResult friedman_test(const RankTable& ranks) {
  const std::size_t k = ranks.systems.size();
  const std::size_t n = ranks.scenarios.size();
  if (k < 2 || n < 2) throw std::invalid_argument("friedman_test needs at least 2 systems and 2 scenarios");
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double sum_sq = 0.0;
  for (double r : ranks.average_ranks) sum_sq += r * r;
  FriedmanResult out;
  out.systems = k;
  out.scenarios = n;
  out.statistic = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  // Identical rows leave only round-off; clamp so the p-value stays in [0, 1].
  if (out.statistic < 1e-12) out.statistic = 0.0;
  out.p_value = out.statistic == 0.0 ? 1.0 : boost::math::gamma_q((kd - 1.0) / 2.0, out.statistic / 2.0);
  return out;
}

double nemenyi_q(std::size_t k, double alpha) {
  if (k < 2 || k > 20) throw std::invalid_argument("nemenyi_q: k must lie in [2, 20]");
  if (std::abs(alpha - 0.05) < 1e-12) return kQ005[k - 2];
  if (std::abs(alpha - 0.10) < 1e-12) return kQ010[k - 2];
  throw std::invalid_argument("nemenyi_q: alpha must be 0.05 or 0.10");
}

double nemenyi_cd(std::size_t k, std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("nemenyi_cd: need at least one scenario");
  const double kd = static_cast<double>(k);
  return nemenyi_q(k, alpha) * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n)));
}

RankAnalysis analyze_ranks(RankTable ranks, double alpha) {
  RankAnalysis out;
  out.friedman = friedman_test(ranks);
  out.alpha = alpha;
  const std::size_t k = ranks.systems.size();
  out.critical_distance = nemenyi_cd(k, ranks.scenarios.size(), alpha);
  out.pairwise_significant.assign(k, std::vector<bool>(k, false));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      out.pairwise_significant[a][b] =
          std::abs(ranks.average_ranks[a] - ranks.average_ranks[b]) > out.critical_distance;
    }
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks.average_ranks[a] < ranks.average_ranks[b];
  });
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i;
    while (j + 1 < k && ranks.average_ranks[order[j + 1]] - ranks.average_ranks[order[i]] <= out.critical_distance) {
      ++j;
    }
    if (j > i && j + 1 > last_end) {
      std::vector<std::string> clique;
      for (std::size_t p = i; p <= j; ++p) clique.push_back(ranks.systems[order[p]]);
      out.cliques.push_back(std::move(clique));
      last_end = j + 1;
    }
  }
  out.ranks = std::move(ranks);
  return out;
}

RankAnalysis analyze(const ScoreMatrix& scores, Direction direction, double alpha) {
  return analyze_ranks(rank_table(scores, direction), alpha);
}

EcdfAnalysis ecdf(std::span<const double> samples, double query) {
  if (samples.empty()) throw std::invalid_argument("ecdf: empty sample");
  EcdfAnalysis out;
  out.sorted_samples.assign(samples.begin(), samples.end());
  std::sort(out.sorted_samples.begin(), out.sorted_samples.end());
  out.query = query;
  const double n = static_cast<double>(out.sorted_samples.size());
  const auto at_or_below =
      std::upper_bound(out.sorted_samples.begin(), out.sorted_samples.end(), query) - out.sorted_samples.begin();
  out.quantile = static_cast<double>(at_or_below) / n;
  for (std::size_t i = 0; i < out.sorted_samples.size(); ++i) {
    if (i + 1 < out.sorted_samples.size() && out.sorted_samples[i + 1] == out.sorted_samples[i]) continue;
    out.curve.push_back({out.sorted_samples[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

VirtualBestSelector virtual_best_selector(const ScoreMatrix& scores, Direction direction) {
  scores.require_complete();
  if (scores.scenarios.empty() || scores.systems.empty()) throw std::invalid_argument("virtual_best_selector: empty");
  VirtualBestSelector out;
  double total = 0.0;
  for (std::size_t r = 0; r < scores.scenarios.size(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.systems.size(); ++c) {
      const double v = *scores.at(r, c);
      const double b = *scores.at(r, best);
      if (direction == Direction::minimize ? v < b : v > b) best = c;
    }
    out.per_scenario_best.push_back(*scores.at(r, best));
    out.best_system.push_back(scores.systems[best]);
    total += *scores.at(r, best);
  }
  out.mean = total / static_cast<double>(scores.scenarios.size());
  return out;
}

std::vector<double> column_means(const ScoreMatrix& scores) {
  scores.require_complete();
  std::vector<double> means(scores.systems.size(), 0.0);
  for (std::size_t r = 0; r < scores.scenarios.size(); ++r) {
    for (std::size_t c = 0; c < scores.systems.size(); ++c) means[c] += *scores.at(r, c);
  }
  for (auto& m : means) m /= static_cast<double>(scores.scenarios.size());
  return means;
}

}  // namespace asbench::stats
