// Copyright 2026 The tnforecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tnf/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "tnf/arima.hpp"
#include "tnf/error.hpp"
#include "tnf/parallel.hpp"

namespace tnf {

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void reset_to(std::size_t i) {
    std::fill(words_.begin(), words_.end(), 0);
    set(i);
  }
  bool operator==(const Bitset&) const = default;
  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
};

void check_interval(const SnapshotSeries& series, StepInterval interval) {
  if (interval.first > interval.last || interval.last >= series.size()) {
    fail(ErrorKind::Argument, "interval [" + std::to_string(interval.first) + ", " +
                                  std::to_string(interval.last) + "] is outside the series of length " +
                                  std::to_string(series.size()));
  }
}

// Edge lists of the interval's snapshots with dead endpoints removed.
std::vector<std::vector<Edge>> live_edges(const SnapshotSeries& series, StepInterval interval,
                                          const std::vector<bool>& alive) {
  std::vector<std::vector<Edge>> out(interval.last - interval.first + 1);
  for (std::size_t t = interval.first; t <= interval.last; ++t) {
    auto& dst = out[t - interval.first];
    for (auto e : series[t].edges) {
      if (alive.empty() || (alive[e.first] && alive[e.second])) dst.push_back(e);
    }
  }
  return out;
}

std::vector<std::size_t> distances_from(const std::vector<std::vector<Edge>>& edges,
                                        std::size_t node_count, NodeId source) {
  const std::size_t steps = edges.size();
  std::vector<std::size_t> best(node_count, kUnreachable);
  best[source] = 0;
  // reached[tau]: nodes reachable by step tau when departing after the
  // departure currently being processed. Departures are scanned latest first;
  // once a departure's reachable set matches the later one it can only yield
  // longer durations, so the scan stops.
  Bitset start(node_count);
  start.set(source);
  std::vector<Bitset> reached(steps, start);
  Bitset cur(node_count), next(node_count);
  for (std::size_t s = steps; s-- > 0;) {
    cur.reset_to(source);
    for (std::size_t tau = s; tau < steps; ++tau) {
      next = cur;
      for (auto [a, b] : edges[tau]) {
        if (cur.test(a)) next.set(b);
        if (cur.test(b)) next.set(a);
      }
      const auto& nw = next.words();
      const auto& cw = cur.words();
      for (std::size_t w = 0; w < nw.size(); ++w) {
        std::uint64_t fresh = nw[w] & ~cw[w];
        while (fresh) {
          const auto bit = static_cast<std::size_t>(__builtin_ctzll(fresh));
          fresh &= fresh - 1;
          const std::size_t node = w * 64 + bit;
          best[node] = std::min(best[node], tau - s + 1);
        }
      }
      if (next == reached[tau]) break;
      reached[tau] = next;
      std::swap(cur, next);
    }
  }
  return best;
}

}  // namespace

std::vector<std::size_t> temporal_distances_from(const SnapshotSeries& series, NodeId source,
                                                 StepInterval interval,
                                                 const std::vector<bool>& alive) {
  check_interval(series, interval);
  if (source >= series.node_count()) fail(ErrorKind::Argument, "source node out of range");
  return distances_from(live_edges(series, interval, alive), series.node_count(), source);
}

std::size_t temporal_distance(const SnapshotSeries& series, NodeId from, NodeId to,
                              StepInterval interval) {
  if (to >= series.node_count()) fail(ErrorKind::Argument, "target node out of range");
  return temporal_distances_from(series, from, interval)[to];
}

double temporal_efficiency(const SnapshotSeries& series, StepInterval interval,
                           const std::vector<NodeId>& node_set, std::size_t normalize_count) {
  check_interval(series, interval);
  const std::size_t n = node_set.size();
  if (n < 2) fail(ErrorKind::Argument, "temporal efficiency needs at least two nodes");
  std::vector<bool> alive(series.node_count(), false);
  for (auto v : node_set) {
    if (v >= series.node_count()) fail(ErrorKind::Argument, "node out of range");
    alive[v] = true;
  }
  const auto edges = live_edges(series, interval, alive);
  std::vector<double> partial(n, 0.0);
  parallel_for(n, [&](std::size_t idx) {
    auto dist = distances_from(edges, series.node_count(), node_set[idx]);
    double s = 0.0;
    for (auto j : node_set) {
      if (j == node_set[idx] || dist[j] == kUnreachable) continue;
      s += 1.0 / static_cast<double>(dist[j]);
    }
    partial[idx] = s;
  });
  const double total = std::accumulate(partial.begin(), partial.end(), 0.0);
  const double N = static_cast<double>(normalize_count > 0 ? normalize_count : n);
  return total / (N * (N - 1.0));
}

AttackStrategy parse_strategy(std::string_view name) {
  if (name == "random") return AttackStrategy::Random;
  if (name == "avg_deg") return AttackStrategy::AvgDeg;
  if (name == "pred_deg") return AttackStrategy::PredDeg;
  fail(ErrorKind::Config, "unknown attack strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(AttackStrategy s) noexcept {
  switch (s) {
    case AttackStrategy::Random: return "random";
    case AttackStrategy::AvgDeg: return "avg_deg";
    case AttackStrategy::PredDeg: return "pred_deg";
  }
  return "unknown";
}

std::vector<double> degree_series(const SnapshotSeries& series, NodeId node,
                                  const std::vector<bool>& alive) {
  std::vector<double> deg(series.size(), 0.0);
  for (std::size_t t = 0; t < series.size(); ++t) {
    for (auto [a, b] : series[t].edges) {
      if (a != node && b != node) continue;
      if (!alive.empty() && !(alive[a] && alive[b])) continue;
      deg[t] += 1.0;
    }
  }
  return deg;
}

namespace {

std::vector<std::vector<double>> all_degree_series(const SnapshotSeries& series,
                                                   const std::vector<bool>& alive) {
  std::vector<std::vector<double>> deg(series.node_count(), std::vector<double>(series.size(), 0.0));
  for (std::size_t t = 0; t < series.size(); ++t) {
    for (auto [a, b] : series[t].edges) {
      if (!alive.empty() && !(alive[a] && alive[b])) continue;
      deg[a][t] += 1.0;
      deg[b][t] += 1.0;
    }
  }
  return deg;
}

}  // namespace

std::vector<NodeId> rank_nodes(const SnapshotSeries& series, AttackStrategy strategy,
                               const RankOptions& options, const std::vector<bool>& alive) {
  const std::size_t n = series.node_count();
  std::vector<NodeId> candidates;
  for (std::size_t v = 0; v < n; ++v) {
    if (alive.empty() || alive[v]) candidates.push_back(static_cast<NodeId>(v));
  }
  if (strategy == AttackStrategy::Random) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    return candidates;
  }
  if (options.rank_step == 0 || options.rank_step > series.size())
    fail(ErrorKind::Argument, "rank step must lie in [1, series length]");

  auto deg = all_degree_series(series, alive);
  // Sort key: (dormant, -score, id); dormant nodes go last.
  std::vector<double> score(n, 0.0);
  std::vector<char> dormant(n, 0);
  if (strategy == AttackStrategy::AvgDeg) {
    if (options.history_first >= options.rank_step)
      fail(ErrorKind::Argument, "avg_deg history is empty");
    const auto len = static_cast<double>(options.rank_step - options.history_first);
    for (auto v : candidates) {
      double s = 0.0;
      for (std::size_t t = options.history_first; t < options.rank_step; ++t) s += deg[v][t];
      score[v] = s / len;
    }
  } else {
    if (options.rank_step < options.window + 1)
      fail(ErrorKind::Argument, "pred_deg needs rank step > window");
    parallel_for(candidates.size(), [&](std::size_t i) {
      const NodeId v = candidates[i];
      std::span<const double> train(deg[v].data() + (options.rank_step - 1 - options.window),
                                    options.window + 1);
      if (std::all_of(train.begin(), train.end(), [](double x) { return x == 0.0; })) {
        dormant[v] = 1;
        score[v] = 0.0;
        return;
      }
      auto sel = select_order(train);
      score[v] = forecast_one(sel.model, train);
    });
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
    if (dormant[a] != dormant[b]) return dormant[a] < dormant[b];
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  return candidates;
}

AttackCurve run_attack(const SnapshotSeries& series, const AttackOptions& options) {
  check_interval(series, options.interval);
  const std::size_t n = series.node_count();
  if (n < 2) fail(ErrorKind::Data, "attack needs at least two nodes");
  std::vector<double> fractions = options.fractions;
  for (double f : fractions) {
    if (!(f >= 0.0 && f < 1.0)) fail(ErrorKind::Argument, "removal fractions must lie in [0, 1)");
  }
  fractions.push_back(0.0);
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());

  AttackCurve curve;
  curve.strategy = options.strategy;
  curve.seed = options.seed;
  std::vector<NodeId> everyone(n);
  std::iota(everyone.begin(), everyone.end(), 0);
  curve.baseline_efficiency = temporal_efficiency(series, options.interval, everyone);
  if (!(curve.baseline_efficiency > 0.0))
    fail(ErrorKind::Data, "baseline temporal efficiency is zero; robustness is undefined");

  RankOptions rank;
  rank.rank_step = options.interval.first;
  rank.history_first = 0;
  rank.window = options.window;
  rank.seed = options.seed;

  // Removal order: one static ranking, or greedy re-ranking on the damaged network.
  std::size_t max_remove = 0;
  for (double f : fractions) max_remove = std::max(max_remove, static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9)));
  std::vector<NodeId> order;
  if (!options.rerank || options.strategy == AttackStrategy::Random) {
    order = rank_nodes(series, options.strategy, rank);
  } else {
    std::vector<bool> alive(n, true);
    while (order.size() < std::min(max_remove, n)) {
      auto ranked = rank_nodes(series, options.strategy, rank, alive);
      order.push_back(ranked.front());
      alive[ranked.front()] = false;
    }
  }

  for (double f : fractions) {
    const auto k = static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9));
    if (n - k < 2) {
      curve.truncated = true;
      curve.notice = "removing " + std::to_string(k) + " of " + std::to_string(n) +
                     " nodes leaves fewer than two; curve truncated at P=" + std::to_string(f);
      break;
    }
    AttackPoint pt;
    pt.fraction = f;
    pt.removed = k;
    if (k == 0) {
      pt.robustness = 1.0;
    } else {
      std::vector<bool> removed(n, false);
      for (std::size_t i = 0; i < k; ++i) removed[order[i]] = true;
      std::vector<NodeId> remaining;
      for (std::size_t v = 0; v < n; ++v)
        if (!removed[v]) remaining.push_back(static_cast<NodeId>(v));
      const double e = temporal_efficiency(series, options.interval, remaining, options.fixed_n ? n : 0);
      pt.robustness = e / curve.baseline_efficiency;
    }
    curve.points.push_back(pt);
  }
  return curve;
}

AttackCurve mean_random_curve(const SnapshotSeries& series, AttackOptions options,
                              std::size_t seed_count) {
  if (seed_count == 0) fail(ErrorKind::Argument, "need at least one seed");
  options.strategy = AttackStrategy::Random;
  const std::uint64_t base = options.seed;
  AttackCurve mean;
  for (std::size_t i = 0; i < seed_count; ++i) {
    options.seed = base + i;
    auto c = run_attack(series, options);
    if (i == 0) {
      mean = c;
      continue;
    }
    const std::size_t len = std::min(mean.points.size(), c.points.size());
    mean.points.resize(len);
    for (std::size_t k = 0; k < len; ++k) mean.points[k].robustness += c.points[k].robustness;
  }
  for (auto& p : mean.points) p.robustness /= static_cast<double>(seed_count);
  mean.seed = base;
  return mean;
}

std::vector<double> parse_fractions(std::string_view spec) {
  auto to_double = [&](std::string_view s) {
    try {
      std::size_t used = 0;
      std::string str(s);
      double v = std::stod(str, &used);
      if (used != str.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      fail(ErrorKind::Config, "bad fraction list '" + std::string(spec) + "'");
    }
  };
  std::vector<double> out;
  if (spec.find(':') != std::string_view::npos) {
    auto a = spec.find(':');
    auto b = spec.find(':', a + 1);
    if (b == std::string_view::npos) fail(ErrorKind::Config, "fraction range must be start:stop:step");
    const double start = to_double(spec.substr(0, a));
    const double stop = to_double(spec.substr(a + 1, b - a - 1));
    const double step = to_double(spec.substr(b + 1));
    if (!(step > 0.0)) fail(ErrorKind::Config, "fraction step must be positive");
    for (std::size_t i = 0;; ++i) {
      const double v = start + static_cast<double>(i) * step;
      if (v > stop + 1e-9) break;
      out.push_back(std::round(v * 1e9) / 1e9);
    }
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      auto comma = spec.find(',', pos);
      if (comma == std::string_view::npos) comma = spec.size();
      if (comma > pos) out.push_back(to_double(spec.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  return out;
}

}  // namespace tnf
