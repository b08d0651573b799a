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

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "tnf/ingest.hpp"

namespace tnf {

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Inclusive step range.
struct StepInterval {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Duration (arrival - departure + 1) of the fastest time-respecting path from
// `from` to `to` inside the interval: one hop per snapshot, waiting is free.
// 0 for from == to, kUnreachable when no path exists.
std::size_t temporal_distance(const SnapshotSeries& series, NodeId from, NodeId to,
                              StepInterval interval);

// Fastest-path durations from `source` to every node, restricted to the
// subgraph induced by `alive` (all nodes when empty).
std::vector<std::size_t> temporal_distances_from(const SnapshotSeries& series, NodeId source,
                                                 StepInterval interval,
                                                 const std::vector<bool>& alive = {});

// Ordered-pair mean of 1/d over node_set, paths confined to node_set. When
// normalize_count > 0 it replaces |node_set| in the N(N-1) denominator.
double temporal_efficiency(const SnapshotSeries& series, StepInterval interval,
                           const std::vector<NodeId>& node_set, std::size_t normalize_count = 0);

enum class AttackStrategy { Random, AvgDeg, PredDeg };

AttackStrategy parse_strategy(std::string_view name);
std::string_view strategy_name(AttackStrategy s) noexcept;

struct RankOptions {
  std::size_t rank_step = 0;      // t*: the step the ranking targets
  std::size_t history_first = 0;  // avg_deg averages degrees over [history_first, t*-1]
  std::size_t window = 64;        // pred_deg trains on [t*-1-window, t*-1]
  std::uint64_t seed = 0;
};

// Per-step degree of one node.
std::vector<double> degree_series(const SnapshotSeries& series, NodeId node,
                                  const std::vector<bool>& alive = {});

// Most attractive target first. Ties resolve toward the lower node index.
std::vector<NodeId> rank_nodes(const SnapshotSeries& series, AttackStrategy strategy,
                               const RankOptions& options, const std::vector<bool>& alive = {});

struct AttackOptions {
  AttackStrategy strategy = AttackStrategy::PredDeg;
  std::vector<double> fractions;
  StepInterval interval;
  std::uint64_t seed = 0;
  std::size_t window = 64;
  bool fixed_n = false;  // keep the original N in the damaged efficiency
  bool rerank = false;   // recompute the ranking after every removal
};

struct AttackPoint {
  double fraction = 0.0;
  double robustness = 1.0;
  std::size_t removed = 0;
};

struct AttackCurve {
  AttackStrategy strategy = AttackStrategy::Random;
  std::uint64_t seed = 0;
  double baseline_efficiency = 0.0;
  std::vector<AttackPoint> points;  // starts at P = 0
  bool truncated = false;
  std::string notice;
};

// Ranking is taken at t* = interval.first with the pre-attack prefix as
// history, then the top ceil(P*N) nodes are removed for each P.
AttackCurve run_attack(const SnapshotSeries& series, const AttackOptions& options);

// Pointwise mean of random-strategy curves over seeds seed, seed+1, ...
AttackCurve mean_random_curve(const SnapshotSeries& series, AttackOptions options,
                              std::size_t seed_count);

std::vector<double> parse_fractions(std::string_view spec);

}  // namespace tnf
