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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tnf/ingest.hpp"

namespace tnf {

enum class PropertyId {
  ActiveNodes,
  ActiveEdges,
  AvgDegree,
  ClusteringSum,
  BetweennessSum,
  ClosenessSum,
  Modularity,
  EdgeEmergence,
};

inline constexpr std::array<PropertyId, 8> kAllProperties = {
    PropertyId::ActiveNodes,    PropertyId::ActiveEdges,  PropertyId::AvgDegree,
    PropertyId::ClusteringSum,  PropertyId::BetweennessSum, PropertyId::ClosenessSum,
    PropertyId::Modularity,     PropertyId::EdgeEmergence,
};

// Column names used in CSV output: active_nodes, active_edges, ...
std::string_view property_name(PropertyId p) noexcept;
PropertyId parse_property(std::string_view name);

struct MetricSeries {
  PropertyId property = PropertyId::ActiveNodes;
  std::vector<double> values;
  std::int64_t resolution = 1;
};

// Compact adjacency view over the active nodes of one snapshot.
struct LocalGraph {
  std::vector<NodeId> ids;                   // local index -> global node id
  std::vector<std::vector<std::size_t>> adj;  // sorted local neighbor lists

  static LocalGraph from(const Snapshot& s);
  std::size_t size() const noexcept { return ids.size(); }
};

std::size_t active_nodes(const Snapshot& s);
std::size_t active_edges(const Snapshot& s);
double avg_degree(const Snapshot& s);
double clustering_sum(const Snapshot& s);
double betweenness_sum(const Snapshot& s);
double closeness_sum(const Snapshot& s);

struct CommunityResult {
  std::vector<NodeId> nodes;           // active nodes, ascending
  std::vector<std::size_t> community;  // community label per entry of nodes
  double modularity = 0.0;
};

// Deterministic Louvain: ascending sweep order, strict-improvement moves, ties
// in gain resolved toward the lowest community label.
CommunityResult louvain(const Snapshot& s);
double modularity(const Snapshot& s);

// Newman Q of an arbitrary labelling of the snapshot's active nodes.
double partition_modularity(const Snapshot& s, const std::vector<NodeId>& nodes,
                            const std::vector<std::size_t>& community);

double edge_emergence(const Snapshot& current, const Snapshot& next,
                      bool include_persistent = false);

struct MetricOptions {
  bool include_persistent_emergence = false;
  // Append a trailing 0 so the emergence series has one value per snapshot.
  bool pad_emergence = false;
};

double snapshot_property(const Snapshot& s, PropertyId p);

MetricSeries metric_series(const SnapshotSeries& series, PropertyId p,
                           const MetricOptions& options = {});

}  // namespace tnf
