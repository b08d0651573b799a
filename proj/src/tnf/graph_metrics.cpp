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

#include "tnf/graph_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <unordered_set>

#include "tnf/error.hpp"
#include "tnf/parallel.hpp"

namespace tnf {

std::string_view property_name(PropertyId p) noexcept {
  switch (p) {
    case PropertyId::ActiveNodes: return "active_nodes";
    case PropertyId::ActiveEdges: return "active_edges";
    case PropertyId::AvgDegree: return "avg_degree";
    case PropertyId::ClusteringSum: return "clustering_sum";
    case PropertyId::BetweennessSum: return "betweenness_sum";
    case PropertyId::ClosenessSum: return "closeness_sum";
    case PropertyId::Modularity: return "modularity";
    case PropertyId::EdgeEmergence: return "edge_emergence";
  }
  return "unknown";
}

PropertyId parse_property(std::string_view name) {
  for (auto p : kAllProperties) {
    if (property_name(p) == name) return p;
  }
  fail(ErrorKind::Config, "unknown property '" + std::string(name) + "'");
}

LocalGraph LocalGraph::from(const Snapshot& s) {
  LocalGraph g;
  g.ids.reserve(2 * s.edges.size());
  for (auto [a, b] : s.edges) {
    g.ids.push_back(a);
    g.ids.push_back(b);
  }
  std::sort(g.ids.begin(), g.ids.end());
  g.ids.erase(std::unique(g.ids.begin(), g.ids.end()), g.ids.end());
  g.adj.resize(g.ids.size());
  auto local = [&](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(g.ids.begin(), g.ids.end(), id) - g.ids.begin());
  };
  for (auto [a, b] : s.edges) {
    auto la = local(a), lb = local(b);
    g.adj[la].push_back(lb);
    g.adj[lb].push_back(la);
  }
  for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

std::size_t active_nodes(const Snapshot& s) {
  std::vector<NodeId> ends;
  ends.reserve(2 * s.edges.size());
  for (auto [a, b] : s.edges) {
    ends.push_back(a);
    ends.push_back(b);
  }
  std::sort(ends.begin(), ends.end());
  return static_cast<std::size_t>(std::unique(ends.begin(), ends.end()) - ends.begin());
}

std::size_t active_edges(const Snapshot& s) { return s.edges.size(); }

double avg_degree(const Snapshot& s) {
  auto n = active_nodes(s);
  if (n == 0) return 0.0;
  return 2.0 * static_cast<double>(s.edges.size()) / static_cast<double>(n);
}

double clustering_sum(const Snapshot& s) {
  auto g = LocalGraph::from(s);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& nbrs = g.adj[i];
    const std::size_t k = nbrs.size();
    if (k < 2) continue;
    std::size_t links = 0;
    for (std::size_t x = 0; x < k; ++x) {
      const auto& nx = g.adj[nbrs[x]];
      for (std::size_t y = x + 1; y < k; ++y) {
        if (std::binary_search(nx.begin(), nx.end(), nbrs[y])) ++links;
      }
    }
    total += 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return total;
}

double betweenness_sum(const Snapshot& s) {
  // Brandes accumulation; every unordered pair is seen from both endpoints.
  auto g = LocalGraph::from(s);
  const std::size_t n = g.size();
  std::vector<double> centrality(n, 0.0), sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    order.clear();
    sigma[src] = 1.0;
    dist[src] = 0;
    std::queue<std::size_t> queue;
    queue.push(src);
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop();
      order.push_back(v);
      for (auto w : g.adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != src) centrality[w] += delta[w];
    }
  }
  double total = 0.0;
  for (double c : centrality) total += c;
  return total / 2.0;
}

double closeness_sum(const Snapshot& s) {
  auto g = LocalGraph::from(s);
  const std::size_t n = g.size();
  std::vector<long> dist(n);
  double total = 0.0;
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    std::queue<std::size_t> queue;
    queue.push(src);
    long reached = 0, sum = 0;
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop();
      for (auto w : g.adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          ++reached;
          sum += dist[w];
          queue.push(w);
        }
      }
    }
    if (sum > 0) total += static_cast<double>(reached) / static_cast<double>(sum);
  }
  return total;
}

namespace {

// Symmetric weighted graph; self-loop weight is the diagonal matrix entry.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_loop;

  std::size_t size() const { return adj.size(); }
  double degree(std::size_t i) const {
    double k = self_loop[i];
    for (auto& [j, w] : adj[i]) k += w;
    return k;
  }
};

// One Louvain level. Returns true if any node changed community; labels are
// renumbered to 0..c-1 in order of first appearance.
bool local_moves(const WeightedGraph& g, double m2, std::vector<std::size_t>& comm) {
  const std::size_t n = g.size();
  std::vector<double> k(n), tot(n, 0.0);
  comm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    comm[i] = i;
    k[i] = g.degree(i);
    tot[i] = k[i];
  }
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  constexpr double kEps = 1e-12;
  for (int sweep = 0; sweep < 1000; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t own = comm[i];
      touched.clear();
      for (auto& [j, w] : g.adj[i]) {
        if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[own] -= k[i];
      auto gain = [&](std::size_t c) { return link[c] - tot[c] * k[i] / m2; };
      std::size_t best = own;
      double best_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      for (auto c : touched) {
        if (c == own) continue;
        double gc = gain(c);
        if (gc > best_gain + kEps) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += k[i];
      if (best != own) {
        comm[i] = best;
        moved = true;
        any_move = true;
      }
      for (auto c : touched) link[c] = 0.0;
      link[own] = 0.0;
    }
    if (!moved) break;
  }
  std::vector<std::size_t> relabel(n, std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (auto& c : comm) {
    if (relabel[c] == std::numeric_limits<std::size_t>::max()) relabel[c] = next++;
    c = relabel[c];
  }
  return any_move;
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& comm,
                        std::size_t count) {
  WeightedGraph out;
  out.adj.resize(count);
  out.self_loop.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> acc(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.self_loop[comm[i]] += g.self_loop[i];
    for (auto& [j, w] : g.adj[i]) {
      if (comm[i] == comm[j]) {
        out.self_loop[comm[i]] += w;
      } else {
        acc[comm[i]][comm[j]] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    for (auto& [d, w] : acc[c]) out.adj[c].emplace_back(d, w);
  }
  return out;
}

}  // namespace

double partition_modularity(const Snapshot& s, const std::vector<NodeId>& nodes,
                            const std::vector<std::size_t>& community) {
  if (s.edges.empty()) return 0.0;
  if (nodes.size() != community.size()) fail(ErrorKind::Argument, "partition size mismatch");
  auto label_of = [&](NodeId id) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id) fail(ErrorKind::Argument, "node missing from partition");
    return community[static_cast<std::size_t>(it - nodes.begin())];
  };
  const double m = static_cast<double>(s.edges.size());
  std::map<std::size_t, double> internal, degree;
  for (auto [a, b] : s.edges) {
    auto ca = label_of(a), cb = label_of(b);
    if (ca == cb) internal[ca] += 1.0;
    degree[ca] += 1.0;
    degree[cb] += 1.0;
  }
  double q = 0.0;
  for (auto& [c, d] : degree) {
    double e = internal.count(c) ? internal[c] : 0.0;
    q += e / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

CommunityResult louvain(const Snapshot& s) {
  CommunityResult result;
  auto local = LocalGraph::from(s);
  result.nodes = local.ids;
  const std::size_t n = local.size();
  result.community.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.community[i] = i;
  if (s.edges.empty()) return result;

  WeightedGraph g;
  g.adj.resize(n);
  g.self_loop.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : local.adj[i]) g.adj[i].emplace_back(j, 1.0);
  }
  const double m2 = 2.0 * static_cast<double>(s.edges.size());

  std::vector<std::size_t> membership(n);
  for (std::size_t i = 0; i < n; ++i) membership[i] = i;
  for (;;) {
    std::vector<std::size_t> comm;
    bool moved = local_moves(g, m2, comm);
    std::size_t count = 0;
    for (auto c : comm) count = std::max(count, c + 1);
    for (auto& m : membership) m = comm[m];
    if (!moved || count == g.size()) break;
    g = aggregate(g, comm, count);
  }
  result.community = membership;
  result.modularity = partition_modularity(s, result.nodes, result.community);
  return result;
}

double modularity(const Snapshot& s) { return louvain(s).modularity; }

double edge_emergence(const Snapshot& current, const Snapshot& next, bool include_persistent) {
  if (current.edges.empty()) return 0.0;
  std::unordered_set<NodeId> ends;
  for (auto [a, b] : current.edges) {
    ends.insert(a);
    ends.insert(b);
  }
  std::size_t adjacent = 0;
  for (auto [a, b] : next.edges) {
    if (!ends.count(a) && !ends.count(b)) continue;
    if (!include_persistent && current.has_edge(a, b)) continue;
    ++adjacent;
  }
  return static_cast<double>(adjacent) / static_cast<double>(current.edges.size());
}

double snapshot_property(const Snapshot& s, PropertyId p) {
  switch (p) {
    case PropertyId::ActiveNodes: return static_cast<double>(active_nodes(s));
    case PropertyId::ActiveEdges: return static_cast<double>(active_edges(s));
    case PropertyId::AvgDegree: return avg_degree(s);
    case PropertyId::ClusteringSum: return clustering_sum(s);
    case PropertyId::BetweennessSum: return betweenness_sum(s);
    case PropertyId::ClosenessSum: return closeness_sum(s);
    case PropertyId::Modularity: return modularity(s);
    case PropertyId::EdgeEmergence: break;
  }
  fail(ErrorKind::Argument, "edge emergence needs two consecutive snapshots");
}

MetricSeries metric_series(const SnapshotSeries& series, PropertyId p, const MetricOptions& options) {
  if (series.empty()) fail(ErrorKind::Data, "snapshot series is empty");
  MetricSeries out;
  out.property = p;
  out.resolution = series.resolution();
  const std::size_t T = series.size();
  if (p == PropertyId::EdgeEmergence) {
    out.values.assign(T - 1, 0.0);
    parallel_for(T - 1, [&](std::size_t t) {
      out.values[t] = edge_emergence(series[t], series[t + 1], options.include_persistent_emergence);
    });
    if (options.pad_emergence) out.values.push_back(0.0);
  } else {
    out.values.assign(T, 0.0);
    parallel_for(T, [&](std::size_t t) { out.values[t] = snapshot_property(series[t], p); });
  }
  return out;
}

}  // namespace tnf
