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

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tnf/graph_metrics.hpp"

using namespace tnf;

namespace {

Snapshot snap(std::vector<Edge> edges) {
  Snapshot s;
  for (auto& e : edges) e = make_edge(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  s.edges = std::move(edges);
  return s;
}

const Snapshot kTriangle = snap({{0, 1}, {1, 2}, {0, 2}});
const Snapshot kPath = snap({{0, 1}, {1, 2}});
const Snapshot kStar = snap({{0, 1}, {0, 2}, {0, 3}});
const Snapshot kEmpty;

Snapshot relabel(const Snapshot& s, const std::vector<NodeId>& perm) {
  std::vector<Edge> e;
  for (auto [a, b] : s.edges) e.emplace_back(perm[a], perm[b]);
  return snap(e);
}

}  // namespace

TEST_CASE("counts and degree") {
  CHECK(active_nodes(kTriangle) == 3);
  CHECK(active_nodes(kEmpty) == 0);
  CHECK(active_nodes(snap({{0, 1}, {2, 3}})) == 4);
  CHECK(active_edges(kTriangle) == 3);
  CHECK(active_edges(snap({{0, 1}, {1, 0}})) == 1);
  CHECK(avg_degree(kTriangle) == doctest::Approx(2.0));
  CHECK(avg_degree(kPath) == doctest::Approx(4.0 / 3.0));
  CHECK(avg_degree(kEmpty) == 0.0);
}

TEST_CASE("clustering") {
  CHECK(clustering_sum(kTriangle) == doctest::Approx(3.0));
  CHECK(clustering_sum(kStar) == 0.0);
  // 4-cycle with one chord: nodes 0 and 2 have c = 1, nodes 1 and 3 have c = 2/3
  const auto chord = snap({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}});
  CHECK(clustering_sum(chord) == doctest::Approx(oracle::clustering_sum(oracle::adjacency(chord, 4))));
  CHECK(clustering_sum(chord) == doctest::Approx(2.0 + 4.0 / 3.0));
}

TEST_CASE("betweenness") {
  CHECK(betweenness_sum(kPath) == doctest::Approx(1.0));
  CHECK(betweenness_sum(kStar) == doctest::Approx(3.0));
  CHECK(betweenness_sum(snap({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})) == doctest::Approx(0.0));
}

TEST_CASE("closeness") {
  CHECK(closeness_sum(kTriangle) == doctest::Approx(3.0));
  CHECK(closeness_sum(kPath) == doctest::Approx(7.0 / 3.0));
  CHECK(closeness_sum(kEmpty) == 0.0);
}

TEST_CASE("centralities agree with brute force on random graphs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const double p = 0.1 + 0.6 * std::uniform_real_distribution<double>()(rng);
    const auto s = oracle::random_snapshot(n, p, rng);
    const auto a = oracle::adjacency(s, n);
    const auto b = oracle::betweenness(a);
    CHECK(betweenness_sum(s) == doctest::Approx(std::accumulate(b.begin(), b.end(), 0.0)).epsilon(1e-12));
    CHECK(closeness_sum(s) == doctest::Approx(oracle::closeness_sum(a)).epsilon(1e-12));
    CHECK(clustering_sum(s) == doctest::Approx(oracle::clustering_sum(a)).epsilon(1e-12));
    CHECK(clustering_sum(s) <= static_cast<double>(active_nodes(s)) + 1e-12);
    CHECK(avg_degree(s) * static_cast<double>(active_nodes(s)) == doctest::Approx(2.0 * static_cast<double>(active_edges(s))));
  }
}

TEST_CASE("centralities are invariant under relabelling") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10;
    const auto s = oracle::random_snapshot(n, 0.3, rng);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto r = relabel(s, perm);
    CHECK(betweenness_sum(r) == doctest::Approx(betweenness_sum(s)));
    CHECK(closeness_sum(r) == doctest::Approx(closeness_sum(s)));
  }
}

TEST_CASE("modularity examples") {
  CHECK(modularity(kTriangle) == doctest::Approx(0.0));
  CHECK(modularity(snap({{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})) == doctest::Approx(0.5));
  CHECK(modularity(kEmpty) == 0.0);
}

TEST_CASE("louvain Q equals direct recomputation and is near the optimum") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const auto s = oracle::random_snapshot(n, 0.45, rng);
    const auto res = louvain(s);
    const auto a = oracle::adjacency(s, n);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = 1000 + i;
    for (std::size_t i = 0; i < res.nodes.size(); ++i) labels[res.nodes[i]] = res.community[i];
    CHECK(res.modularity == doctest::Approx(oracle::modularity(a, labels)).epsilon(1e-12));
    CHECK(res.modularity == doctest::Approx(partition_modularity(s, res.nodes, res.community)).epsilon(1e-12));
    CHECK(res.modularity >= -0.5);
    CHECK(res.modularity <= 1.0);
    CHECK(res.modularity >= oracle::best_modularity(a) - 0.05);
  }
}

TEST_CASE("louvain is deterministic") {
  std::mt19937_64 rng(5);
  const auto s = oracle::random_snapshot(30, 0.15, rng);
  const auto a = louvain(s), b = louvain(s);
  CHECK(a.community == b.community);
  CHECK(a.modularity == b.modularity);
}

TEST_CASE("edge emergence") {
  // i=0 e=1 x=2 y=3 a=4 b=5 c=6 d=7
  const auto cur = snap({{0, 1}, {2, 3}});
  const auto next = snap({{0, 4}, {1, 5}, {2, 6}, {3, 7}});
  CHECK(edge_emergence(cur, next) == doctest::Approx(2.0));
  CHECK(edge_emergence(cur, cur) == 0.0);
  CHECK(edge_emergence(cur, cur, true) == doctest::Approx(1.0));
  CHECK(edge_emergence(snap({{0, 1}}), snap({{2, 3}})) == 0.0);
  CHECK(edge_emergence(kEmpty, cur) == 0.0);
}

TEST_CASE("metric series matches pointwise evaluation") {
  std::mt19937_64 rng(9);
  const auto series = oracle::random_series(9, 12, 0.3, rng);
  for (auto p : kAllProperties) {
    const auto m = metric_series(series, p);
    if (p == PropertyId::EdgeEmergence) {
      REQUIRE(m.values.size() == series.size() - 1);
      for (std::size_t t = 0; t + 1 < series.size(); ++t)
        CHECK(m.values[t] == doctest::Approx(edge_emergence(series[t], series[t + 1])));
      MetricOptions pad;
      pad.pad_emergence = true;
      const auto padded = metric_series(series, p, pad);
      CHECK(padded.values.size() == series.size());
      CHECK(padded.values.back() == 0.0);
    } else {
      REQUIRE(m.values.size() == series.size());
      for (std::size_t t = 0; t < series.size(); ++t)
        CHECK(m.values[t] == doctest::Approx(snapshot_property(series[t], p)));
    }
  }
}

TEST_CASE("constant triangle series gives constant average degree") {
  std::vector<std::vector<Edge>> steps(5, {{0, 1}, {1, 2}, {0, 2}});
  const auto m = metric_series(oracle::make_series(3, steps), PropertyId::AvgDegree);
  for (double v : m.values) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("property names round-trip") {
  for (auto p : kAllProperties) CHECK(parse_property(property_name(p)) == p);
  CHECK_THROWS(parse_property("bogus"));
}
