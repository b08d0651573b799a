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

#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "tnf/error.hpp"
#include "tnf/ingest.hpp"
#include "tnf/synthetic.hpp"

using namespace tnf;

namespace {

EventLog parse(const std::string& text, ParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_contacts(in, opts);
}

std::set<std::pair<std::string, std::string>> labelled(const SnapshotSeries& s, std::size_t t) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : s[t].edges) {
    auto la = s.nodes().label(a), lb = s.nodes().label(b);
    if (lb < la) std::swap(la, lb);
    out.emplace(la, lb);
  }
  return out;
}

}  // namespace

TEST_CASE("empty stream gives an empty log") {
  auto log = parse("");
  CHECK(log.events.empty());
  CHECK(aggregate_snapshots(log, 300).size() == 0);
}

TEST_CASE("triples are transcribed in time order") {
  auto log = parse("40 1 2\n20 1 2\n20 2 3\n");
  REQUIRE(log.events.size() == 3);
  CHECK(log.events[0].time == 20);
  CHECK(log.events[1].time == 20);
  CHECK(log.events[2].time == 40);
  CHECK(log.base_resolution == 20);
  // ids follow first appearance in time
  CHECK(log.nodes->label(0) == "1");
  CHECK(log.nodes->label(1) == "2");
  CHECK(log.nodes->label(2) == "3");
}

TEST_CASE("malformed lines are counted, comments skipped, strict mode fails") {
  const std::string text = "# header\n20 a b\nnot a line\n\n40 b c\n60 c\n-5 a b\n80 d d\n";
  auto log = parse(text);
  CHECK(log.events.size() == 2);
  CHECK(log.stats.malformed == 3);
  CHECK(log.stats.self_loops == 1);
  CHECK(log.stats.skipped == 2);
  CHECK(log.stats.first_malformed_line == 3);
  // event count = non-comment lines minus malformed minus self loops
  CHECK(log.stats.events == log.stats.lines - log.stats.skipped - log.stats.malformed - log.stats.self_loops);

  ParseOptions strict;
  strict.strict = true;
  try {
    parse(text, strict);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("proximity rows drop external devices") {
  ParseOptions opts;
  opts.format = InputFormat::SigcommProximity;
  auto log = parse("100;1;2;0\n100;1;-1;3\n120;2;3\n", opts);
  CHECK(log.events.size() == 2);
  CHECK(log.stats.external == 1);
}

TEST_CASE("rebase shifts the first event to zero") {
  ParseOptions opts;
  opts.rebase = true;
  auto log = parse("1000 a b\n1300 b c\n", opts);
  CHECK(log.events.front().time == 0);
  CHECK(log.events.back().time == 300);
}

TEST_CASE("binning by resolution") {
  auto log = parse("20 a b\n40 a b\n320 b c\n");
  auto s = aggregate_snapshots(log, 300);
  REQUIRE(s.size() == 2);
  CHECK(labelled(s, 0) == std::set<std::pair<std::string, std::string>>{{"a", "b"}});
  CHECK(labelled(s, 1) == std::set<std::pair<std::string, std::string>>{{"b", "c"}});
}

TEST_CASE("empty snapshots inside the span are kept") {
  auto log = parse("0 a b\n1500 a c\n");
  auto s = aggregate_snapshots(log, 300);
  REQUIRE(s.size() == 6);
  for (std::size_t t = 1; t < 5; ++t) CHECK(s[t].edges.empty());
}

TEST_CASE("resolution must be a multiple of the base resolution") {
  ParseOptions opts;
  opts.base_resolution = 20;
  std::istringstream in("20 a b\n40 a b\n");
  auto log = parse_contacts(in, opts);
  CHECK_THROWS_AS(aggregate_snapshots(log, 30), Error);
  try {
    aggregate_snapshots(log, 30);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("an inferred base resolution yields to a finer divisor") {
  auto log = parse("0 a b\n1500 a c\n");
  CHECK(log.base_inferred);
  CHECK(log.base_resolution == 1500);
  CHECK(aggregate_snapshots(log, 60).size() == 26);
}

TEST_CASE("coarser aggregation is the union of finer snapshots") {
  SyntheticParams p;
  p.participants = 20;
  p.anchors = 2;
  p.snapshots = 60;
  p.seed = 11;
  const auto log = synthesize_contacts(p);
  const auto fine = aggregate_snapshots(log, 300);
  const auto coarse = aggregate_snapshots(log, 600);
  for (std::size_t t = 0; t < coarse.size(); ++t) {
    std::set<Edge> uni(fine[2 * t].edges.begin(), fine[2 * t].edges.end());
    if (2 * t + 1 < fine.size()) uni.insert(fine[2 * t + 1].edges.begin(), fine[2 * t + 1].edges.end());
    CHECK(std::set<Edge>(coarse[t].edges.begin(), coarse[t].edges.end()) == uni);
  }
  // distinct (u, v, bin) triples are conserved
  std::set<std::tuple<NodeId, NodeId, std::int64_t>> triples;
  for (const auto& e : log.events) {
    auto [a, b] = make_edge(e.u, e.v);
    triples.emplace(a, b, e.time / 300);
  }
  std::size_t total = 0;
  for (const auto& snap : fine.snapshots()) total += snap.edges.size();
  CHECK(total == triples.size());
}

TEST_CASE("snapshot dump round-trips") {
  auto log = parse("0 x y\n20 y z\n700 z w\n710 x w\n");
  const auto s = aggregate_snapshots(log, 300);
  std::stringstream buf;
  write_snapshot_dump(buf, s);
  const auto back = read_snapshot_dump(buf);
  CHECK(back.same_as(s));
  CHECK(back.resolution() == 300);
  CHECK(back.node_count() == s.node_count());
}

TEST_CASE("emitted triples re-parse to the same series") {
  SyntheticParams p;
  p.participants = 15;
  p.anchors = 3;
  p.snapshots = 40;
  const auto log = synthesize_contacts(p);
  std::stringstream buf;
  write_triples(buf, log);
  const auto again = parse_contacts(buf, {});
  CHECK(aggregate_snapshots(again, 300).same_as(aggregate_snapshots(log, 300)));
}

TEST_CASE("series constructor deduplicates and orients edges") {
  auto s = oracle::make_series(3, {{{1, 0}, {0, 1}, {2, 1}}});
  REQUIRE(s[0].edges.size() == 2);
  CHECK(s[0].edges[0] == Edge{0, 1});
  CHECK(s[0].edges[1] == Edge{1, 2});
  CHECK_THROWS_AS(oracle::make_series(2, {{{0, 0}}}), Error);
}
