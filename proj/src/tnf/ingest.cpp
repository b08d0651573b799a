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

#include "tnf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tnf/error.hpp"

namespace tnf {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, bool allow_separators) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [&](char c) {
    return c == ' ' || c == '\t' || c == '\r' ||
           (allow_separators && (c == ';' || c == ','));
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  if (ec == std::errc() && ptr == s.data() + s.size()) return true;
  // Tolerate integral floats such as "1200.0".
  double d = 0;
  auto [dptr, dec] = std::from_chars(first, s.data() + s.size(), d);
  if (dec != std::errc() || dptr != s.data() + s.size()) return false;
  if (d != static_cast<double>(static_cast<std::int64_t>(d))) return false;
  out = static_cast<std::int64_t>(d);
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

NodeId NodeMap::intern(std::string_view label) {
  std::string key(label);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

InputFormat parse_input_format(std::string_view name) {
  if (name == "triple") return InputFormat::Triple;
  if (name == "sigcomm-proximity" || name == "sigcomm") return InputFormat::SigcommProximity;
  fail(ErrorKind::Config, "unknown input format '" + std::string(name) + "'");
}

EventLog parse_contacts(std::istream& in, const ParseOptions& options) {
  if (!in) fail(ErrorKind::Io, "input stream is not readable");
  EventLog log;
  auto& stats = log.stats;
  const bool proximity = options.format == InputFormat::SigcommProximity;

  // Labels are interned after sorting so dense ids follow first appearance in time.
  std::vector<std::pair<std::int64_t, std::pair<std::string, std::string>>> raw;

  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') {
      ++stats.skipped;
      continue;
    }
    auto fields = split_fields(view, proximity);
    std::int64_t time = 0;
    bool ok = fields.size() >= 3 && parse_int(fields[0], time) && time >= 0;
    std::string_view u, v;
    if (ok) {
      u = fields[1];
      v = fields[2];
      if (proximity) {
        // timestamp;user_id;seen_user_id[;device class columns...]
        std::int64_t uid = 0, seen = 0;
        ok = parse_int(u, uid) && parse_int(v, seen);
        if (ok && (seen < 0 || uid < 0)) {
          ++stats.external;
          continue;
        }
      }
    }
    if (!ok) {
      if (stats.malformed == 0) {
        stats.first_malformed_line = stats.lines;
        stats.first_malformed_text = std::string(view);
      }
      ++stats.malformed;
      continue;
    }
    if (u == v) {
      ++stats.self_loops;
      continue;
    }
    raw.push_back({time, {std::string(u), std::string(v)}});
  }
  if (in.bad()) fail(ErrorKind::Io, "read error on input stream");
  if (options.strict && stats.malformed > 0) {
    fail(ErrorKind::Parse, "malformed input at line " + std::to_string(stats.first_malformed_line) +
                               ": '" + stats.first_malformed_text + "' (" +
                               std::to_string(stats.malformed) + " malformed lines)");
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::int64_t offset = 0;
  if (options.rebase && !raw.empty()) offset = raw.front().first;

  log.events.reserve(raw.size());
  std::int64_t g = 0;
  for (auto& [time, pair] : raw) {
    ContactEvent e;
    e.time = time - offset;
    e.u = log.nodes->intern(pair.first);
    e.v = log.nodes->intern(pair.second);
    g = std::gcd(g, e.time);
    log.events.push_back(e);
  }
  stats.events = log.events.size();

  if (options.base_resolution > 0) {
    log.base_resolution = options.base_resolution;
  } else {
    log.base_resolution = g > 0 ? g : 1;
    log.base_inferred = true;
  }
  return log;
}

EventLog load_contacts(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return parse_contacts(in, options);
}

bool Snapshot::has_edge(NodeId a, NodeId b) const {
  return std::binary_search(edges.begin(), edges.end(), make_edge(a, b));
}

SnapshotSeries::SnapshotSeries(std::vector<Snapshot> snapshots, std::int64_t resolution,
                               std::shared_ptr<const NodeMap> nodes)
    : snapshots_(std::move(snapshots)), resolution_(resolution), nodes_(std::move(nodes)) {
  if (!nodes_) nodes_ = std::make_shared<NodeMap>();
  for (std::size_t t = 0; t < snapshots_.size(); ++t) {
    auto& edges = snapshots_[t].edges;
    snapshots_[t].index = t;
    for (auto& e : edges) {
      if (e.first == e.second) fail(ErrorKind::Data, "self-loop in snapshot " + std::to_string(t));
      if (e.first >= nodes_->size() || e.second >= nodes_->size())
        fail(ErrorKind::Data, "edge endpoint outside node universe");
      e = make_edge(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
}

bool SnapshotSeries::same_as(const SnapshotSeries& other) const {
  if (size() != other.size()) return false;
  auto labelled = [](const SnapshotSeries& s, std::size_t t) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [a, b] : s[t].edges) {
      auto la = s.nodes().label(a), lb = s.nodes().label(b);
      if (lb < la) std::swap(la, lb);
      out.emplace_back(la, lb);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  for (std::size_t t = 0; t < size(); ++t) {
    if (labelled(*this, t) != labelled(other, t)) return false;
  }
  return true;
}

SnapshotSeries aggregate_snapshots(const EventLog& log, std::int64_t resolution) {
  std::int64_t base = log.base_resolution;
  if (log.base_inferred && resolution > 0) base = std::gcd(base, resolution);
  if (resolution <= 0 || base <= 0 || resolution % base != 0) {
    fail(ErrorKind::Config, "resolution " + std::to_string(resolution) +
                                " is not a positive multiple of the base resolution " +
                                std::to_string(base));
  }
  std::vector<Snapshot> snapshots;
  if (!log.events.empty()) {
    auto last_bin = static_cast<std::size_t>(log.events.back().time / resolution);
    snapshots.resize(last_bin + 1);
    for (const auto& e : log.events) {
      auto bin = static_cast<std::size_t>(e.time / resolution);
      snapshots[bin].edges.push_back(make_edge(e.u, e.v));
    }
  }
  return SnapshotSeries(std::move(snapshots), resolution, log.nodes);
}

void write_snapshot_dump(std::ostream& out, const SnapshotSeries& series) {
  out << "# resolution " << series.resolution() << "\n";
  out << "# snapshots " << series.size() << "\n";
  out << "# nodes";
  for (const auto& label : series.nodes().labels()) out << ' ' << label;
  out << "\n";
  for (const auto& snap : series.snapshots()) {
    for (auto [a, b] : snap.edges) {
      out << snap.index << ' ' << series.nodes().label(a) << ' ' << series.nodes().label(b) << "\n";
    }
  }
}

SnapshotSeries read_snapshot_dump(std::istream& in) {
  if (!in) fail(ErrorKind::Io, "dump stream is not readable");
  std::int64_t resolution = 1;
  std::size_t count = 0;
  bool have_count = false;
  auto nodes = std::make_shared<NodeMap>();
  std::vector<Snapshot> snapshots;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      auto fields = split_fields(view.substr(1), false);
      if (fields.size() >= 2 && fields[0] == "resolution") {
        if (!parse_int(fields[1], resolution) || resolution <= 0)
          fail(ErrorKind::Parse, "bad resolution header at line " + std::to_string(lineno));
      } else if (fields.size() >= 2 && fields[0] == "snapshots") {
        std::int64_t n = 0;
        if (!parse_int(fields[1], n) || n < 0)
          fail(ErrorKind::Parse, "bad snapshots header at line " + std::to_string(lineno));
        count = static_cast<std::size_t>(n);
        have_count = true;
      } else if (!fields.empty() && fields[0] == "nodes") {
        for (std::size_t i = 1; i < fields.size(); ++i) nodes->intern(fields[i]);
      }
      continue;
    }
    auto fields = split_fields(view, false);
    std::int64_t t = 0;
    if (fields.size() != 3 || !parse_int(fields[0], t) || t < 0 || fields[1] == fields[2]) {
      fail(ErrorKind::Parse, "malformed dump line " + std::to_string(lineno) + ": '" +
                                 std::string(view) + "'");
    }
    auto idx = static_cast<std::size_t>(t);
    if (snapshots.size() <= idx) snapshots.resize(idx + 1);
    snapshots[idx].edges.push_back(make_edge(nodes->intern(fields[1]), nodes->intern(fields[2])));
  }
  if (have_count) {
    if (snapshots.size() > count) fail(ErrorKind::Parse, "dump has edges beyond its snapshot count");
    snapshots.resize(count);
  }
  return SnapshotSeries(std::move(snapshots), resolution, nodes);
}

}  // namespace tnf
