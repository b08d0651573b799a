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
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tnf {

using NodeId = std::uint32_t;

// Dense node index <-> original label. Labels are interned in first-seen order.
class NodeMap {
 public:
  NodeId intern(std::string_view label);
  const std::string& label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct ContactEvent {
  std::int64_t time = 0;
  NodeId u = 0;
  NodeId v = 0;
};

enum class InputFormat { Triple, SigcommProximity };

InputFormat parse_input_format(std::string_view name);

struct ParseStats {
  std::size_t lines = 0;
  std::size_t events = 0;
  std::size_t skipped = 0;  // blank and '#' lines
  std::size_t malformed = 0;
  std::size_t self_loops = 0;
  std::size_t external = 0;  // proximity rows naming a non-participant device
  std::size_t first_malformed_line = 0;
  std::string first_malformed_text;
};

struct ParseOptions {
  InputFormat format = InputFormat::Triple;
  bool strict = false;
  // 0 infers the native sampling period as the gcd of event times.
  std::int64_t base_resolution = 0;
  // Shift times so the first event lands at 0.
  bool rebase = false;
};

struct EventLog {
  std::vector<ContactEvent> events;  // sorted by time
  std::int64_t base_resolution = 1;
  // Set when base_resolution is the gcd of the event times rather than given;
  // any divisor of it is then equally consistent with the data.
  bool base_inferred = false;
  std::shared_ptr<NodeMap> nodes = std::make_shared<NodeMap>();
  ParseStats stats;
};

EventLog parse_contacts(std::istream& in, const ParseOptions& options);
EventLog load_contacts(const std::filesystem::path& path, const ParseOptions& options);

// Undirected edge with first < second.
using Edge = std::pair<NodeId, NodeId>;

inline Edge make_edge(NodeId a, NodeId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

struct Snapshot {
  std::size_t index = 0;
  std::vector<Edge> edges;  // sorted, unique, no self-loops

  bool has_edge(NodeId a, NodeId b) const;
};

// Equispaced sequence of simple undirected graphs over a shared node universe.
// Immutable after construction.
class SnapshotSeries {
 public:
  SnapshotSeries() = default;
  SnapshotSeries(std::vector<Snapshot> snapshots, std::int64_t resolution,
                 std::shared_ptr<const NodeMap> nodes);

  std::size_t size() const noexcept { return snapshots_.size(); }
  bool empty() const noexcept { return snapshots_.empty(); }
  const Snapshot& operator[](std::size_t t) const { return snapshots_[t]; }
  const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }
  std::int64_t resolution() const noexcept { return resolution_; }
  std::size_t node_count() const noexcept { return nodes_ ? nodes_->size() : 0; }
  const NodeMap& nodes() const { return *nodes_; }
  std::shared_ptr<const NodeMap> node_map() const { return nodes_; }

  // Same snapshot count and, per step, the same edge set by original label.
  bool same_as(const SnapshotSeries& other) const;

 private:
  std::vector<Snapshot> snapshots_;
  std::int64_t resolution_ = 1;
  std::shared_ptr<const NodeMap> nodes_;
};

SnapshotSeries aggregate_snapshots(const EventLog& log, std::int64_t resolution);

// Canonical dump: header comments carrying resolution and node order, then one
// "snapshot_index u v" line per edge.
void write_snapshot_dump(std::ostream& out, const SnapshotSeries& series);
SnapshotSeries read_snapshot_dump(std::istream& in);

}  // namespace tnf
