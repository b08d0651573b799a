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
#include <iosfwd>

#include "tnf/ingest.hpp"

namespace tnf {

// Proximity-style contact trace. Participants occupy rooms and occasionally
// move between them, more often during session breaks; co-located devices
// sight each other per frame, and neighboring rooms leak occasional sightings.
// Attendance follows a day/night cycle with staggered arrival and departure
// days, and each participant's sociability drifts slowly. A few stationary
// anchors sit in fixed rooms for the whole trace.
struct SyntheticParams {
  std::size_t participants = 70;
  std::size_t anchors = 10;
  std::size_t rooms = 10;
  std::size_t snapshots = 1120;
  std::size_t frames_per_snapshot = 15;
  std::int64_t frame_seconds = 20;
  std::size_t day_snapshots = 288;
  double move_rate = 0.02;      // per-snapshot room change probability in sessions
  double break_move_rate = 0.12;
  double sighting = 0.12;       // per-frame sighting probability inside a room
  double leak = 0.004;          // per-frame sighting probability across adjacent rooms
  double sociability_drift = 0.04;
  std::uint64_t seed = 1;
};

EventLog synthesize_contacts(const SyntheticParams& params);

// Writes the log in the "t u v" triple format.
void write_triples(std::ostream& out, const EventLog& log);

}  // namespace tnf
