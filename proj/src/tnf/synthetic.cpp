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

#include "tnf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "tnf/error.hpp"

namespace tnf {

EventLog synthesize_contacts(const SyntheticParams& p) {
  const std::size_t n = p.participants + p.anchors;
  if (n < 2 || p.rooms < 2 || p.snapshots == 0 || p.frames_per_snapshot == 0 || p.frame_seconds <= 0 ||
      p.day_snapshots == 0) {
    fail(ErrorKind::Argument, "invalid synthetic trace parameters");
  }
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto pick = [&](std::size_t k) { return static_cast<std::size_t>(unif(rng) * static_cast<double>(k)) % k; };

  const std::size_t days = (p.snapshots + p.day_snapshots - 1) / p.day_snapshots;
  std::vector<double> sociability(n, 0.0);
  std::vector<std::size_t> room(n), home_room(n), first_day(n, 0), last_day(n, days - 1);
  std::vector<double> morning(n), evening(n);
  for (std::size_t i = 0; i < n; ++i) {
    home_room[i] = pick(p.rooms);
    room[i] = home_room[i];
    sociability[i] = 0.5 * gauss(rng);
    morning[i] = 0.30 + 0.05 * gauss(rng);
    evening[i] = 0.75 + 0.05 * gauss(rng);
    if (i < p.participants && days > 1) {
      if (unif(rng) < 0.3) first_day[i] = pick(days);
      if (unif(rng) < 0.3) last_day[i] = std::max(first_day[i], pick(days));
    }
  }
  // Session/break structure shared by everyone.
  std::vector<char> in_break(p.snapshots, 0);
  for (std::size_t t = 0; t < p.snapshots;) {
    const auto session = 12 + pick(18);
    t += session;
    const auto pause = 3 + pick(5);
    for (std::size_t k = 0; k < pause && t < p.snapshots; ++k, ++t) in_break[t] = 1;
  }

  EventLog log;
  for (std::size_t i = 0; i < n; ++i) log.nodes->intern(std::to_string(i + 1));
  log.base_resolution = p.frame_seconds;

  std::vector<char> present(n, 0);
  std::vector<std::vector<std::size_t>> occupants(p.rooms);
  for (std::size_t t = 0; t < p.snapshots; ++t) {
    const std::size_t day = t / p.day_snapshots;
    const double phase = static_cast<double>(t % p.day_snapshots) / static_cast<double>(p.day_snapshots);
    for (auto& occ : occupants) occ.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const bool anchor = i >= p.participants;
      sociability[i] += p.sociability_drift * gauss(rng) - 0.01 * sociability[i];
      const bool was = present[i];
      present[i] = anchor || (day >= first_day[i] && day <= last_day[i] && phase >= morning[i] && phase < evening[i]);
      if (!anchor && present[i]) {
        const double rate = in_break[t] ? p.break_move_rate : p.move_rate;
        if (!was) {
          room[i] = unif(rng) < 0.5 ? home_room[i] : pick(p.rooms);
        } else if (unif(rng) < rate * std::exp(0.5 * sociability[i])) {
          room[i] = unif(rng) < 0.4 ? home_room[i] : pick(p.rooms);
        }
      }
      if (present[i]) occupants[room[i]].push_back(i);
    }
    for (std::size_t f = 0; f < p.frames_per_snapshot; ++f) {
      const auto time = static_cast<std::int64_t>(t * p.frames_per_snapshot + f) * p.frame_seconds;
      for (std::size_t r = 0; r < p.rooms; ++r) {
        const auto& here = occupants[r];
        for (std::size_t a = 0; a < here.size(); ++a) {
          for (std::size_t b = a + 1; b < here.size(); ++b) {
            const std::size_t i = here[a], j = here[b];
            const double s = p.sighting * std::exp(0.5 * (sociability[i] + sociability[j]));
            if (unif(rng) < std::min(s, 0.95))
              log.events.push_back({time, static_cast<NodeId>(i), static_cast<NodeId>(j)});
          }
        }
        const auto& next = occupants[(r + 1) % p.rooms];
        for (auto i : here) {
          for (auto j : next) {
            if (i != j && unif(rng) < p.leak)
              log.events.push_back({time, static_cast<NodeId>(i), static_cast<NodeId>(j)});
          }
        }
      }
    }
  }
  log.stats.events = log.events.size();
  return log;
}

void write_triples(std::ostream& out, const EventLog& log) {
  for (const auto& e : log.events) {
    out << e.time << ' ' << log.nodes->label(e.u) << ' ' << log.nodes->label(e.v) << '\n';
  }
}

}  // namespace tnf
