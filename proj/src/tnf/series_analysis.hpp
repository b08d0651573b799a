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
#include <span>
#include <vector>

#include "tnf/ingest.hpp"

namespace tnf {

struct OverlapCurve {
  std::vector<std::size_t> lags;
  std::vector<double> mean_overlap;
};

// Mean Jaccard similarity of each node's neighbor set between two snapshots,
// averaged over the nodes active in `earlier`. 0 when `earlier` has no edges.
double neighborhood_overlap(const Snapshot& earlier, const Snapshot& later);

std::size_t default_max_lag(std::size_t series_length);

// Curve over lags 1..max_lag; max_lag must be below the series length.
OverlapCurve overlap_decay(const SnapshotSeries& series, std::size_t max_lag);

struct WindowChoice {
  std::size_t crossing_lag = 0;  // first lag below the threshold, or the last lag
  bool crossed = false;
  std::size_t window = 0;
};

std::size_t nearest_power_of_two(std::size_t k);
WindowChoice select_window(const OverlapCurve& curve, double threshold = 0.2);

enum class StationarityTest { Kpss, Adf };
enum class Stationarity { Stationary, NonStationary };

struct StationarityReport {
  StationarityTest test = StationarityTest::Kpss;
  double statistic = 0.0;
  double critical_value_5pct = 0.0;
  Stationarity decision = Stationarity::Stationary;
  std::size_t lags = 0;
};

inline constexpr double kKpssCritical5 = 0.463;
inline constexpr double kAdfCritical5 = -2.86;
inline constexpr double kAdfDegenerateStatistic = -1e9;

// Level-stationarity KPSS with Bartlett long-run variance.
StationarityReport kpss_test(std::span<const double> y);
// ADF with constant; lag order trimmed from 12(T/100)^(1/4) by t-significance.
StationarityReport adf_test(std::span<const double> y);

}  // namespace tnf
