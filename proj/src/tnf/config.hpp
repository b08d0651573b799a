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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnf/attack.hpp"
#include "tnf/graph_metrics.hpp"
#include "tnf/ingest.hpp"
#include "tnf/spectral.hpp"

namespace tnf {

// Flat "table.key" -> value settings read from a TOML-style file:
//   key = value        top-level setting
//   [table.sub]        following keys become "table.sub.key"
// Values may be bare words, numbers, booleans or double-quoted strings.
class Settings {
 public:
  static Settings parse(std::istream& in, const std::string& origin = "<config>");
  static Settings load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  // Keys in first-insertion order.
  const std::vector<std::string>& order() const noexcept { return order_; }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

struct DatasetConfig {
  std::string name;
  std::filesystem::path path;
  InputFormat format = InputFormat::Triple;
  std::int64_t base_resolution = 0;
  bool rebase = false;
  bool strict = false;
  std::optional<std::size_t> window;  // nullopt: choose from the overlap curve
  std::optional<StepInterval> range;  // test steps; defaults to [window+1, T-1]
  std::optional<StepInterval> attack_interval;  // defaults to the test range
};

struct RunConfig {
  std::vector<DatasetConfig> datasets;
  std::int64_t resolution = 300;
  std::vector<PropertyId> properties{kAllProperties.begin(), kAllProperties.end()};
  double error_threshold_pct = 20.0;
  double overlap_threshold = 0.2;
  std::size_t max_lag = 0;  // 0: min(200, T/4)
  bool include_persistent_emergence = false;

  bool spectro_filter = true;
  std::optional<double> theta;  // nullopt: 25th percentile of the training prefix
  Taper suitability_taper = Taper::Rectangular;
  Taper spectrogram_taper = Taper::Hann;
  std::size_t spectro_window = 0;  // 0: the forecasting window
  std::size_t spectro_hop = 0;     // 0: half the spectrogram window

  bool attack = true;
  std::vector<AttackStrategy> strategies{AttackStrategy::PredDeg, AttackStrategy::AvgDeg,
                                         AttackStrategy::Random};
  std::vector<double> fractions{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  std::size_t random_seeds = 20;
  bool fixed_n = false;
  bool rerank = false;

  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 7;

  // Builds a validated configuration; unknown keys are config errors.
  static RunConfig from_settings(const Settings& settings);
};

StepInterval parse_step_range(const std::string& text);

}  // namespace tnf
