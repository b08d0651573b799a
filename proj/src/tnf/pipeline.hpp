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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnf/arima.hpp"
#include "tnf/config.hpp"
#include "tnf/series_analysis.hpp"
#include "tnf/spectral.hpp"

namespace tnf {

struct PropertySummary {
  PropertyId property = PropertyId::ActiveNodes;
  std::size_t window = 0;
  std::size_t records = 0;
  ErrorSummary unfiltered;
  std::optional<ErrorSummary> filtered;
  std::size_t dropped = 0;
  std::optional<double> theta;
  PsdBins psd;  // mean over the property's spectrogram segments
};

struct DatasetSummary {
  std::string name;
  std::vector<PropertySummary> properties;
};

struct Table2 {
  std::string text;
  std::string csv;
};

// Rows are properties, columns datasets, cells "unfiltered, (filtered)" with
// "n/a" for a missing filtered value; the last row holds per-dataset means.
Table2 emit_table2(const std::vector<DatasetSummary>& summaries);

void write_summary_csv(std::ostream& out, const DatasetSummary& summary);
DatasetSummary read_summary_csv(std::istream& in, const std::string& name);

struct LoadedDataset {
  DatasetConfig config;
  ParseStats stats;
  std::int64_t base_resolution = 1;
  SnapshotSeries series;
};

LoadedDataset load_dataset(const DatasetConfig& config, std::int64_t resolution);

struct StageRequest {
  std::string stage;     // ingest, metrics, window, predict, spectro, attack, report, all
  std::string dataset;   // empty: first configured dataset
  std::optional<std::filesystem::path> out;  // single-file output override
};

// Runs one stage and writes its artifacts under config.output_dir/<dataset>.
// Human-readable progress goes to `log`. Errors propagate as tnf::Error with
// the stage name prefixed.
void run_stage(const RunConfig& config, const StageRequest& request, std::ostream& log);

std::string format_double(double v);

}  // namespace tnf
