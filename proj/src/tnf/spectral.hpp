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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tnf/arima.hpp"

namespace tnf {

enum class Taper { Rectangular, Hann };

Taper parse_taper(std::string_view name);
std::string_view taper_name(Taper taper) noexcept;

// One-sided PSD of a single segment: mean removed, tapered, then
// |X_k|^2 / (N * sum(w^2)), doubled for 0 < k < N/2. Summing the bins gives
// the taper-weighted mean square of the demeaned segment.
std::vector<double> segment_psd(std::span<const double> segment, Taper taper);

struct SpectrogramSegment {
  std::size_t start = 0;
  std::vector<double> psd;  // window_size / 2 + 1 bins
};

struct Spectrogram {
  std::vector<SpectrogramSegment> segments;
  std::size_t window_size = 0;
  std::size_t hop = 0;
  Taper taper = Taper::Hann;
};

Spectrogram stft(std::span<const double> y, std::size_t window_size, std::size_t hop,
                 Taper taper = Taper::Hann);

// Band edges in DFT-bin units: low = [1, low_end), mid = [low_end, mid_end],
// high = (mid_end, N/2]. The DC bin is never counted.
struct BandEdges {
  std::size_t low_end = 5;
  std::size_t mid_end = 15;
};

struct PsdBins {
  double lpsd = 0.0;
  double mpsd = 0.0;
  double hpsd = 0.0;

  double total() const noexcept { return lpsd + mpsd + hpsd; }
  // lpsd / total, or nullopt when the window carries no power.
  std::optional<double> low_share() const noexcept;
};

PsdBins psd_bins(std::span<const double> psd, const BandEdges& edges = {});

struct SpectrogramBins {
  std::vector<PsdBins> per_segment;
  PsdBins average;
};

SpectrogramBins psd_bins(const Spectrogram& spec, const BandEdges& edges = {});

enum class Suitability { Suitable, Unsuitable };

// Low-band share of a single window's spectrum (rectangular taper by
// default). nullopt for a window with zero power.
std::optional<double> lpsd_ratio(std::span<const double> window, Taper taper = Taper::Rectangular);

Suitability suitability(std::span<const double> window, double theta,
                        Taper taper = Taper::Rectangular);

// Default cut-off: the given percentile (linear interpolation) of the
// low-band share over windows ending before `first_test_step`.
double auto_theta(std::span<const double> y, std::size_t window, std::size_t first_test_step,
                  Taper taper = Taper::Rectangular, double percentile = 25.0);

// Flags each record using the `window` values preceding its step.
void apply_suitability(std::vector<PredictionRecord>& records, std::span<const double> y,
                       std::size_t window, double theta, Taper taper = Taper::Rectangular);

struct FilteredSummary {
  ErrorSummary unfiltered;
  std::optional<ErrorSummary> filtered;  // empty when no record is suitable
  std::size_t dropped = 0;
};

FilteredSummary filtered_summary(std::span<const PredictionRecord> records, double threshold_pct);

}  // namespace tnf
