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

#include "tnf/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "tnf/error.hpp"

namespace tnf {

namespace {

// FFTW planning is not thread-safe; plans are created once per length under a
// lock and executed with the new-array interface, which is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) fail(ErrorKind::Internal, "FFTW could not plan a transform of length " + std::to_string(n));
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

double taper_weight(Taper taper, std::size_t i, std::size_t n) {
  if (taper == Taper::Rectangular || n < 2) return 1.0;
  // Periodic Hann.
  return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Taper parse_taper(std::string_view name) {
  if (name == "hann") return Taper::Hann;
  if (name == "rectangular" || name == "rect") return Taper::Rectangular;
  fail(ErrorKind::Config, "unknown taper '" + std::string(name) + "'");
}

std::string_view taper_name(Taper taper) noexcept {
  return taper == Taper::Hann ? "hann" : "rectangular";
}

std::vector<double> segment_psd(std::span<const double> segment, Taper taper) {
  const std::size_t n = segment.size();
  if (n < 2) fail(ErrorKind::Argument, "a spectral segment needs at least 2 samples");
  const double mean = std::accumulate(segment.begin(), segment.end(), 0.0) / static_cast<double>(n);
  std::vector<double> in(n);
  double wsum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = taper_weight(taper, i, n);
    in[i] = (segment[i] - mean) * w;
    wsum2 += w * w;
  }
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(plan_cache().get(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  std::vector<double> psd(n / 2 + 1);
  const double norm = static_cast<double>(n) * wsum2;
  for (std::size_t k = 0; k < psd.size(); ++k) {
    double v = std::norm(out[k]) / norm;
    if (k > 0 && 2 * k < n) v *= 2.0;
    psd[k] = v;
  }
  return psd;
}

Spectrogram stft(std::span<const double> y, std::size_t window_size, std::size_t hop, Taper taper) {
  if (!is_power_of_two(window_size) || window_size < 2)
    fail(ErrorKind::Argument, "spectrogram window must be a power of two >= 2");
  if (window_size > y.size())
    fail(ErrorKind::Argument, "spectrogram window " + std::to_string(window_size) +
                                  " is longer than the series (" + std::to_string(y.size()) + ")");
  if (hop == 0) fail(ErrorKind::Argument, "spectrogram hop must be >= 1");
  Spectrogram spec;
  spec.window_size = window_size;
  spec.hop = hop;
  spec.taper = taper;
  for (std::size_t start = 0; start + window_size <= y.size(); start += hop) {
    spec.segments.push_back({start, segment_psd(y.subspan(start, window_size), taper)});
  }
  return spec;
}

std::optional<double> PsdBins::low_share() const noexcept {
  const double t = total();
  if (!(t > 0.0)) return std::nullopt;
  return lpsd / t;
}

PsdBins psd_bins(std::span<const double> psd, const BandEdges& edges) {
  // psd has N/2 + 1 entries; the highest bin index is N/2.
  if (psd.size() < 2 || psd.size() - 1 <= edges.mid_end || edges.low_end < 2 ||
      edges.mid_end < edges.low_end) {
    fail(ErrorKind::Argument, "window of " + std::to_string(2 * (psd.size() - 1)) +
                                  " samples is too small for three PSD bands");
  }
  auto band_mean = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += psd[k];
    return s / static_cast<double>(hi - lo + 1);
  };
  PsdBins bins;
  bins.lpsd = band_mean(1, edges.low_end - 1);
  bins.mpsd = band_mean(edges.low_end, edges.mid_end);
  bins.hpsd = band_mean(edges.mid_end + 1, psd.size() - 1);
  return bins;
}

SpectrogramBins psd_bins(const Spectrogram& spec, const BandEdges& edges) {
  SpectrogramBins out;
  for (const auto& seg : spec.segments) out.per_segment.push_back(psd_bins(seg.psd, edges));
  if (!out.per_segment.empty()) {
    for (const auto& b : out.per_segment) {
      out.average.lpsd += b.lpsd;
      out.average.mpsd += b.mpsd;
      out.average.hpsd += b.hpsd;
    }
    const auto n = static_cast<double>(out.per_segment.size());
    out.average.lpsd /= n;
    out.average.mpsd /= n;
    out.average.hpsd /= n;
  }
  return out;
}

std::optional<double> lpsd_ratio(std::span<const double> window, Taper taper) {
  auto psd = segment_psd(window, taper);
  return psd_bins(psd).low_share();
}

Suitability suitability(std::span<const double> window, double theta, Taper taper) {
  auto share = lpsd_ratio(window, taper);
  if (!share) return Suitability::Suitable;
  return *share >= theta ? Suitability::Suitable : Suitability::Unsuitable;
}

double auto_theta(std::span<const double> y, std::size_t window, std::size_t first_test_step,
                  Taper taper, double percentile) {
  if (first_test_step <= window || first_test_step > y.size())
    fail(ErrorKind::Argument, "training prefix is shorter than the window");
  std::vector<double> shares;
  for (std::size_t end = window; end < first_test_step; ++end) {
    auto share = lpsd_ratio(y.subspan(end - window, window), taper);
    shares.push_back(share.value_or(1.0));
  }
  std::sort(shares.begin(), shares.end());
  const double pos = std::clamp(percentile, 0.0, 100.0) / 100.0 * static_cast<double>(shares.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, shares.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return shares[lo] + frac * (shares[hi] - shares[lo]);
}

void apply_suitability(std::vector<PredictionRecord>& records, std::span<const double> y,
                       std::size_t window, double theta, Taper taper) {
  for (auto& r : records) {
    if (r.t < window || r.t > y.size())
      fail(ErrorKind::Argument, "no full window precedes step " + std::to_string(r.t));
    auto share = lpsd_ratio(y.subspan(r.t - window, window), taper);
    r.lpsd_ratio = share.value_or(1.0);
    r.suitable = !share || *share >= theta;
  }
}

FilteredSummary filtered_summary(std::span<const PredictionRecord> records, double threshold_pct) {
  FilteredSummary out;
  out.unfiltered = error_summary(records, threshold_pct);
  std::vector<PredictionRecord> kept;
  for (const auto& r : records) {
    if (!r.suitable) fail(ErrorKind::Argument, "record at step " + std::to_string(r.t) + " has no suitability flag");
    if (*r.suitable) {
      kept.push_back(r);
    } else {
      ++out.dropped;
    }
  }
  const bool any_defined = std::any_of(kept.begin(), kept.end(), [](const auto& r) { return r.error_defined; });
  if (any_defined) out.filtered = error_summary(kept, threshold_pct);
  return out;
}

}  // namespace tnf
