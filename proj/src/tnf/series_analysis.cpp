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

#include "tnf/series_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tnf/error.hpp"
#include "tnf/parallel.hpp"
#include "tnf/regression.hpp"

namespace tnf {

namespace {

// Per-snapshot neighbor lists in CSR form keyed by global node id.
struct Neighborhoods {
  std::vector<std::size_t> offset;  // node_count + 1
  std::vector<NodeId> nbrs;
  std::vector<NodeId> active;

  Neighborhoods(const Snapshot& s, std::size_t node_count) {
    std::vector<std::size_t> deg(node_count, 0);
    for (auto [a, b] : s.edges) {
      ++deg[a];
      ++deg[b];
    }
    offset.assign(node_count + 1, 0);
    for (std::size_t i = 0; i < node_count; ++i) {
      offset[i + 1] = offset[i] + deg[i];
      if (deg[i] > 0) active.push_back(static_cast<NodeId>(i));
    }
    nbrs.resize(offset.back());
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (auto [a, b] : s.edges) {
      nbrs[fill[a]++] = b;
      nbrs[fill[b]++] = a;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
      std::sort(nbrs.begin() + static_cast<long>(offset[i]), nbrs.begin() + static_cast<long>(offset[i + 1]));
    }
  }

  std::span<const NodeId> of(NodeId i) const {
    if (i + 1 >= offset.size()) return {};
    return {nbrs.data() + offset[i], offset[i + 1] - offset[i]};
  }
};

std::size_t max_node(const Snapshot& a, const Snapshot& b) {
  std::size_t m = 0;
  for (auto [x, y] : a.edges) m = std::max<std::size_t>(m, y + 1);
  for (auto [x, y] : b.edges) m = std::max<std::size_t>(m, y + 1);
  return m;
}

double jaccard(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t common = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

double overlap(const Neighborhoods& earlier, const Neighborhoods& later) {
  if (earlier.active.empty()) return 0.0;
  double total = 0.0;
  for (auto i : earlier.active) total += jaccard(earlier.of(i), later.of(i));
  return total / static_cast<double>(earlier.active.size());
}

}  // namespace

double neighborhood_overlap(const Snapshot& earlier, const Snapshot& later) {
  const std::size_t n = max_node(earlier, later);
  return overlap(Neighborhoods(earlier, n), Neighborhoods(later, n));
}

std::size_t default_max_lag(std::size_t series_length) {
  return std::max<std::size_t>(1, std::min<std::size_t>(200, series_length / 4));
}

OverlapCurve overlap_decay(const SnapshotSeries& series, std::size_t max_lag) {
  const std::size_t T = series.size();
  if (max_lag == 0 || max_lag >= T) {
    fail(ErrorKind::Argument, "max_lag " + std::to_string(max_lag) +
                                  " must be in [1, series length " + std::to_string(T) + ")");
  }
  std::vector<Neighborhoods> hoods;
  hoods.reserve(T);
  for (const auto& s : series.snapshots()) hoods.emplace_back(s, series.node_count());

  OverlapCurve curve;
  curve.lags.resize(max_lag);
  curve.mean_overlap.resize(max_lag);
  parallel_for(max_lag, [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    double total = 0.0;
    for (std::size_t t = 0; t + k < T; ++t) total += overlap(hoods[t], hoods[t + k]);
    curve.lags[idx] = k;
    curve.mean_overlap[idx] = total / static_cast<double>(T - k);
  });
  return curve;
}

std::size_t nearest_power_of_two(std::size_t k) {
  if (k <= 1) return 1;
  std::size_t lower = 1;
  while (lower * 2 <= k) lower *= 2;
  if (lower == k) return k;
  const std::size_t upper = lower * 2;
  return (k - lower) <= (upper - k) ? lower : upper;
}

WindowChoice select_window(const OverlapCurve& curve, double threshold) {
  if (curve.lags.empty() || curve.lags.size() != curve.mean_overlap.size())
    fail(ErrorKind::Argument, "overlap curve is empty");
  if (!(threshold > 0.0 && threshold < 1.0))
    fail(ErrorKind::Argument, "overlap threshold must lie in (0, 1)");
  WindowChoice choice;
  choice.crossing_lag = curve.lags.back();
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    if (curve.mean_overlap[i] < threshold) {
      choice.crossing_lag = curve.lags[i];
      choice.crossed = true;
      break;
    }
  }
  choice.window = nearest_power_of_two(choice.crossing_lag);
  return choice;
}

StationarityReport kpss_test(std::span<const double> y) {
  const std::size_t T = y.size();
  if (T < 20) fail(ErrorKind::Argument, "KPSS needs at least 20 observations");
  StationarityReport report;
  report.test = StationarityTest::Kpss;
  report.critical_value_5pct = kKpssCritical5;
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(T);
  std::vector<double> e(T);
  for (std::size_t t = 0; t < T; ++t) e[t] = y[t] - mean;

  const auto lags = static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
  report.lags = lags;
  double s2 = 0.0;
  for (double v : e) s2 += v * v;
  for (std::size_t s = 1; s <= lags && s < T; ++s) {
    double gamma = 0.0;
    for (std::size_t t = s; t < T; ++t) gamma += e[t] * e[t - s];
    s2 += 2.0 * (1.0 - static_cast<double>(s) / static_cast<double>(lags + 1)) * gamma;
  }
  s2 /= static_cast<double>(T);

  double partial = 0.0, eta = 0.0;
  for (double v : e) {
    partial += v;
    eta += partial * partial;
  }
  const double scale = std::abs(mean) + 1.0;
  if (s2 <= 1e-24 * scale * scale) {
    report.statistic = 0.0;
  } else {
    report.statistic = eta / (static_cast<double>(T) * static_cast<double>(T) * s2);
  }
  report.decision = report.statistic > kKpssCritical5 ? Stationarity::NonStationary
                                                      : Stationarity::Stationary;
  return report;
}

namespace {

// Regression of dy_t on [1, y_{t-1}, dy_{t-1..t-k}] for t in [first, T).
OlsFit adf_regression(std::span<const double> y, std::size_t k, std::size_t first) {
  const std::size_t rows = y.size() - first;
  Eigen::MatrixXd X(static_cast<long>(rows), static_cast<long>(2 + k));
  Eigen::VectorXd dy(static_cast<long>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = first + r;
    const auto row = static_cast<long>(r);
    dy(row) = y[t] - y[t - 1];
    X(row, 0) = 1.0;
    X(row, 1) = y[t - 1];
    for (std::size_t i = 1; i <= k; ++i) X(row, static_cast<long>(1 + i)) = y[t - i] - y[t - i - 1];
  }
  return ols(X, dy);
}

}  // namespace

StationarityReport adf_test(std::span<const double> y) {
  const std::size_t T = y.size();
  if (T < 20) fail(ErrorKind::Argument, "ADF needs at least 20 observations");
  StationarityReport report;
  report.test = StationarityTest::Adf;
  report.critical_value_5pct = kAdfCritical5;

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi - *lo <= 1e-12 * (std::abs(*hi) + 1.0)) {
    report.statistic = kAdfDegenerateStatistic;
    report.decision = Stationarity::Stationary;
    return report;
  }

  std::size_t kmax = static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
  kmax = std::min(kmax, (T - 4) / 3);
  // General-to-specific on a common sample: drop the last lag while it is
  // insignificant at the 10% level.
  std::size_t k = kmax;
  while (k > 0) {
    auto fit = adf_regression(y, k, kmax + 1);
    if (!fit.full_rank || fit.std_err.size() == 0) {
      --k;
      continue;
    }
    const double se = fit.std_err(static_cast<long>(1 + k));
    if (se > 0.0 && std::abs(fit.coef(static_cast<long>(1 + k)) / se) >= 1.645) break;
    --k;
  }
  report.lags = k;
  auto fit = adf_regression(y, k, k + 1);
  double stat = 0.0;
  if (fit.std_err.size() > 1 && fit.std_err(1) > 0.0) {
    stat = fit.coef(1) / fit.std_err(1);
  } else if (fit.coef.size() > 1 && fit.coef(1) < -1e-12) {
    stat = kAdfDegenerateStatistic;
  }
  report.statistic = stat;
  report.decision = stat > kAdfCritical5 ? Stationarity::NonStationary : Stationarity::Stationary;
  return report;
}

}  // namespace tnf
