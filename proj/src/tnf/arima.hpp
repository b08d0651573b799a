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
#include <vector>

namespace tnf {

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;

  friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

// y_t = c + sum(ar_i * y_{t-i}) + sum(ma_j * e_{t-j}) + e_t on the
// d-times differenced series.
struct ArimaModel {
  ArimaOrder order;
  std::vector<double> ar;
  std::vector<double> ma;
  double intercept = 0.0;
  double sigma2 = 0.0;
  // Degenerate fits forecast the last observed value.
  bool degenerate = false;
};

std::vector<double> difference(std::span<const double> y, int d);

// Inverse of difference(): rebuilds a series from its d-th difference and the
// first d values of the original.
std::vector<double> integrate(std::span<const double> z, std::span<const double> head, int d);

struct ArmaFit {
  std::vector<double> ar;
  std::vector<double> ma;
  double intercept = 0.0;
  double sigma2 = 0.0;
  std::size_t effective_n = 0;  // residuals contributing to sigma2
  bool degenerate = false;
};

struct ArmaFitOptions {
  // Residuals start at max(p, condition_on); fix it across a grid to compare
  // information criteria on a common sample.
  std::size_t condition_on = 0;
  std::size_t max_iterations = 200;
  double tolerance = 1e-8;
};

std::size_t min_arma_length(int p, int q);

// Hannan-Rissanen start refined by conditional sum of squares under a
// partial-autocorrelation parameterization (stationary AR, invertible MA).
ArmaFit fit_arma(std::span<const double> z, int p, int q, const ArmaFitOptions& options = {});

// CSS residuals for given coefficients, zero pre-sample innovations.
std::vector<double> css_residuals(std::span<const double> z, std::span<const double> ar,
                                  std::span<const double> ma, double intercept,
                                  std::size_t start);

double aicc(const ArmaFit& fit, int p, int q);

struct OrderGrid {
  int max_p = 3;
  int max_d = 2;
  int max_q = 3;
};

struct OrderSelection {
  ArimaOrder order;
  ArimaModel model;
  bool fallback = false;  // every candidate fit was degenerate
};

// KPSS-driven d, then (p, q) by AICc with ties to smaller p+q, then smaller p.
OrderSelection select_order(std::span<const double> window, const OrderGrid& grid = {});
ArimaOrder select_arima_order(std::span<const double> window, const OrderGrid& grid = {});

ArimaModel fit_arima(std::span<const double> window, ArimaOrder order);

double forecast_one(const ArimaModel& model, std::span<const double> history);

struct PredictionRecord {
  std::size_t t = 0;
  double predicted = 0.0;
  double original = 0.0;
  double pct_error = 0.0;
  bool error_defined = true;  // false when original == 0
  ArimaOrder order;
  std::optional<bool> suitable;
  double lpsd_ratio = 0.0;
};

double percentage_error(double original, double predicted);

// One-step forecasts for every t in [first, last]: each trains on
// y[t-1-window .. t-1] and predicts y[t].
std::vector<PredictionRecord> sliding_prediction(std::span<const double> y, std::size_t window,
                                                 std::size_t first, std::size_t last,
                                                 const OrderGrid& grid = {});

struct ErrorSummary {
  double fraction = 0.0;
  std::size_t counted = 0;
  std::size_t undefined = 0;
  double mean_error = 0.0;
};

// Fraction of records with pct_error <= threshold_pct among records with a
// defined error. Throws a Summary error when none remain.
ErrorSummary error_summary(std::span<const PredictionRecord> records, double threshold_pct);

}  // namespace tnf
