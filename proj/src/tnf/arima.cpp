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

#include "tnf/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tnf/error.hpp"
#include "tnf/nelder_mead.hpp"
#include "tnf/parallel.hpp"
#include "tnf/regression.hpp"
#include "tnf/series_analysis.hpp"

namespace tnf {

std::vector<double> difference(std::span<const double> y, int d) {
  if (d < 0 || d > 2) fail(ErrorKind::Argument, "differencing order must be 0, 1 or 2");
  if (y.size() <= static_cast<std::size_t>(d))
    fail(ErrorKind::Argument, "series of length " + std::to_string(y.size()) +
                                  " is too short for differencing order " + std::to_string(d));
  std::vector<double> out(y.begin(), y.end());
  for (int k = 0; k < d; ++k) {
    for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
    out.pop_back();
  }
  return out;
}

std::vector<double> integrate(std::span<const double> z, std::span<const double> head, int d) {
  if (d < 0 || head.size() != static_cast<std::size_t>(d))
    fail(ErrorKind::Argument, "integration needs exactly d initial values");
  if (d == 0) return {z.begin(), z.end()};
  // Initial value of each intermediate difference level.
  std::vector<double> level(head.begin(), head.end());
  std::vector<double> starts;
  for (int k = 0; k < d; ++k) {
    starts.push_back(level.front());
    for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = level[i + 1] - level[i];
    level.pop_back();
  }
  std::vector<double> cur(z.begin(), z.end());
  for (int k = d - 1; k >= 0; --k) {
    std::vector<double> up;
    up.reserve(cur.size() + 1);
    up.push_back(starts[static_cast<std::size_t>(k)]);
    for (double v : cur) up.push_back(up.back() + v);
    cur = std::move(up);
  }
  return cur;
}

namespace {

// Partial autocorrelations -> coefficients of 1 - sum(phi_i L^i).
std::vector<double> partials_to_coeffs(std::span<const double> r) {
  std::vector<double> phi;
  for (std::size_t k = 0; k < r.size(); ++k) {
    std::vector<double> next(k + 1);
    for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - r[k] * phi[k - 1 - j];
    next[k] = r[k];
    phi = std::move(next);
  }
  return phi;
}

// Step-down recursion; fails when the polynomial has a root on or inside the
// unit circle.
bool coeffs_to_partials(std::span<const double> coeffs, std::vector<double>& r) {
  std::vector<double> phi(coeffs.begin(), coeffs.end());
  r.assign(phi.size(), 0.0);
  for (std::size_t k = phi.size(); k-- > 0;) {
    const double rk = phi[k];
    if (!(std::abs(rk) < 1.0)) return false;
    r[k] = rk;
    std::vector<double> prev(k);
    for (std::size_t j = 0; j < k; ++j) prev[j] = (phi[j] + rk * phi[k - 1 - j]) / (1.0 - rk * rk);
    phi = std::move(prev);
  }
  return true;
}

std::vector<double> to_partials_or_shrink(std::vector<double> coeffs) {
  std::vector<double> r;
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (coeffs_to_partials(coeffs, r)) {
      for (auto& v : r) v = std::clamp(v, -0.98, 0.98);
      return r;
    }
    double s = 1.0;
    for (auto& c : coeffs) {
      s *= 0.95;
      c *= s;
    }
  }
  return std::vector<double>(coeffs.size(), 0.0);
}

double sum_sq(std::span<const double> e, std::size_t start) {
  double s = 0.0;
  for (std::size_t t = start; t < e.size(); ++t) s += e[t] * e[t];
  return s;
}

bool is_flat(std::span<const double> z) {
  const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
  return *hi - *lo <= 1e-10 * (std::abs(*hi) + std::abs(*lo) + 1e-300);
}

double mean_of(std::span<const double> z) {
  return std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
}

}  // namespace

std::vector<double> css_residuals(std::span<const double> z, std::span<const double> ar,
                                  std::span<const double> ma, double intercept,
                                  std::size_t start) {
  const std::size_t p = ar.size(), q = ma.size();
  start = std::max(start, p);
  std::vector<double> e(z.size(), 0.0);
  for (std::size_t t = start; t < z.size(); ++t) {
    double pred = intercept;
    for (std::size_t i = 0; i < p; ++i) pred += ar[i] * z[t - 1 - i];
    for (std::size_t j = 0; j < q && j < t; ++j) pred += ma[j] * e[t - 1 - j];
    e[t] = z[t] - pred;
  }
  return e;
}

std::size_t min_arma_length(int p, int q) {
  return std::max<std::size_t>(20, 4 * static_cast<std::size_t>(p + q + 1));
}

ArmaFit fit_arma(std::span<const double> z, int p, int q, const ArmaFitOptions& options) {
  if (p < 0 || q < 0 || p > 5 || q > 5) fail(ErrorKind::Argument, "ARMA orders must lie in [0, 5]");
  const std::size_t n = z.size();
  if (n < min_arma_length(p, q))
    fail(ErrorKind::Argument, "ARMA(" + std::to_string(p) + "," + std::to_string(q) + ") needs at least " +
                                  std::to_string(min_arma_length(p, q)) + " observations, got " +
                                  std::to_string(n));
  const auto up = static_cast<std::size_t>(p), uq = static_cast<std::size_t>(q);
  const std::size_t start = std::max(up, options.condition_on);

  ArmaFit fit;
  fit.effective_n = n - start;
  if (is_flat(z)) {
    fit.degenerate = true;
    fit.ar.assign(up, 0.0);
    fit.ma.assign(uq, 0.0);
    fit.intercept = mean_of(z);
    return fit;
  }

  // Stage 1: long autoregression for innovation estimates (only needed with MA terms).
  std::vector<double> innov(n, 0.0);
  std::size_t stage2_start = start;
  if (q > 0) {
    std::size_t m = std::min<std::size_t>(n / 4, std::max<std::size_t>(2 * (up + uq), 4));
    m = std::max<std::size_t>(m, std::max(up, uq) + 1);
    const std::size_t rows = n - m;
    Eigen::MatrixXd X(static_cast<long>(rows), static_cast<long>(m + 1));
    Eigen::VectorXd y(static_cast<long>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t t = m + r;
      X(static_cast<long>(r), 0) = 1.0;
      for (std::size_t i = 1; i <= m; ++i) X(static_cast<long>(r), static_cast<long>(i)) = z[t - i];
      y(static_cast<long>(r)) = z[t];
    }
    auto long_ar = ols(X, y);
    for (std::size_t r = 0; r < rows; ++r) innov[m + r] = long_ar.residuals(static_cast<long>(r));
    stage2_start = std::max(start, m + uq);
  }

  // Stage 2: regress z_t on [1, lagged z, lagged innovations].
  const std::size_t rows = n - stage2_start;
  Eigen::MatrixXd X(static_cast<long>(rows), static_cast<long>(1 + up + uq));
  Eigen::VectorXd y(static_cast<long>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = stage2_start + r;
    const auto row = static_cast<long>(r);
    X(row, 0) = 1.0;
    for (std::size_t i = 0; i < up; ++i) X(row, static_cast<long>(1 + i)) = z[t - 1 - i];
    for (std::size_t j = 0; j < uq; ++j) X(row, static_cast<long>(1 + up + j)) = innov[t - 1 - j];
    y(row) = z[t];
  }
  auto hr = ols(X, y);
  std::vector<double> ar0(up), ma0(uq);
  double c0 = mean_of(z);
  if (hr.full_rank) {
    c0 = hr.coef(0);
    for (std::size_t i = 0; i < up; ++i) ar0[i] = hr.coef(static_cast<long>(1 + i));
    for (std::size_t j = 0; j < uq; ++j) ma0[j] = hr.coef(static_cast<long>(1 + up + j));
  } else if (q == 0) {
    fit.degenerate = true;
    fit.ar.assign(up, 0.0);
    fit.intercept = c0;
    return fit;
  }

  std::vector<double> r_ar_check;
  const bool ar_ok = coeffs_to_partials(ar0, r_ar_check);
  if (q == 0 && hr.full_rank && ar_ok) {
    // Least squares is the exact CSS minimizer on the common sample.
    auto e = css_residuals(z, ar0, {}, c0, start);
    fit.ar = ar0;
    fit.intercept = c0;
    fit.sigma2 = sum_sq(e, start) / static_cast<double>(fit.effective_n);
    return fit;
  }

  std::vector<double> neg_ma(uq);
  for (std::size_t j = 0; j < uq; ++j) neg_ma[j] = -ma0[j];
  auto r_ar = to_partials_or_shrink(ar0);
  auto r_ma = to_partials_or_shrink(neg_ma);

  double scale = 0.0;
  {
    const double mu = mean_of(z);
    for (double v : z) scale += (v - mu) * (v - mu);
    scale = std::sqrt(scale / static_cast<double>(n));
  }
  if (!(scale > 0.0)) scale = 1.0;

  std::vector<double> x0;
  x0.push_back(c0 / scale);
  for (double r : r_ar) x0.push_back(std::atanh(r));
  for (double r : r_ma) x0.push_back(std::atanh(r));
  std::vector<double> step(x0.size(), 0.1);

  std::vector<double> ar(up), ma(uq), partial(std::max(up, uq));
  auto unpack = [&](const std::vector<double>& x) {
    for (std::size_t i = 0; i < up; ++i) partial[i] = std::tanh(x[1 + i]);
    auto a = partials_to_coeffs(std::span<const double>(partial.data(), up));
    std::copy(a.begin(), a.end(), ar.begin());
    for (std::size_t j = 0; j < uq; ++j) partial[j] = std::tanh(x[1 + up + j]);
    auto b = partials_to_coeffs(std::span<const double>(partial.data(), uq));
    for (std::size_t j = 0; j < uq; ++j) ma[j] = -b[j];
    return x[0] * scale;
  };
  const double norm = scale * scale * static_cast<double>(fit.effective_n);
  auto objective = [&](const std::vector<double>& x) {
    const double c = unpack(x);
    auto e = css_residuals(z, ar, ma, c, start);
    double s = sum_sq(e, start) / norm;
    return std::isfinite(s) ? s : std::numeric_limits<double>::max();
  };
  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;
  auto best = nelder_mead(objective, x0, step, nm);

  fit.intercept = unpack(best.x);
  fit.ar = ar;
  fit.ma = ma;
  fit.sigma2 = best.value * scale * scale;
  return fit;
}

double aicc(const ArmaFit& fit, int p, int q) {
  const double n = static_cast<double>(fit.effective_n);
  const double k = static_cast<double>(p + q + 1);
  if (fit.degenerate || n - k - 1.0 <= 0.0) return std::numeric_limits<double>::infinity();
  const double s2 = std::max(fit.sigma2, 1e-300);
  return n * std::log(s2) + 2.0 * k * n / (n - k - 1.0);
}

OrderSelection select_order(std::span<const double> window, const OrderGrid& grid) {
  if (window.size() < 20) fail(ErrorKind::Argument, "order selection needs at least 20 observations");
  int d = grid.max_d;
  for (int cand = 0; cand <= grid.max_d; ++cand) {
    auto z = difference(window, cand);
    if (z.size() < 20) break;
    if (kpss_test(z).decision == Stationarity::Stationary) {
      d = cand;
      break;
    }
  }
  auto z = difference(window, d);

  std::vector<std::pair<int, int>> candidates;
  for (int p = 0; p <= grid.max_p; ++p)
    for (int q = 0; q <= grid.max_q; ++q) candidates.emplace_back(p, q);
  std::stable_sort(candidates.begin(), candidates.end(), [](auto a, auto b) {
    return a.first + a.second != b.first + b.second ? a.first + a.second < b.first + b.second
                                                    : a.first < b.first;
  });

  ArmaFitOptions options;
  options.condition_on = static_cast<std::size_t>(grid.max_p);
  OrderSelection out;
  double best_score = std::numeric_limits<double>::infinity();
  for (auto [p, q] : candidates) {
    if (z.size() < min_arma_length(p, q)) continue;
    auto fit = fit_arma(z, p, q, options);
    if (fit.degenerate) continue;
    const double score = aicc(fit, p, q);
    if (score < best_score - 1e-9 * (std::abs(best_score) + 1.0) || !std::isfinite(best_score)) {
      if (!std::isfinite(score)) continue;
      best_score = score;
      out.order = {p, d, q};
      out.model.order = out.order;
      out.model.ar = fit.ar;
      out.model.ma = fit.ma;
      out.model.intercept = fit.intercept;
      out.model.sigma2 = fit.sigma2;
      out.model.degenerate = false;
    }
  }
  if (!std::isfinite(best_score)) {
    out.fallback = true;
    out.order = {0, 1, 0};
    out.model = ArimaModel{};
    out.model.order = out.order;
  }
  return out;
}

ArimaOrder select_arima_order(std::span<const double> window, const OrderGrid& grid) {
  return select_order(window, grid).order;
}

ArimaModel fit_arima(std::span<const double> window, ArimaOrder order) {
  auto z = difference(window, order.d);
  auto fit = fit_arma(z, order.p, order.q);
  ArimaModel model;
  model.order = order;
  model.ar = fit.ar;
  model.ma = fit.ma;
  model.intercept = fit.intercept;
  model.sigma2 = fit.sigma2;
  model.degenerate = fit.degenerate;
  return model;
}

double forecast_one(const ArimaModel& model, std::span<const double> history) {
  if (history.empty()) fail(ErrorKind::Argument, "forecast needs a non-empty history");
  if (model.degenerate) return history.back();
  const auto p = static_cast<std::size_t>(model.order.p);
  const int d = model.order.d;
  if (history.size() < p + static_cast<std::size_t>(d) + 1)
    fail(ErrorKind::Argument, "history shorter than p + d");
  auto z = difference(history, d);
  auto e = css_residuals(z, model.ar, model.ma, model.intercept, p);
  const std::size_t n = z.size();
  double next = model.intercept;
  for (std::size_t i = 0; i < model.ar.size(); ++i) next += model.ar[i] * z[n - 1 - i];
  for (std::size_t j = 0; j < model.ma.size() && j < n; ++j) next += model.ma[j] * e[n - 1 - j];
  // Undo differencing: add the last value of every lower difference level.
  std::vector<double> level(history.begin(), history.end());
  for (int k = 0; k < d; ++k) {
    next += level.back();
    for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = level[i + 1] - level[i];
    level.pop_back();
  }
  return next;
}

double percentage_error(double original, double predicted) {
  if (original == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * std::abs(original - predicted) / std::abs(original);
}

std::vector<PredictionRecord> sliding_prediction(std::span<const double> y, std::size_t window,
                                                 std::size_t first, std::size_t last,
                                                 const OrderGrid& grid) {
  if (window < 19) fail(ErrorKind::Argument, "window must be at least 19 steps");
  if (first <= window) fail(ErrorKind::Argument, "test range must start after the window");
  if (last < first || last >= y.size())
    fail(ErrorKind::Argument, "test range [" + std::to_string(first) + ", " + std::to_string(last) +
                                  "] is outside the series of length " + std::to_string(y.size()));
  std::vector<PredictionRecord> records(last - first + 1);
  parallel_for(records.size(), [&](std::size_t i) {
    const std::size_t t = first + i;
    auto train = y.subspan(t - 1 - window, window + 1);
    auto sel = select_order(train, grid);
    PredictionRecord rec;
    rec.t = t;
    rec.order = sel.order;
    rec.original = y[t];
    rec.predicted = forecast_one(sel.model, train);
    rec.pct_error = percentage_error(rec.original, rec.predicted);
    rec.error_defined = !std::isnan(rec.pct_error);
    records[i] = rec;
  });
  return records;
}

ErrorSummary error_summary(std::span<const PredictionRecord> records, double threshold_pct) {
  ErrorSummary s;
  std::size_t hits = 0;
  double total = 0.0;
  for (const auto& r : records) {
    if (!r.error_defined) {
      ++s.undefined;
      continue;
    }
    ++s.counted;
    total += r.pct_error;
    if (r.pct_error <= threshold_pct) ++hits;
  }
  if (s.counted == 0) fail(ErrorKind::Summary, "no records with a defined percentage error");
  s.fraction = static_cast<double>(hits) / static_cast<double>(s.counted);
  s.mean_error = total / static_cast<double>(s.counted);
  return s;
}

}  // namespace tnf
