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

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "tnf/arima.hpp"
#include "tnf/error.hpp"

using namespace tnf;

namespace {

std::vector<double> ar1(std::size_t n, double phi, double c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> y(n);
  double x = c / (1.0 - phi);
  for (int burn = 0; burn < 200; ++burn) x = c + phi * x + g(rng);
  for (auto& v : y) v = (x = c + phi * x + g(rng));
  return y;
}

std::vector<double> ma1(std::size_t n, double theta, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> y(n);
  double prev = g(rng);
  for (auto& v : y) {
    const double e = g(rng);
    v = e + theta * prev;
    prev = e;
  }
  return y;
}

}  // namespace

TEST_CASE("differencing") {
  const std::vector<double> lin{1, 2, 3, 4}, sq{1, 4, 9, 16};
  CHECK(difference(lin, 1) == std::vector<double>{1, 1, 1});
  CHECK(difference(lin, 0) == lin);
  CHECK(difference(sq, 2) == std::vector<double>{2, 2});
  CHECK_THROWS_AS(difference(std::vector<double>{1, 2}, 2), Error);
}

TEST_CASE("integration inverts differencing") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int d = 0; d <= 2; ++d) {
    std::vector<double> y(30);
    for (auto& v : y) v = g(rng) * 10.0;
    const auto z = difference(y, d);
    const auto back = integrate(z, std::span<const double>(y.data(), static_cast<std::size_t>(d)), d);
    REQUIRE(back.size() == y.size());
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == doctest::Approx(y[i]).epsilon(1e-12));
  }
}

TEST_CASE("forecast recursion") {
  std::vector<double> history(30);
  std::iota(history.begin(), history.end(), 12.0);
  history.back() = 41.0;
  ArimaModel rw;
  rw.order = {0, 1, 0};
  CHECK(forecast_one(rw, history) == 41.0);

  ArimaModel ar;
  ar.order = {1, 0, 0};
  ar.ar = {0.5};
  history.back() = 10.0;
  CHECK(forecast_one(ar, history) == doctest::Approx(5.0));

  ArimaModel deg;
  deg.order = {2, 1, 1};
  deg.degenerate = true;
  CHECK(forecast_one(deg, history) == 10.0);
}

TEST_CASE("fitted AR(1) forecast equals hand recursion") {
  std::mt19937_64 rng(2);
  const auto y = ar1(200, 0.6, 1.0, rng);
  const auto model = fit_arima(y, {1, 0, 0});
  REQUIRE(model.ar.size() == 1);
  CHECK(forecast_one(model, y) == doctest::Approx(model.intercept + model.ar[0] * y.back()));

  // d = 1: forecast the difference, then add the last level back
  std::vector<double> walk(y.size());
  std::partial_sum(y.begin(), y.end(), walk.begin());
  const auto m1 = fit_arima(walk, {1, 1, 0});
  const double dz = walk.back() - walk[walk.size() - 2];
  CHECK(forecast_one(m1, walk) == doctest::Approx(walk.back() + m1.intercept + m1.ar[0] * dz));
}

TEST_CASE("AR(1) recovery") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const auto fit = fit_arma(ar1(500, 0.8, 0.0, rng), 1, 0);
    hits += std::abs(fit.ar[0] - 0.8) <= 0.1;
  }
  CHECK(hits >= 45);
}

TEST_CASE("AR estimates tighten as the sample grows") {
  double err[3] = {0, 0, 0};
  const std::size_t sizes[3] = {100, 400, 1600};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (int k = 0; k < 3; ++k) {
      std::mt19937_64 rng(1000 + seed);
      const auto fit = fit_arma(ar1(sizes[k], 0.5, 0.0, rng), 1, 0);
      err[k] += std::abs(fit.ar[0] - 0.5);
    }
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
}

TEST_CASE("MA(1) recovery") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(500 + seed);
    const auto fit = fit_arma(ma1(1000, 0.5, rng), 0, 1);
    REQUIRE(fit.ma.size() == 1);
    hits += std::abs(fit.ma[0] - 0.5) <= 0.1;
  }
  CHECK(hits >= 18);
}

TEST_CASE("white noise ARMA(0,0) is the sample mean and variance") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(5.0, 2.0);
  std::vector<double> y(400);
  for (auto& v : y) v = g(rng);
  const auto fit = fit_arma(y, 0, 0);
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 400.0;
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= 400.0;
  CHECK(fit.intercept == doctest::Approx(mean));
  CHECK(fit.sigma2 == doctest::Approx(var));
}

TEST_CASE("flat window is degenerate") {
  const std::vector<double> flat(40, 3.0);
  CHECK(fit_arma(flat, 1, 1).degenerate);
  const auto sel = select_order(flat);
  CHECK(sel.fallback);
  CHECK(sel.order == ArimaOrder{0, 1, 0});
  CHECK(forecast_one(sel.model, flat) == 3.0);
}

TEST_CASE("order selection") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  SUBCASE("white noise picks an order close to (0,0,0) in AICc") {
    std::vector<double> y(65);
    for (auto& v : y) v = g(rng);
    const auto sel = select_order(y);
    CHECK(sel.order.d == 0);
    ArmaFitOptions opts;
    opts.condition_on = 3;
    const double base = aicc(fit_arma(y, 0, 0, opts), 0, 0);
    const double chosen = aicc(fit_arma(y, sel.order.p, sel.order.q, opts), sel.order.p, sel.order.q);
    CHECK(chosen <= base + 2.0);
  }
  SUBCASE("random walk picks d = 1") {
    std::vector<double> y(129);
    double x = 0.0;
    for (auto& v : y) v = (x += g(rng));
    CHECK(select_order(y).order.d >= 1);
  }
  SUBCASE("ramp with noise is differenced") {
    std::vector<double> y(65);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 2.0 * static_cast<double>(i) + 0.1 * g(rng);
    CHECK(select_order(y).order.d >= 1);
  }
}

TEST_CASE("percentage error") {
  CHECK(percentage_error(50.0, 40.0) == doctest::Approx(20.0));
  CHECK(std::isnan(percentage_error(0.0, 1.0)));
}

TEST_CASE("sliding prediction contract") {
  std::mt19937_64 rng(5);
  const auto y = ar1(200, 0.5, 10.0, rng);
  CHECK_THROWS_AS(sliding_prediction(y, 18, 40, 50), Error);
  CHECK_THROWS_AS(sliding_prediction(y, 32, 32, 50), Error);
  CHECK_THROWS_AS(sliding_prediction(y, 32, 40, 200), Error);

  const auto recs = sliding_prediction(y, 32, 150, 160);
  REQUIRE(recs.size() == 11);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].t == 150 + i);
    CHECK(recs[i].original == y[150 + i]);
  }

  SUBCASE("constant series predicts exactly") {
    const std::vector<double> flat(100, 7.0);
    for (const auto& r : sliding_prediction(flat, 32, 40, 99)) CHECK(r.pct_error == 0.0);
  }
  SUBCASE("data outside the training window is irrelevant") {
    auto z = y;
    for (std::size_t i = 0; i < 150 - 1 - 32; ++i) z[i] += 100.0;
    for (std::size_t i = 151; i < z.size(); ++i) z[i] -= 50.0;
    const auto a = sliding_prediction(y, 32, 150, 150);
    const auto b = sliding_prediction(z, 32, 150, 150);
    CHECK(a[0].predicted == b[0].predicted);
  }
  SUBCASE("percentage errors are scale invariant") {
    auto z = y;
    for (auto& v : z) v *= 3.7;
    const auto a = sliding_prediction(y, 32, 150, 155);
    const auto b = sliding_prediction(z, 32, 150, 155);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].order.d == b[i].order.d);
      CHECK(a[i].pct_error == doctest::Approx(b[i].pct_error).epsilon(1e-6));
    }
  }
}

TEST_CASE("one-step errors track the innovation scale") {
  // AR(1) around a large mean: forecast errors should be close to N(0, 1)
  std::mt19937_64 rng(6);
  const auto y = ar1(400, 0.7, 30.0, rng);
  const auto recs = sliding_prediction(y, 64, 100, 399);
  double sse = 0.0;
  for (const auto& r : recs) sse += (r.original - r.predicted) * (r.original - r.predicted);
  const double rmse = std::sqrt(sse / static_cast<double>(recs.size()));
  CHECK(rmse > 0.85);
  CHECK(rmse < 1.3);
}

TEST_CASE("error summary") {
  std::vector<PredictionRecord> recs(2);
  recs[0].pct_error = 10;
  recs[1].pct_error = 30;
  auto s = error_summary(recs, 20.0);
  CHECK(s.fraction == 0.5);
  CHECK(s.mean_error == 20.0);
  recs[1].error_defined = false;
  s = error_summary(recs, 20.0);
  CHECK(s.fraction == 1.0);
  CHECK(s.undefined == 1);
  recs[0].error_defined = false;
  CHECK_THROWS_AS(error_summary(recs, 20.0), Error);
}
