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

#include "tnf/tnf.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "tnf/arima.hpp"
#include "tnf/attack.hpp"
#include "tnf/config.hpp"
#include "tnf/error.hpp"
#include "tnf/graph_metrics.hpp"
#include "tnf/ingest.hpp"
#include "tnf/pipeline.hpp"
#include "tnf/series_analysis.hpp"
#include "tnf/spectral.hpp"
#include "tnf/synthetic.hpp"

struct tnf_series {
  tnf::SnapshotSeries series;
};

struct tnf_predictions {
  std::vector<tnf::PredictionRecord> records;
  std::size_t window = 0;
};

struct tnf_config {
  tnf::Settings settings;
};

namespace {

thread_local std::string g_last_error;

tnf_status status_of(tnf::ErrorKind kind) {
  switch (kind) {
    case tnf::ErrorKind::Argument: return TNF_E_ARGUMENT;
    case tnf::ErrorKind::Io: return TNF_E_IO;
    case tnf::ErrorKind::Parse: return TNF_E_PARSE;
    case tnf::ErrorKind::Config: return TNF_E_CONFIG;
    case tnf::ErrorKind::Data: return TNF_E_DATA;
    case tnf::ErrorKind::Summary: return TNF_E_SUMMARY;
    case tnf::ErrorKind::Internal: return TNF_E_INTERNAL;
  }
  return TNF_E_INTERNAL;
}

tnf_status set_error(tnf_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <class F>
tnf_status guarded(F&& body) {
  try {
    body();
    return TNF_OK;
  } catch (const tnf::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(TNF_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(TNF_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(TNF_E_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) tnf::fail(tnf::ErrorKind::Argument, what);
}

template <class T>
void copy_out(const std::vector<T>& src, T* out, std::size_t capacity, std::size_t* length) {
  if (length) *length = src.size();
  if (out) std::copy_n(src.begin(), std::min(capacity, src.size()), out);
}

std::span<const double> view(const double* y, std::size_t n) {
  require(y != nullptr || n == 0, "null series");
  return {y, n};
}

std::vector<std::string> dataset_names(const tnf::Settings& settings) {
  std::vector<std::string> names;
  for (const auto& key : settings.order()) {
    if (key.rfind("dataset.", 0) != 0) continue;
    const auto rest = key.substr(8);
    const auto dot = rest.rfind('.');
    if (dot == std::string::npos || dot == 0) continue;
    auto name = rest.substr(0, dot);
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(std::move(name));
  }
  return names;
}

void copy_string(const std::string& v, char* buf, std::size_t capacity, std::size_t* length) {
  if (length) *length = v.size();
  if (buf && capacity > 0) {
    const auto n = std::min(capacity - 1, v.size());
    std::memcpy(buf, v.data(), n);
    buf[n] = '\0';
  }
}

void fill(const tnf::StationarityReport& r, tnf_stationarity* out) {
  out->statistic = r.statistic;
  out->critical_value = r.critical_value_5pct;
  out->stationary = r.decision == tnf::Stationarity::Stationary;
  out->lags = r.lags;
}

}  // namespace

extern "C" {

const char* tnf_version(void) { return "0.1.0"; }

const char* tnf_status_name(tnf_status status) {
  switch (status) {
    case TNF_OK: return "ok";
    case TNF_E_ARGUMENT: return "argument";
    case TNF_E_IO: return "io";
    case TNF_E_PARSE: return "parse";
    case TNF_E_CONFIG: return "config";
    case TNF_E_DATA: return "data";
    case TNF_E_SUMMARY: return "summary";
    case TNF_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tnf_last_error(void) { return g_last_error.c_str(); }

tnf_status tnf_series_load(const char* path, const char* format, int64_t base_resolution,
                           int rebase, int strict, int64_t resolution, tnf_series** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    tnf::ParseOptions opts;
    if (format) opts.format = tnf::parse_input_format(format);
    opts.base_resolution = base_resolution;
    opts.rebase = rebase != 0;
    opts.strict = strict != 0;
    const auto log = tnf::load_contacts(path, opts);
    auto s = std::make_unique<tnf_series>();
    s->series = tnf::aggregate_snapshots(log, resolution);
    *out = s.release();
  });
}

tnf_status tnf_series_read_dump(const char* path, tnf_series** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    std::ifstream in(path);
    if (!in) tnf::fail(tnf::ErrorKind::Io, std::string("cannot open ") + path);
    auto s = std::make_unique<tnf_series>();
    s->series = tnf::read_snapshot_dump(in);
    *out = s.release();
  });
}

tnf_status tnf_series_write_dump(const tnf_series* series, const char* path) {
  return guarded([&] {
    require(series && path, "null argument");
    std::ofstream f(path);
    if (!f) tnf::fail(tnf::ErrorKind::Io, std::string("cannot write ") + path);
    tnf::write_snapshot_dump(f, series->series);
    if (!f) tnf::fail(tnf::ErrorKind::Io, std::string("write failed: ") + path);
  });
}

void tnf_series_free(tnf_series* series) { delete series; }

size_t tnf_series_length(const tnf_series* series) { return series ? series->series.size() : 0; }

size_t tnf_series_node_count(const tnf_series* series) {
  return series ? series->series.node_count() : 0;
}

int64_t tnf_series_resolution(const tnf_series* series) {
  return series ? series->series.resolution() : 0;
}

const char* tnf_series_node_label(const tnf_series* series, size_t node) {
  if (!series || node >= series->series.node_count()) return nullptr;
  return series->series.nodes().label(static_cast<tnf::NodeId>(node)).c_str();
}

tnf_status tnf_write_synthetic_trace(uint64_t seed, size_t snapshots, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null path");
    tnf::SyntheticParams params;
    params.seed = seed;
    if (snapshots) params.snapshots = snapshots;
    const auto log = tnf::synthesize_contacts(params);
    std::ofstream f(path);
    if (!f) tnf::fail(tnf::ErrorKind::Io, std::string("cannot write ") + path);
    tnf::write_triples(f, log);
    if (!f) tnf::fail(tnf::ErrorKind::Io, std::string("write failed: ") + path);
  });
}

tnf_status tnf_metric_series(const tnf_series* series, const char* property,
                             int include_persistent, double* out, size_t capacity,
                             size_t* length) {
  return guarded([&] {
    require(series && property, "null argument");
    tnf::MetricOptions opts;
    opts.include_persistent_emergence = include_persistent != 0;
    const auto m = tnf::metric_series(series->series, tnf::parse_property(property), opts);
    copy_out(m.values, out, capacity, length);
  });
}

tnf_status tnf_overlap_curve(const tnf_series* series, size_t max_lag, double* out,
                             size_t capacity, size_t* length) {
  return guarded([&] {
    require(series != nullptr, "null series");
    const auto lag = max_lag ? max_lag : tnf::default_max_lag(series->series.size());
    const auto curve = tnf::overlap_decay(series->series, lag);
    copy_out(curve.mean_overlap, out, capacity, length);
  });
}

tnf_status tnf_select_window(const double* curve, size_t length, double threshold,
                             size_t* crossing_lag, int* crossed, size_t* window) {
  return guarded([&] {
    require(curve && length > 0, "empty overlap curve");
    tnf::OverlapCurve c;
    for (size_t k = 0; k < length; ++k) {
      c.lags.push_back(k + 1);
      c.mean_overlap.push_back(curve[k]);
    }
    const auto choice = tnf::select_window(c, threshold);
    if (crossing_lag) *crossing_lag = choice.crossing_lag;
    if (crossed) *crossed = choice.crossed;
    if (window) *window = choice.window;
  });
}

tnf_status tnf_kpss(const double* y, size_t length, tnf_stationarity* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    fill(tnf::kpss_test(view(y, length)), out);
  });
}

tnf_status tnf_adf(const double* y, size_t length, tnf_stationarity* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    fill(tnf::adf_test(view(y, length)), out);
  });
}

tnf_status tnf_predict(const double* y, size_t length, size_t window, size_t first, size_t last,
                       tnf_predictions** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = nullptr;
    auto p = std::make_unique<tnf_predictions>();
    p->records = tnf::sliding_prediction(view(y, length), window, first, last);
    p->window = window;
    *out = p.release();
  });
}

tnf_status tnf_predictions_filter(tnf_predictions* predictions, const double* y, size_t length,
                                  double theta, double* theta_used) {
  return guarded([&] {
    require(predictions != nullptr, "null predictions");
    require(!predictions->records.empty(), "no predictions to filter");
    const auto series = view(y, length);
    const auto window = predictions->window;
    require(predictions->records.back().t < length, "series shorter than the predictions");
    if (std::isnan(theta) || theta < 0)
      theta = tnf::auto_theta(series, window, predictions->records.front().t);
    tnf::apply_suitability(predictions->records, series, window, theta);
    if (theta_used) *theta_used = theta;
  });
}

size_t tnf_predictions_count(const tnf_predictions* predictions) {
  return predictions ? predictions->records.size() : 0;
}

tnf_status tnf_predictions_get(const tnf_predictions* predictions, size_t index,
                               tnf_prediction* out) {
  return guarded([&] {
    require(predictions && out, "null argument");
    require(index < predictions->records.size(), "prediction index out of range");
    const auto& r = predictions->records[index];
    out->t = r.t;
    out->original = r.original;
    out->predicted = r.predicted;
    out->pct_error = r.pct_error;
    out->error_defined = r.error_defined;
    out->p = r.order.p;
    out->d = r.order.d;
    out->q = r.order.q;
    out->suitable = r.suitable ? (*r.suitable ? 1 : 0) : -1;
    out->lpsd_ratio = r.lpsd_ratio;
  });
}

tnf_status tnf_predictions_summary(const tnf_predictions* predictions, double threshold_pct,
                                   int filtered, tnf_error_summary* out) {
  return guarded([&] {
    require(predictions && out, "null argument");
    tnf::ErrorSummary s;
    if (filtered) {
      std::vector<tnf::PredictionRecord> kept;
      for (const auto& r : predictions->records)
        if (r.suitable.value_or(false)) kept.push_back(r);
      s = tnf::error_summary(kept, threshold_pct);
    } else {
      s = tnf::error_summary(predictions->records, threshold_pct);
    }
    out->fraction = s.fraction;
    out->counted = s.counted;
    out->undefined = s.undefined;
    out->mean_error = s.mean_error;
  });
}

void tnf_predictions_free(tnf_predictions* predictions) { delete predictions; }

tnf_status tnf_segment_psd(const double* segment, size_t length, const char* taper, double* out,
                           size_t capacity, size_t* bins) {
  return guarded([&] {
    const auto t = taper ? tnf::parse_taper(taper) : tnf::Taper::Rectangular;
    copy_out(tnf::segment_psd(view(segment, length), t), out, capacity, bins);
  });
}

tnf_status tnf_band_power(const double* psd, size_t bins, tnf_psd_bins* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto b = tnf::psd_bins(view(psd, bins));
    out->lpsd = b.lpsd;
    out->mpsd = b.mpsd;
    out->hpsd = b.hpsd;
  });
}

tnf_status tnf_temporal_distance(const tnf_series* series, size_t from, size_t to, size_t first,
                                 size_t last, size_t* distance) {
  return guarded([&] {
    require(series && distance, "null argument");
    const auto n = series->series.node_count();
    require(from < n && to < n, "node index out of range");
    *distance = tnf::temporal_distance(series->series, static_cast<tnf::NodeId>(from),
                                       static_cast<tnf::NodeId>(to), {first, last});
  });
}

tnf_status tnf_temporal_efficiency(const tnf_series* series, size_t first, size_t last,
                                   double* efficiency) {
  return guarded([&] {
    require(series && efficiency, "null argument");
    std::vector<tnf::NodeId> all(series->series.node_count());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<tnf::NodeId>(i);
    *efficiency = tnf::temporal_efficiency(series->series, {first, last}, all);
  });
}

tnf_status tnf_attack(const tnf_series* series, const char* strategy, const double* fractions,
                      size_t fraction_count, size_t first, size_t last, uint64_t seed,
                      size_t window, size_t random_seeds, tnf_attack_point* out, size_t capacity,
                      size_t* points) {
  return guarded([&] {
    require(series && strategy, "null argument");
    const auto f = view(fractions, fraction_count);
    tnf::AttackOptions opts;
    opts.strategy = tnf::parse_strategy(strategy);
    opts.fractions.assign(f.begin(), f.end());
    opts.interval = {first, last};
    opts.seed = seed;
    if (window) opts.window = window;
    const auto curve = opts.strategy == tnf::AttackStrategy::Random && random_seeds > 1
                           ? tnf::mean_random_curve(series->series, opts, random_seeds)
                           : tnf::run_attack(series->series, opts);
    std::vector<tnf_attack_point> pts;
    for (const auto& p : curve.points) pts.push_back({p.fraction, p.robustness, p.removed});
    copy_out(pts, out, capacity, points);
  });
}

tnf_status tnf_config_new(tnf_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new tnf_config();
  });
}

tnf_status tnf_config_load(const char* path, tnf_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto c = std::make_unique<tnf_config>();
    c->settings = tnf::Settings::load(path);
    *out = c.release();
  });
}

tnf_status tnf_config_set(tnf_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    config->settings.set(key, value);
  });
}

tnf_status tnf_config_get(const tnf_config* config, const char* key, char* buf, size_t capacity,
                          size_t* length) {
  return guarded([&] {
    require(config && key, "null argument");
    const auto v = config->settings.get(key);
    if (!v) tnf::fail(tnf::ErrorKind::Argument, std::string("unset key: ") + key);
    copy_string(*v, buf, capacity, length);
  });
}

size_t tnf_config_dataset_count(const tnf_config* config) {
  return config ? dataset_names(config->settings).size() : 0;
}

tnf_status tnf_config_dataset_name(const tnf_config* config, size_t index, char* buf,
                                   size_t capacity, size_t* length) {
  return guarded([&] {
    require(config != nullptr, "null config");
    const auto names = dataset_names(config->settings);
    require(index < names.size(), "dataset index out of range");
    copy_string(names[index], buf, capacity, length);
  });
}

tnf_status tnf_config_validate(const tnf_config* config) {
  return guarded([&] {
    require(config != nullptr, "null config");
    (void)tnf::RunConfig::from_settings(config->settings);
  });
}

void tnf_config_free(tnf_config* config) { delete config; }

tnf_status tnf_run_stage(const tnf_config* config, const char* stage, const char* dataset,
                         const char* out, tnf_write_fn log, void* user) {
  return guarded([&] {
    require(config && stage, "null argument");
    const auto cfg = tnf::RunConfig::from_settings(config->settings);
    tnf::StageRequest req;
    req.stage = stage;
    if (dataset) req.dataset = dataset;
    if (out) req.out = std::filesystem::path(out);

    // Forward log text line by line so callers see progress as it happens.
    struct Forward : std::stringbuf {
      tnf_write_fn fn;
      void* user;
      int sync() override {
        const auto s = str();
        if (fn && !s.empty()) fn(s.data(), s.size(), user);
        str({});
        return 0;
      }
    } buf;
    buf.fn = log;
    buf.user = user;
    std::ostream os(&buf);
    try {
      tnf::run_stage(cfg, req, os);
    } catch (...) {
      os.flush();
      throw;
    }
    os.flush();
  });
}

}  // extern "C"
