/* Copyright 2026 The tnforecast Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the tnforecast library.
 *
 * Every fallible call returns a tnf_status; on failure tnf_last_error()
 * holds a message for the calling thread until its next failing call.
 * Handles are opaque and owned by the caller, who releases them with the
 * matching *_free function. Output buffers are caller-provided: pass a
 * capacity and receive the number of elements the result needs, which may
 * exceed the capacity (nothing past the capacity is written).
 */
#ifndef TNF_TNF_H_
#define TNF_TNF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TNF_API __declspec(dllexport)
#elif defined(TNF_BUILDING_LIBRARY)
#define TNF_API __attribute__((visibility("default")))
#else
#define TNF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tnf_status {
  TNF_OK = 0,
  TNF_E_ARGUMENT = 1,
  TNF_E_IO = 2,
  TNF_E_PARSE = 3,
  TNF_E_CONFIG = 4,
  TNF_E_DATA = 5,
  TNF_E_SUMMARY = 6, /* no defined prediction error to summarize */
  TNF_E_INTERNAL = 7
} tnf_status;

#define TNF_UNREACHABLE ((size_t)-1)

TNF_API const char* tnf_version(void);
TNF_API const char* tnf_status_name(tnf_status status);
TNF_API const char* tnf_last_error(void);

/* ---- snapshot series ---- */

typedef struct tnf_series tnf_series;

/* format: "triple" or "sigcomm"; base_resolution 0 infers it from the data. */
TNF_API tnf_status tnf_series_load(const char* path, const char* format, int64_t base_resolution,
                                   int rebase, int strict, int64_t resolution, tnf_series** out);
TNF_API tnf_status tnf_series_read_dump(const char* path, tnf_series** out);
TNF_API tnf_status tnf_series_write_dump(const tnf_series* series, const char* path);
TNF_API void tnf_series_free(tnf_series* series);

TNF_API size_t tnf_series_length(const tnf_series* series);
TNF_API size_t tnf_series_node_count(const tnf_series* series);
TNF_API int64_t tnf_series_resolution(const tnf_series* series);
/* NULL for an out-of-range node. */
TNF_API const char* tnf_series_node_label(const tnf_series* series, size_t node);

/* Writes a synthetic proximity trace ("t u v" lines, 20 s frames). */
TNF_API tnf_status tnf_write_synthetic_trace(uint64_t seed, size_t snapshots, const char* path);

/* ---- metrics and structural memory ---- */

TNF_API tnf_status tnf_metric_series(const tnf_series* series, const char* property,
                                     int include_persistent, double* out, size_t capacity,
                                     size_t* length);
/* Element k-1 holds the mean overlap at lag k; max_lag 0 picks the default. */
TNF_API tnf_status tnf_overlap_curve(const tnf_series* series, size_t max_lag, double* out,
                                     size_t capacity, size_t* length);
TNF_API tnf_status tnf_select_window(const double* curve, size_t length, double threshold,
                                     size_t* crossing_lag, int* crossed, size_t* window);

typedef struct tnf_stationarity {
  double statistic;
  double critical_value;
  int stationary;
  size_t lags;
} tnf_stationarity;

TNF_API tnf_status tnf_kpss(const double* y, size_t length, tnf_stationarity* out);
TNF_API tnf_status tnf_adf(const double* y, size_t length, tnf_stationarity* out);

/* ---- forecasting ---- */

typedef struct tnf_prediction {
  size_t t;
  double original;
  double predicted;
  double pct_error;
  int error_defined;
  int p, d, q;
  int suitable; /* -1 when no suitability flag was applied */
  double lpsd_ratio;
} tnf_prediction;

typedef struct tnf_error_summary {
  double fraction;
  size_t counted;
  size_t undefined;
  double mean_error;
} tnf_error_summary;

typedef struct tnf_predictions tnf_predictions;

/* One-step forecasts for t in [first, last], each trained on the window + 1
 * values ending at t - 1. */
TNF_API tnf_status tnf_predict(const double* y, size_t length, size_t window, size_t first,
                               size_t last, tnf_predictions** out);
/* theta < 0 selects the automatic cut-off; the value used is stored in
 * theta_used when non-NULL. */
TNF_API tnf_status tnf_predictions_filter(tnf_predictions* predictions, const double* y,
                                          size_t length, double theta, double* theta_used);
TNF_API size_t tnf_predictions_count(const tnf_predictions* predictions);
TNF_API tnf_status tnf_predictions_get(const tnf_predictions* predictions, size_t index,
                                       tnf_prediction* out);
/* filtered != 0 restricts the summary to suitable records. */
TNF_API tnf_status tnf_predictions_summary(const tnf_predictions* predictions,
                                           double threshold_pct, int filtered,
                                           tnf_error_summary* out);
TNF_API void tnf_predictions_free(tnf_predictions* predictions);

/* ---- spectral ---- */

typedef struct tnf_psd_bins {
  double lpsd;
  double mpsd;
  double hpsd;
} tnf_psd_bins;

/* taper: "rect" or "hann". Produces length / 2 + 1 bins. */
TNF_API tnf_status tnf_segment_psd(const double* segment, size_t length, const char* taper,
                                   double* out, size_t capacity, size_t* bins);
TNF_API tnf_status tnf_band_power(const double* psd, size_t bins, tnf_psd_bins* out);

/* ---- temporal reachability and attacks ---- */

TNF_API tnf_status tnf_temporal_distance(const tnf_series* series, size_t from, size_t to,
                                         size_t first, size_t last, size_t* distance);
TNF_API tnf_status tnf_temporal_efficiency(const tnf_series* series, size_t first, size_t last,
                                           double* efficiency);

typedef struct tnf_attack_point {
  double fraction;
  double robustness;
  size_t removed;
} tnf_attack_point;

/* strategy: "random", "avg_deg" or "pred_deg". For "random" the curve is the
 * mean over random_seeds seeds starting at seed. The curve starts at P = 0,
 * so it holds fraction_count + 1 points unless 0 was listed. */
TNF_API tnf_status tnf_attack(const tnf_series* series, const char* strategy,
                              const double* fractions, size_t fraction_count, size_t first,
                              size_t last, uint64_t seed, size_t window, size_t random_seeds,
                              tnf_attack_point* out, size_t capacity, size_t* points);

/* ---- configured pipeline ---- */

typedef struct tnf_config tnf_config;

TNF_API tnf_status tnf_config_new(tnf_config** out);
TNF_API tnf_status tnf_config_load(const char* path, tnf_config** out);
/* Keys use the file's dotted form, e.g. "dataset.infocom.path". */
TNF_API tnf_status tnf_config_set(tnf_config* config, const char* key, const char* value);
/* Copies the value into buf; returns TNF_E_ARGUMENT when the key is unset. */
TNF_API tnf_status tnf_config_get(const tnf_config* config, const char* key, char* buf,
                                  size_t capacity, size_t* length);
/* Dataset names in declaration order. */
TNF_API size_t tnf_config_dataset_count(const tnf_config* config);
TNF_API tnf_status tnf_config_dataset_name(const tnf_config* config, size_t index, char* buf,
                                           size_t capacity, size_t* length);
/* Checks the configuration without running anything. */
TNF_API tnf_status tnf_config_validate(const tnf_config* config);
TNF_API void tnf_config_free(tnf_config* config);

typedef void (*tnf_write_fn)(const char* text, size_t length, void* user);

/* stage: ingest, metrics, window, predict, spectro, attack, report or all.
 * dataset NULL selects the first configured dataset; out NULL keeps the
 * default artifact paths. Progress text goes to log (may be NULL). */
TNF_API tnf_status tnf_run_stage(const tnf_config* config, const char* stage,
                                 const char* dataset, const char* out, tnf_write_fn log,
                                 void* user);

#ifdef __cplusplus
}
#endif

#endif /* TNF_TNF_H_ */
