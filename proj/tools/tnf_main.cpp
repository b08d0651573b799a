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

// tnf: command-line front end over the libtnf C interface.

#include <tnf/tnf.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

int exit_code(tnf_status s) {
  switch (s) {
    case TNF_OK: return kExitOk;
    case TNF_E_ARGUMENT:
    case TNF_E_CONFIG: return kExitConfig;
    case TNF_E_IO:
    case TNF_E_PARSE:
    case TNF_E_DATA:
    case TNF_E_SUMMARY: return kExitData;
    case TNF_E_INTERNAL: return kExitFailure;
  }
  return kExitFailure;
}

struct ConfigDeleter {
  void operator()(tnf_config* c) const { tnf_config_free(c); }
};
using ConfigPtr = std::unique_ptr<tnf_config, ConfigDeleter>;

struct Options {
  std::string config;
  std::string input;
  std::string dataset;
  std::string format;
  std::optional<long long> resolution;
  std::optional<long long> base_resolution;
  bool strict = false;
  bool rebase = false;
  std::string property;
  std::string window;
  std::string range;
  std::optional<double> threshold;
  std::optional<std::size_t> max_lag;
  bool filter_spectro = false;
  bool no_filter_spectro = false;
  std::string theta;
  std::optional<std::size_t> hop;
  std::string taper;
  std::string strategy;
  std::string fractions;
  std::string interval;
  std::optional<std::size_t> seeds;
  std::optional<unsigned long long> seed;
  std::string out;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config, "configuration file");
  cmd->add_option("-i,--input", o.input, "contact trace (overrides the dataset path)");
  cmd->add_option("-d,--dataset", o.dataset, "dataset name from the configuration");
  cmd->add_option("--format", o.format, "input format: triple or sigcomm");
  cmd->add_option("--resolution", o.resolution, "snapshot resolution in seconds");
  cmd->add_option("--base-resolution", o.base_resolution, "native sampling period in seconds");
  cmd->add_flag("--strict", o.strict, "fail on the first malformed line");
  cmd->add_flag("--rebase", o.rebase, "shift times so the first event is at 0");
  cmd->add_option("--seed", o.seed, "master random seed");
  cmd->add_option("-o,--out", o.out, "output file for single-artifact stages");
  cmd->add_option("--out-dir", o.out_dir, "output directory (overrides TNF_OUTPUT_DIR)");
}

void add_forecast(CLI::App* cmd, Options& o) {
  cmd->add_option("--property", o.property, "comma-separated properties, or 'all'");
  cmd->add_option("--range", o.range, "test steps first:last (inclusive)");
  cmd->add_option("--threshold", o.threshold, "percentage error threshold");
  cmd->add_flag("--filter-spectro", o.filter_spectro, "apply spectrogram suitability filtering");
  cmd->add_flag("--no-filter-spectro", o.no_filter_spectro, "disable suitability filtering");
  cmd->add_option("--theta", o.theta, "suitability cut-off, or 'auto'");
}

class Runner {
 public:
  explicit Runner(Options& o) : o_(o) {}

  int run(const std::string& stage) {
    tnf_config* raw = nullptr;
    tnf_status s = o_.config.empty() ? tnf_config_new(&raw) : tnf_config_load(o_.config.c_str(), &raw);
    ConfigPtr cfg(raw);
    if (s != TNF_OK) return report(s);
    if (!apply(cfg.get(), stage)) return report(last_);
    s = tnf_run_stage(cfg.get(), stage.c_str(), o_.dataset.empty() ? nullptr : o_.dataset.c_str(),
                      o_.out.empty() ? nullptr : o_.out.c_str(), &Runner::write, nullptr);
    return report(s);
  }

 private:
  static void write(const char* text, std::size_t n, void*) {
    std::fwrite(text, 1, n, stdout);
    std::fflush(stdout);
  }

  int report(tnf_status s) {
    if (s != TNF_OK) std::cerr << "tnf: " << tnf_last_error() << '\n';
    return exit_code(s);
  }

  bool set(tnf_config* c, const std::string& key, const std::string& value) {
    last_ = tnf_config_set(c, key.c_str(), value.c_str());
    return last_ == TNF_OK;
  }

  bool apply(tnf_config* c, const std::string& stage) {
    // Precedence: flags, then TNF_OUTPUT_DIR, then the file.
    if (const char* env = std::getenv("TNF_OUTPUT_DIR"); env && *env) {
      if (!set(c, "output_dir", env)) return false;
    }
    std::vector<std::pair<std::string, std::string>> kv;
    if (!o_.out_dir.empty()) kv.emplace_back("output_dir", o_.out_dir);
    if (o_.resolution) kv.emplace_back("resolution", std::to_string(*o_.resolution));
    if (o_.seed) kv.emplace_back("seed", std::to_string(*o_.seed));
    if (!o_.property.empty()) kv.emplace_back("predict.properties", o_.property);
    if (o_.threshold)
      kv.emplace_back(stage == "window" ? "window.threshold" : "predict.threshold", std::to_string(*o_.threshold));
    if (o_.max_lag) kv.emplace_back("window.max_lag", std::to_string(*o_.max_lag));
    if (o_.filter_spectro) kv.emplace_back("spectro.filter", "true");
    if (o_.no_filter_spectro) kv.emplace_back("spectro.filter", "false");
    if (!o_.theta.empty()) kv.emplace_back("spectro.theta", o_.theta);
    if (o_.hop) kv.emplace_back("spectro.hop", std::to_string(*o_.hop));
    if (!o_.taper.empty()) kv.emplace_back("spectro.spectrogram_taper", o_.taper);
    if (!o_.strategy.empty()) kv.emplace_back("attack.strategies", o_.strategy);
    if (!o_.fractions.empty()) kv.emplace_back("attack.fractions", o_.fractions);
    if (o_.seeds) kv.emplace_back("attack.seeds", std::to_string(*o_.seeds));
    if (stage == "spectro" && !o_.window.empty()) kv.emplace_back("spectro.window", o_.window);

    const bool per_dataset = !o_.input.empty() || !o_.format.empty() || o_.base_resolution ||
                             o_.strict || o_.rebase || !o_.range.empty() || !o_.interval.empty() ||
                             (stage != "spectro" && !o_.window.empty());
    if (per_dataset) {
      if (o_.dataset.empty()) o_.dataset = first_dataset(c);
      const std::string p = "dataset." + o_.dataset + ".";
      if (!o_.input.empty()) kv.emplace_back(p + "path", o_.input);
      if (!o_.format.empty()) kv.emplace_back(p + "format", o_.format);
      if (o_.base_resolution) kv.emplace_back(p + "base_resolution", std::to_string(*o_.base_resolution));
      if (o_.strict) kv.emplace_back(p + "strict", "true");
      if (o_.rebase) kv.emplace_back(p + "rebase", "true");
      if (!o_.range.empty()) kv.emplace_back(p + "range", o_.range);
      if (!o_.interval.empty()) kv.emplace_back(p + "attack_interval", o_.interval);
      if (stage != "spectro" && !o_.window.empty()) kv.emplace_back(p + "window", o_.window);
    }
    for (const auto& [k, v] : kv) {
      if (!set(c, k, v)) return false;
    }
    return true;
  }

  // Name of the first dataset declared in the file, or "input" when none.
  static std::string first_dataset(tnf_config* c) {
    if (tnf_config_dataset_count(c) == 0) return "input";
    std::size_t n = 0;
    if (tnf_config_dataset_name(c, 0, nullptr, 0, &n) != TNF_OK) return "input";
    std::string name(n + 1, '\0');
    tnf_config_dataset_name(c, 0, name.data(), name.size(), &n);
    name.resize(n);
    return name;
  }

  Options& o_;
  tnf_status last_ = TNF_OK;
};

// Forecast accuracy as a function of the training window, one CSV row per
// window: window,records,fraction,mean_error.
int sweep(const std::string& input, const std::string& format, long long resolution,
          const std::string& property, const std::vector<std::size_t>& windows,
          const std::string& range, double threshold) {
  auto fail = [](tnf_status s) {
    std::cerr << "tnf: " << tnf_last_error() << '\n';
    return exit_code(s);
  };
  std::size_t first = 0, last = 0;
  if (const auto colon = range.find(':'); colon == std::string::npos ||
      std::sscanf(range.c_str(), "%zu:%zu", &first, &last) != 2 || last < first) {
    std::cerr << "tnf: --range must be 'first:last'\n";
    return kExitConfig;
  }
  tnf_series* raw = nullptr;
  tnf_status s = tnf_series_load(input.c_str(), format.c_str(), 0, 0, 0, resolution, &raw);
  if (s != TNF_OK) return fail(s);
  std::unique_ptr<tnf_series, void (*)(tnf_series*)> series(raw, tnf_series_free);
  std::size_t n = 0;
  if ((s = tnf_metric_series(series.get(), property.c_str(), 0, nullptr, 0, &n)) != TNF_OK) return fail(s);
  std::vector<double> y(n);
  tnf_metric_series(series.get(), property.c_str(), 0, y.data(), y.size(), &n);

  std::cout << "window,records,fraction,mean_error\n";
  for (auto w : windows) {
    tnf_predictions* pr = nullptr;
    if ((s = tnf_predict(y.data(), y.size(), w, first, last, &pr)) != TNF_OK) {
      if (s != TNF_E_ARGUMENT) return fail(s);
      std::cerr << "tnf: skipping window " << w << ": " << tnf_last_error() << '\n';
      continue;
    }
    tnf_error_summary sum{};
    s = tnf_predictions_summary(pr, threshold, 0, &sum);
    const auto count = tnf_predictions_count(pr);
    tnf_predictions_free(pr);
    if (s != TNF_OK) return fail(s);
    std::cout << w << ',' << count << ',' << sum.fraction << ',' << sum.mean_error << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal network property forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tnf_version()));
  Options o;

  const std::vector<std::pair<std::string, std::string>> stages{
      {"ingest", "parse a contact trace and write the snapshot dump"},
      {"metrics", "compute the per-snapshot property series"},
      {"window", "overlap decay curve and forecasting window"},
      {"predict", "sliding-window ARIMA prediction"},
      {"spectro", "spectrogram of each property series"},
      {"attack", "temporal robustness under node removal"},
      {"report", "assemble the summary table from finished runs"},
      {"all", "run every stage for every configured dataset"},
  };
  std::string chosen;
  for (const auto& [name, help] : stages) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, o);
    if (name == "window") {
      cmd->add_option("--max-lag", o.max_lag, "longest lag of the overlap curve");
      cmd->add_option("--threshold", o.threshold, "overlap threshold");
    }
    if (name == "metrics") cmd->add_option("--property", o.property, "comma-separated properties, or 'all'");
    if (name == "window" || name == "predict" || name == "spectro" || name == "attack" || name == "all")
      cmd->add_option("--window", o.window, name == "spectro" ? "spectrogram window (power of two)"
                                                              : "forecasting window, or 'auto'");
    if (name == "predict" || name == "all") add_forecast(cmd, o);
    if (name == "spectro") {
      cmd->add_option("--property", o.property, "comma-separated properties, or 'all'");
      cmd->add_option("--hop", o.hop, "segment hop");
      cmd->add_option("--taper", o.taper, "rect or hann");
    }
    if (name == "attack" || name == "all") {
      cmd->add_option("--strategy", o.strategy, "random, avg_deg, pred_deg (comma-separated)");
      cmd->add_option("--fractions", o.fractions, "removal fractions, 'a:b:step' or a list");
      cmd->add_option("--interval", o.interval, "attack interval first:last");
      cmd->add_option("--seeds", o.seeds, "random-strategy seeds to average");
    }
    cmd->callback([&chosen, n = name] { chosen = n; });
  }

  std::size_t synth_snapshots = 0;
  unsigned long long synth_seed = 1;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "write a synthetic proximity trace");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--snapshots", synth_snapshots, "trace length in 5-minute snapshots");
  synth->add_option("-o,--out", synth_out, "output file")->required();
  synth->callback([&chosen] { chosen = "synth"; });

  std::string sweep_input, sweep_format = "triple", sweep_property = "active_nodes", sweep_range;
  long long sweep_resolution = 300;
  double sweep_threshold = 20.0;
  std::vector<std::size_t> sweep_windows{16, 32, 64, 128};
  auto* sw = app.add_subcommand("sweep", "prediction accuracy against the training window");
  sw->add_option("-i,--input", sweep_input, "contact trace")->required();
  sw->add_option("--format", sweep_format, "input format: triple or sigcomm");
  sw->add_option("--resolution", sweep_resolution, "snapshot resolution in seconds");
  sw->add_option("--property", sweep_property, "property to forecast");
  sw->add_option("--windows", sweep_windows, "training windows")->delimiter(',');
  sw->add_option("--range", sweep_range, "test steps first:last")->required();
  sw->add_option("--threshold", sweep_threshold, "percentage error threshold");
  sw->callback([&chosen] { chosen = "sweep"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (chosen == "synth") {
    const auto s = tnf_write_synthetic_trace(synth_seed, synth_snapshots, synth_out.c_str());
    if (s != TNF_OK) std::cerr << "tnf: " << tnf_last_error() << '\n';
    return exit_code(s);
  }
  if (chosen == "sweep") {
    return sweep(sweep_input, sweep_format, sweep_resolution, sweep_property, sweep_windows, sweep_range,
                 sweep_threshold);
  }
  return Runner(o).run(chosen);
}
