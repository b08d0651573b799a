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

#include "tnf/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tnf/error.hpp"

namespace fs = std::filesystem;

namespace tnf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::Io, "cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) fail(ErrorKind::Parse, "bad number '" + s + "' in summary");
  return v;
}

class DatasetRun {
 public:
  DatasetRun(const RunConfig& cfg, const DatasetConfig& dataset, std::ostream& log)
      : cfg_(cfg), log_(log), data_(load_dataset(dataset, cfg.resolution)),
        dir_(cfg.output_dir / dataset.name) {}

  const SnapshotSeries& series() const { return data_.series; }

  void ingest(const std::optional<fs::path>& out) {
    const auto& s = data_.stats;
    log_ << "dataset " << data_.config.name << ": " << s.events << " events from " << s.lines
         << " lines (" << s.malformed << " malformed, " << s.self_loops << " self-loops, "
         << s.external << " external)\n";
    log_ << "  base resolution " << data_.base_resolution << " s, snapshot resolution "
         << cfg_.resolution << " s (" << cfg_.resolution / data_.base_resolution
         << " native frames per snapshot)\n";
    log_ << "  " << series().node_count() << " nodes, " << series().size() << " snapshots\n";
    if (s.malformed > 0) {
      log_ << "  first malformed line " << s.first_malformed_line << ": " << s.first_malformed_text << "\n";
    }
    const auto path = out.value_or(dir_ / "snapshots.txt");
    auto file = open_output(path);
    write_snapshot_dump(file, series());
    log_ << "  wrote " << path.string() << "\n";
  }

  const MetricSeries& metric(PropertyId p) {
    auto it = metrics_.find(p);
    if (it != metrics_.end()) return it->second;
    MetricOptions opts;
    opts.include_persistent_emergence = cfg_.include_persistent_emergence;
    return metrics_.emplace(p, metric_series(series(), p, opts)).first->second;
  }

  void metrics(const std::optional<fs::path>& out) {
    const auto path = out.value_or(dir_ / "metrics.csv");
    auto file = open_output(path);
    file << "t";
    for (auto p : cfg_.properties) file << ',' << property_name(p);
    file << '\n';
    for (auto p : cfg_.properties) metric(p);
    for (std::size_t t = 0; t < series().size(); ++t) {
      file << t;
      for (auto p : cfg_.properties) {
        const auto& v = metric(p).values;
        // Emergence has one value fewer; the trailing step is padded with 0.
        file << ',' << format_double(t < v.size() ? v[t] : 0.0);
      }
      file << '\n';
    }
    log_ << "wrote " << path.string() << " (" << series().size() << " steps)\n";
  }

  const WindowChoice& window_choice() {
    if (choice_) return *choice_;
    const std::size_t T = series().size();
    std::size_t max_lag = cfg_.max_lag > 0 ? cfg_.max_lag : default_max_lag(T);
    if (max_lag >= T) fail(ErrorKind::Data, "series of " + std::to_string(T) + " snapshots is too short for max lag " + std::to_string(max_lag));
    curve_ = overlap_decay(series(), max_lag);
    choice_ = select_window(curve_, cfg_.overlap_threshold);
    return *choice_;
  }

  std::size_t window() {
    if (data_.config.window) return *data_.config.window;
    return window_choice().window;
  }

  void window_stage(const std::optional<fs::path>& out, bool print_curve) {
    const auto& choice = window_choice();
    log_ << "crossing_lag=" << choice.crossing_lag << (choice.crossed ? "" : " (threshold never crossed)")
         << "\nwindow=" << choice.window << "\n";
    std::ostringstream csv;
    csv << "lag,mean_overlap\n";
    for (std::size_t i = 0; i < curve_.lags.size(); ++i)
      csv << curve_.lags[i] << ',' << format_double(curve_.mean_overlap[i]) << '\n';
    if (print_curve) log_ << csv.str();
    const auto path = out.value_or(dir_ / "overlap.csv");
    auto file = open_output(path);
    file << csv.str();
  }

  StepInterval range_for(std::size_t length) {
    const std::size_t w = window();
    if (data_.config.range) return *data_.config.range;
    if (length < w + 2) fail(ErrorKind::Data, "series too short for window " + std::to_string(w));
    return {w + 1, length - 1};
  }

  PropertySummary predict_property(PropertyId p, const fs::path& path) {
    const auto& y = metric(p).values;
    const std::size_t w = window();
    const auto range = range_for(y.size());
    PropertySummary summary;
    summary.property = p;
    summary.window = w;
    auto records = sliding_prediction(y, w, range.first, range.last);
    summary.records = records.size();
    if (cfg_.spectro_filter) {
      const double theta = cfg_.theta ? *cfg_.theta : auto_theta(y, w, range.first, cfg_.suitability_taper);
      summary.theta = theta;
      apply_suitability(records, y, w, theta, cfg_.suitability_taper);
      auto fs_summary = filtered_summary(records, cfg_.error_threshold_pct);
      summary.unfiltered = fs_summary.unfiltered;
      summary.filtered = fs_summary.filtered;
      summary.dropped = fs_summary.dropped;
    } else {
      summary.unfiltered = error_summary(records, cfg_.error_threshold_pct);
    }
    summary.psd = spectrum_bins(y, w);

    auto file = open_output(path);
    file << "t,original,predicted,pct_error,p,d,q";
    if (cfg_.spectro_filter) file << ",suitable,lpsd_ratio";
    file << '\n';
    for (const auto& r : records) {
      file << r.t << ',' << format_double(r.original) << ',' << format_double(r.predicted) << ','
           << (r.error_defined ? format_double(r.pct_error) : "undefined") << ',' << r.order.p << ','
           << r.order.d << ',' << r.order.q;
      if (cfg_.spectro_filter) file << ',' << (r.suitable.value_or(true) ? 1 : 0) << ',' << format_double(r.lpsd_ratio);
      file << '\n';
    }
    log_ << property_name(p) << ": w=" << w << " steps " << range.first << ".." << range.last
         << " fraction<=" << cfg_.error_threshold_pct << "%: " << fixed3(summary.unfiltered.fraction);
    if (cfg_.spectro_filter) {
      log_ << " filtered: " << (summary.filtered ? fixed3(summary.filtered->fraction) : std::string("n/a"))
           << " (dropped " << summary.dropped << ", theta " << fixed3(*summary.theta) << ")";
    }
    if (summary.unfiltered.undefined > 0) log_ << " [" << summary.unfiltered.undefined << " zero originals excluded]";
    log_ << '\n';
    return summary;
  }

  PsdBins spectrum_bins(const std::vector<double>& y, std::size_t w) {
    std::size_t win = cfg_.spectro_window > 0 ? cfg_.spectro_window : nearest_power_of_two(w);
    while (win > y.size()) win /= 2;
    if (win < 32) return {};
    const std::size_t hop = cfg_.spectro_hop > 0 ? cfg_.spectro_hop : win / 2;
    return psd_bins(stft(y, win, hop, cfg_.spectrogram_taper)).average;
  }

  DatasetSummary predict(const std::optional<fs::path>& out) {
    DatasetSummary summary;
    summary.name = data_.config.name;
    if (out && cfg_.properties.size() != 1) fail(ErrorKind::Config, "--out needs exactly one property");
    for (auto p : cfg_.properties) {
      fs::path path = dir_ / ("pred_" + std::string(property_name(p)) + ".csv");
      if (out && cfg_.properties.size() == 1) path = *out;
      summary.properties.push_back(predict_property(p, path));
    }
    auto file = open_output(dir_ / "summary.csv");
    write_summary_csv(file, summary);
    return summary;
  }

  void spectro(const std::optional<fs::path>& out) {
    if (out && cfg_.properties.size() != 1) fail(ErrorKind::Config, "--out needs exactly one property");
    for (auto p : cfg_.properties) {
      const auto& y = metric(p).values;
      const std::size_t win = cfg_.spectro_window > 0 ? cfg_.spectro_window : nearest_power_of_two(window());
      const std::size_t hop = cfg_.spectro_hop > 0 ? cfg_.spectro_hop : std::max<std::size_t>(1, win / 2);
      auto spec = stft(y, win, hop, cfg_.spectrogram_taper);
      const auto path = out.value_or(dir_ / ("spectro_" + std::string(property_name(p)) + ".csv"));
      auto file = open_output(path);
      file << "segment_start,bin,psd\n";
      for (const auto& seg : spec.segments) {
        for (std::size_t k = 0; k < seg.psd.size(); ++k)
          file << seg.start << ',' << k << ',' << format_double(seg.psd[k]) << '\n';
      }
      log_ << property_name(p) << ": " << spec.segments.size() << " segments of " << win << " (hop " << hop
           << ", " << taper_name(cfg_.spectrogram_taper) << ")";
      if (win >= 32) {
        auto bins = psd_bins(spec).average;
        log_ << "  LPSD " << format_double(bins.lpsd) << "  MPSD " << format_double(bins.mpsd) << "  HPSD "
             << format_double(bins.hpsd);
      }
      log_ << "\n";
    }
  }

  void attack(const std::optional<fs::path>& out) {
    const std::size_t T = series().size();
    StepInterval interval = data_.config.attack_interval ? *data_.config.attack_interval : range_for(T);
    AttackOptions opts;
    opts.fractions = cfg_.fractions;
    opts.interval = interval;
    opts.window = window();
    opts.fixed_n = cfg_.fixed_n;
    opts.rerank = cfg_.rerank;
    const auto path = out.value_or(dir_ / "attack.csv");
    auto file = open_output(path);
    file << "strategy,fraction,robustness,seed\n";
    auto emit = [&](std::string_view name, const AttackCurve& c) {
      for (const auto& pt : c.points)
        file << name << ',' << format_double(pt.fraction) << ',' << format_double(pt.robustness) << ',' << c.seed << '\n';
      if (c.truncated) log_ << "  " << name << ": " << c.notice << "\n";
    };
    log_ << "attack interval " << interval.first << ".." << interval.last << ", window " << opts.window << "\n";
    for (auto strategy : cfg_.strategies) {
      opts.strategy = strategy;
      opts.seed = cfg_.seed;
      if (strategy == AttackStrategy::Random) {
        std::vector<AttackCurve> curves;
        for (std::size_t i = 0; i < cfg_.random_seeds; ++i) {
          opts.seed = cfg_.seed + i;
          curves.push_back(run_attack(series(), opts));
          emit("random", curves.back());
        }
        opts.seed = cfg_.seed;
        auto mean = mean_random_curve(series(), opts, cfg_.random_seeds);
        emit("random_mean", mean);
        log_ << "  random (mean of " << cfg_.random_seeds << " seeds from " << cfg_.seed << "):";
        for (const auto& pt : mean.points) log_ << ' ' << fixed3(pt.robustness);
        log_ << '\n';
      } else {
        auto curve = run_attack(series(), opts);
        emit(strategy_name(strategy), curve);
        log_ << "  " << strategy_name(strategy) << ":";
        for (const auto& pt : curve.points) log_ << ' ' << fixed3(pt.robustness);
        log_ << '\n';
      }
    }
    log_ << "wrote " << path.string() << "\n";
  }

 private:
  const RunConfig& cfg_;
  std::ostream& log_;
  LoadedDataset data_;
  fs::path dir_;
  std::map<PropertyId, MetricSeries> metrics_;
  std::optional<WindowChoice> choice_;
  OverlapCurve curve_;
};

const DatasetConfig& pick_dataset(const RunConfig& cfg, const std::string& name) {
  if (cfg.datasets.empty()) fail(ErrorKind::Config, "no dataset configured (use --input or a [dataset.NAME] table)");
  if (name.empty()) return cfg.datasets.front();
  for (const auto& d : cfg.datasets)
    if (d.name == name) return d;
  fail(ErrorKind::Config, "dataset '" + name + "' is not configured");
}

void write_table2(const RunConfig& cfg, const std::vector<DatasetSummary>& summaries, std::ostream& log) {
  auto table = emit_table2(summaries);
  {
    auto f = open_output(cfg.output_dir / "table2.txt");
    f << table.text;
  }
  {
    auto f = open_output(cfg.output_dir / "table2.csv");
    f << table.csv;
  }
  log << table.text;
}

}  // namespace

Table2 emit_table2(const std::vector<DatasetSummary>& summaries) {
  std::vector<PropertyId> rows;
  for (auto p : kAllProperties) {
    for (const auto& d : summaries) {
      if (std::any_of(d.properties.begin(), d.properties.end(), [&](auto& s) { return s.property == p; })) {
        rows.push_back(p);
        break;
      }
    }
  }
  auto find = [](const DatasetSummary& d, PropertyId p) -> const PropertySummary* {
    for (const auto& s : d.properties)
      if (s.property == p) return &s;
    return nullptr;
  };
  auto cell = [](double unfiltered, std::optional<double> filtered) {
    return fixed3(unfiltered) + ", (" + (filtered ? fixed3(*filtered) : std::string("n/a")) + ")";
  };

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Property"};
  for (const auto& d : summaries) header.push_back(d.name);
  grid.push_back(header);
  std::ostringstream csv;
  csv << "property,dataset,unfiltered,filtered\n";
  for (auto p : rows) {
    std::vector<std::string> row{std::string(property_name(p))};
    for (const auto& d : summaries) {
      const auto* s = find(d, p);
      if (!s) {
        row.emplace_back("-");
        continue;
      }
      std::optional<double> f;
      if (s->filtered) f = s->filtered->fraction;
      row.push_back(cell(s->unfiltered.fraction, f));
      csv << property_name(p) << ',' << d.name << ',' << format_double(s->unfiltered.fraction) << ','
          << (f ? format_double(*f) : "n/a") << '\n';
    }
    grid.push_back(row);
  }
  std::vector<std::string> avg{"Average"};
  for (const auto& d : summaries) {
    double u = 0.0, f = 0.0;
    std::size_t nf = 0;
    for (const auto& s : d.properties) {
      u += s.unfiltered.fraction;
      if (s.filtered) {
        f += s.filtered->fraction;
        ++nf;
      }
    }
    const double n = static_cast<double>(std::max<std::size_t>(1, d.properties.size()));
    std::optional<double> fm;
    if (nf == d.properties.size() && nf > 0) fm = f / static_cast<double>(nf);
    avg.push_back(cell(u / n, fm));
    csv << "average," << d.name << ',' << format_double(u / n) << ',' << (fm ? format_double(*fm) : "n/a") << '\n';
  }
  grid.push_back(avg);

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : grid)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream text;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      if (c > 0) text << " | ";
      text << std::left << std::setw(static_cast<int>(width[c])) << grid[r][c];
    }
    text << '\n';
    if (r == 0 || r + 2 == grid.size()) {
      for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) text << "-+-";
        text << std::string(width[c], '-');
      }
      text << '\n';
    }
  }
  return {text.str(), csv.str()};
}

void write_summary_csv(std::ostream& out, const DatasetSummary& summary) {
  out << "property,window,records,counted,undefined,fraction,mean_error,filtered_fraction,"
         "filtered_counted,filtered_mean_error,dropped,theta,lpsd,mpsd,hpsd\n";
  for (const auto& s : summary.properties) {
    out << property_name(s.property) << ',' << s.window << ',' << s.records << ',' << s.unfiltered.counted << ','
        << s.unfiltered.undefined << ',' << format_double(s.unfiltered.fraction) << ','
        << format_double(s.unfiltered.mean_error) << ',';
    if (s.filtered) {
      out << format_double(s.filtered->fraction) << ',' << s.filtered->counted << ','
          << format_double(s.filtered->mean_error);
    } else {
      out << "n/a,0,n/a";
    }
    out << ',' << s.dropped << ',' << (s.theta ? format_double(*s.theta) : "n/a") << ','
        << format_double(s.psd.lpsd) << ',' << format_double(s.psd.mpsd) << ',' << format_double(s.psd.hpsd)
        << '\n';
  }
}

DatasetSummary read_summary_csv(std::istream& in, const std::string& name) {
  DatasetSummary summary;
  summary.name = name;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Parse, "summary for '" + name + "' is empty");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto c = split_csv(line);
    if (c.size() != 15) fail(ErrorKind::Parse, "summary line " + std::to_string(lineno) + " has " + std::to_string(c.size()) + " fields");
    PropertySummary s;
    s.property = parse_property(c[0]);
    s.window = static_cast<std::size_t>(parse_double(c[1]));
    s.records = static_cast<std::size_t>(parse_double(c[2]));
    s.unfiltered.counted = static_cast<std::size_t>(parse_double(c[3]));
    s.unfiltered.undefined = static_cast<std::size_t>(parse_double(c[4]));
    s.unfiltered.fraction = parse_double(c[5]);
    s.unfiltered.mean_error = parse_double(c[6]);
    if (c[7] != "n/a") {
      ErrorSummary f;
      f.fraction = parse_double(c[7]);
      f.counted = static_cast<std::size_t>(parse_double(c[8]));
      f.mean_error = parse_double(c[9]);
      s.filtered = f;
    }
    s.dropped = static_cast<std::size_t>(parse_double(c[10]));
    if (c[11] != "n/a") s.theta = parse_double(c[11]);
    s.psd.lpsd = parse_double(c[12]);
    s.psd.mpsd = parse_double(c[13]);
    s.psd.hpsd = parse_double(c[14]);
    summary.properties.push_back(s);
  }
  return summary;
}

LoadedDataset load_dataset(const DatasetConfig& config, std::int64_t resolution) {
  ParseOptions opts;
  opts.format = config.format;
  opts.strict = config.strict;
  opts.base_resolution = config.base_resolution;
  opts.rebase = config.rebase;
  auto log = load_contacts(config.path, opts);
  LoadedDataset out;
  out.config = config;
  out.stats = log.stats;
  out.base_resolution = log.base_inferred ? std::gcd(log.base_resolution, resolution) : log.base_resolution;
  out.series = aggregate_snapshots(log, resolution);
  if (out.series.empty()) fail(ErrorKind::Data, "dataset '" + config.name + "' contains no contacts");
  return out;
}

void run_stage(const RunConfig& config, const StageRequest& request, std::ostream& log) {
  static const std::vector<std::string> known{"ingest", "metrics", "window", "predict",
                                              "spectro", "attack", "report", "all"};
  if (std::find(known.begin(), known.end(), request.stage) == known.end())
    fail(ErrorKind::Config, "unknown stage '" + request.stage + "'");
  try {
    if (request.stage == "report") {
      std::vector<DatasetSummary> summaries;
      for (const auto& d : config.datasets) {
        const auto path = config.output_dir / d.name / "summary.csv";
        std::ifstream in(path);
        if (!in) fail(ErrorKind::Data, "missing summary '" + path.string() + "' (run predict first)");
        summaries.push_back(read_summary_csv(in, d.name));
      }
      if (summaries.empty()) fail(ErrorKind::Config, "no dataset configured");
      write_table2(config, summaries, log);
      return;
    }
    if (request.stage == "all") {
      if (config.datasets.empty()) fail(ErrorKind::Config, "no dataset configured");
      std::vector<DatasetSummary> summaries;
      for (const auto& d : config.datasets) {
        DatasetRun run(config, d, log);
        run.ingest(std::nullopt);
        run.metrics(std::nullopt);
        run.window_stage(std::nullopt, false);
        summaries.push_back(run.predict(std::nullopt));
        run.spectro(std::nullopt);
        if (config.attack) run.attack(std::nullopt);
      }
      write_table2(config, summaries, log);
      return;
    }
    DatasetRun run(config, pick_dataset(config, request.dataset), log);
    if (request.stage == "ingest") {
      run.ingest(request.out);
    } else if (request.stage == "metrics") {
      run.metrics(request.out);
    } else if (request.stage == "window") {
      run.window_stage(request.out, true);
    } else if (request.stage == "predict") {
      run.predict(request.out);
    } else if (request.stage == "spectro") {
      run.spectro(request.out);
    } else if (request.stage == "attack") {
      run.attack(request.out);
    }
  } catch (const Error& e) {
    throw Error(e.kind(), request.stage + ": " + e.what());
  }
}

}  // namespace tnf
