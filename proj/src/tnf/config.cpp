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

#include "tnf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "tnf/error.hpp"

namespace tnf {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& v, const std::string& where) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (!v.empty() && (v.front() == '"' || v.back() == '"')) fail(ErrorKind::Config, where + ": unbalanced quote");
  return v;
}

double to_number(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    fail(ErrorKind::Config, "setting '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const double d = to_number(key, v);
  if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
    fail(ErrorKind::Config, "setting '" + key + "' expects a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorKind::Config, "setting '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    auto comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    auto item = trim(v.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

void Settings::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) order_.push_back(key);
  values_[key] = value;
}

std::optional<std::string> Settings::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

Settings Settings::parse(std::istream& in, const std::string& origin) {
  Settings s;
  std::string table;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) fail(ErrorKind::Config, where + ": malformed table header");
      table = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    auto value = unquote(trim(line.substr(eq + 1)), where);
    if (key.empty()) fail(ErrorKind::Config, where + ": empty key");
    s.set(table.empty() ? key : table + "." + key, value);
  }
  return s;
}

Settings Settings::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config file '" + path.string() + "'");
  return parse(in, path.string());
}

StepInterval parse_step_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::Config, "step range must be 'first:last', got '" + text + "'");
  StepInterval r;
  r.first = to_count("range", trim(text.substr(0, colon)));
  r.last = to_count("range", trim(text.substr(colon + 1)));
  if (r.last < r.first) fail(ErrorKind::Config, "step range '" + text + "' is reversed");
  return r;
}

RunConfig RunConfig::from_settings(const Settings& settings) {
  RunConfig cfg;
  std::vector<std::string> dataset_names;
  for (const auto& key : settings.order()) {
    const std::string v = *settings.get(key);
    if (key == "resolution") {
      cfg.resolution = static_cast<std::int64_t>(to_count(key, v));
    } else if (key == "output_dir") {
      cfg.output_dir = v;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_count(key, v));
    } else if (key == "predict.properties") {
      cfg.properties.clear();
      if (v == "all") {
        cfg.properties.assign(kAllProperties.begin(), kAllProperties.end());
      } else {
        for (auto& name : split_list(v)) cfg.properties.push_back(parse_property(name));
      }
    } else if (key == "predict.threshold") {
      cfg.error_threshold_pct = to_number(key, v);
    } else if (key == "metrics.include_persistent_emergence") {
      cfg.include_persistent_emergence = to_bool(key, v);
    } else if (key == "window.threshold") {
      cfg.overlap_threshold = to_number(key, v);
    } else if (key == "window.max_lag") {
      cfg.max_lag = to_count(key, v);
    } else if (key == "spectro.filter") {
      cfg.spectro_filter = to_bool(key, v);
    } else if (key == "spectro.theta") {
      if (v == "auto") {
        cfg.theta.reset();
      } else {
        cfg.theta = to_number(key, v);
      }
    } else if (key == "spectro.taper") {
      cfg.suitability_taper = parse_taper(v);
    } else if (key == "spectro.spectrogram_taper") {
      cfg.spectrogram_taper = parse_taper(v);
    } else if (key == "spectro.window") {
      cfg.spectro_window = to_count(key, v);
    } else if (key == "spectro.hop") {
      cfg.spectro_hop = to_count(key, v);
    } else if (key == "attack.enabled") {
      cfg.attack = to_bool(key, v);
    } else if (key == "attack.strategies") {
      cfg.strategies.clear();
      for (auto& name : split_list(v)) cfg.strategies.push_back(parse_strategy(name));
    } else if (key == "attack.fractions") {
      cfg.fractions = parse_fractions(v);
    } else if (key == "attack.seeds") {
      cfg.random_seeds = to_count(key, v);
    } else if (key == "attack.fixed_n") {
      cfg.fixed_n = to_bool(key, v);
    } else if (key == "attack.rerank") {
      cfg.rerank = to_bool(key, v);
    } else if (key.rfind("dataset.", 0) == 0) {
      auto rest = key.substr(8);
      auto dot = rest.rfind('.');
      if (dot == std::string::npos || dot == 0) fail(ErrorKind::Config, "malformed dataset key '" + key + "'");
      auto name = rest.substr(0, dot);
      auto field = rest.substr(dot + 1);
      auto it = std::find_if(cfg.datasets.begin(), cfg.datasets.end(), [&](auto& d) { return d.name == name; });
      if (it == cfg.datasets.end()) {
        cfg.datasets.push_back(DatasetConfig{});
        cfg.datasets.back().name = name;
        it = cfg.datasets.end() - 1;
      }
      auto& d = *it;
      if (field == "path") {
        d.path = v;
      } else if (field == "format") {
        d.format = parse_input_format(v);
      } else if (field == "base_resolution") {
        d.base_resolution = static_cast<std::int64_t>(to_count(key, v));
      } else if (field == "rebase") {
        d.rebase = to_bool(key, v);
      } else if (field == "strict") {
        d.strict = to_bool(key, v);
      } else if (field == "window") {
        if (v == "auto") {
          d.window.reset();
        } else {
          d.window = to_count(key, v);
        }
      } else if (field == "range") {
        d.range = parse_step_range(v);
      } else if (field == "attack_interval") {
        d.attack_interval = parse_step_range(v);
      } else {
        fail(ErrorKind::Config, "unknown dataset setting '" + key + "'");
      }
    } else {
      fail(ErrorKind::Config, "unknown setting '" + key + "'");
    }
  }

  if (cfg.resolution <= 0) fail(ErrorKind::Config, "resolution must be positive");
  if (!(cfg.error_threshold_pct > 0.0)) fail(ErrorKind::Config, "error threshold must be positive");
  if (!(cfg.overlap_threshold > 0.0 && cfg.overlap_threshold < 1.0))
    fail(ErrorKind::Config, "overlap threshold must lie in (0, 1)");
  if (cfg.properties.empty()) fail(ErrorKind::Config, "no properties selected");
  if (cfg.random_seeds == 0) fail(ErrorKind::Config, "attack.seeds must be positive");
  for (const auto& d : cfg.datasets) {
    if (d.path.empty()) fail(ErrorKind::Config, "dataset '" + d.name + "' has no path");
  }
  return cfg;
}

}  // namespace tnf
