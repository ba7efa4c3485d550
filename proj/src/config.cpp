/*
 * Copyright 2026 The localdrift Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "localdrift/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace localdrift {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(key, "cannot parse '" + v + "' as a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number<T>(key, item));
  return out;
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logreg" : "gnb";
}

void RunConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma", "must be in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "must be in (0, 1)");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta", "must be in [0, 1]");
  if (window < 4 || window % 2 != 0) {
    throw ConfigError("window", "must be even and >= 4");
  }
  if (max_age < 1) throw ConfigError("max_age", "must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate", "must be finite and >= 0");
  }
  if (warmup < 0) throw ConfigError("warmup", "must be >= 0");
  if (interval_fractions.empty()) {
    throw ConfigError("interval_fractions", "must not be empty");
  }
  for (double f : interval_fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw ConfigError("interval_fractions", "fractions must be in (0, 1]");
    }
  }
  if (generator != "sea" && generator != "agrawal") {
    throw ConfigError("generator", "must be 'sea' or 'agrawal'");
  }
  if (input.empty()) {
    if (length < 1) throw ConfigError("length", "must be >= 1");
    for (std::size_t i = 0; i < drift_positions.size(); ++i) {
      if (drift_positions[i] < 0 || drift_positions[i] >= length) {
        throw ConfigError("drift_positions",
                          "position " + std::to_string(drift_positions[i]) +
                              " outside [0, length)");
      }
      if (i > 0 && drift_positions[i] <= drift_positions[i - 1]) {
        throw ConfigError("drift_positions", "must be strictly increasing");
      }
    }
    if (!drift_widths.empty() && drift_widths.size() != drift_positions.size()) {
      throw ConfigError("drift_widths", "needs one width per drift position");
    }
    try {
      schedule().validate(length);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("drift_widths", e.what());
    }
    if (!concepts.empty() && concepts.size() != drift_positions.size() + 1) {
      throw ConfigError("concepts", "needs one concept per segment");
    }
    if (!(perturbation >= 0.0 && perturbation <= 1.0)) {
      throw ConfigError("perturbation", "must be in [0, 1]");
    }
  }
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw ConfigError("top_fraction", "must be in (0, 1]");
  }
  if (mi_bins < 2) throw ConfigError("mi_bins", "must be >= 2");
  if (tracked < 0) throw ConfigError("tracked", "must be >= 0");
  if (sample_pool < 1) throw ConfigError("sample_pool", "must be >= 1");
  for (const auto& d : detectors) {
    if (d != "cdleeds" && d != "ddm") {
      throw ConfigError("detectors", "unknown detector '" + d + "'");
    }
  }
}

TreeConfig RunConfig::tree_config() const {
  TreeConfig c;
  c.gamma = gamma;
  c.alpha = alpha;
  c.window = static_cast<std::size_t>(window);
  c.max_age = max_age;
  if (max_depth >= 0) {
    c.max_depth = max_depth;
  } else {
    c.max_depth.reset();
  }
  return c;
}

ModelSpec RunConfig::model_spec() const {
  return ModelSpec{model, learning_rate};
}

DriftSchedule RunConfig::schedule() const {
  return DriftSchedule{drift_positions, drift_widths};
}

GeneratorConfig RunConfig::generator_config() const {
  GeneratorConfig g;
  g.kind = generator == "agrawal" ? GeneratorKind::kAgrawal : GeneratorKind::kSea;
  g.seed = seed;
  g.length = length;
  g.perturbation = perturbation;
  g.schedule = schedule();
  if (concepts.empty()) {
    const int variants = g.kind == GeneratorKind::kSea
                             ? static_cast<int>(kSeaThresholds.size())
                             : kAgrawalFunctions;
    g.concepts.clear();
    for (std::size_t i = 0; i <= drift_positions.size(); ++i) {
      g.concepts.push_back(static_cast<int>(i) % variants);
    }
  } else {
    g.concepts = concepts;
  }
  return g;
}

void apply_setting(RunConfig& c, const std::string& raw_key,
                   const std::string& value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value);
  using Setter = std::function<void()>;
  const std::map<std::string, Setter> setters{
      {"input", [&] { c.input = v; }},
      {"label_column", [&] { c.label_column = v; }},
      {"has_header", [&] { c.has_header = parse_bool(key, v); }},
      {"generator", [&] { c.generator = v; }},
      {"length", [&] { c.length = parse_number<std::int64_t>(key, v); }},
      {"drift_positions", [&] { c.drift_positions = parse_list<std::int64_t>(key, v); }},
      {"drift_widths", [&] { c.drift_widths = parse_list<std::int64_t>(key, v); }},
      {"concepts", [&] { c.concepts = parse_list<int>(key, v); }},
      {"perturbation", [&] { c.perturbation = parse_number<double>(key, v); }},
      {"top_fraction", [&] { c.top_fraction = parse_number<double>(key, v); }},
      {"mi_bins", [&] { c.mi_bins = parse_number<int>(key, v); }},
      {"model",
       [&] {
         if (v == "logreg") {
           c.model = ModelKind::kLogistic;
         } else if (v == "gnb") {
           c.model = ModelKind::kGaussianNB;
         } else {
           throw ConfigError(key, "must be 'logreg' or 'gnb'");
         }
       }},
      {"learning_rate", [&] { c.learning_rate = parse_number<double>(key, v); }},
      {"gamma", [&] { c.gamma = parse_number<double>(key, v); }},
      {"alpha", [&] { c.alpha = parse_number<double>(key, v); }},
      {"beta", [&] { c.beta = parse_number<double>(key, v); }},
      {"window", [&] { c.window = parse_number<std::int64_t>(key, v); }},
      {"max_age", [&] { c.max_age = parse_number<std::int64_t>(key, v); }},
      {"max_depth", [&] { c.max_depth = parse_number<int>(key, v); }},
      {"interval_fractions", [&] { c.interval_fractions = parse_list<double>(key, v); }},
      {"warmup", [&] { c.warmup = parse_number<std::int64_t>(key, v); }},
      {"detectors", [&] { c.detectors = split_list(v); }},
      {"streams", [&] { c.streams = split_list(v); }},
      {"with_timing", [&] { c.with_timing = parse_bool(key, v); }},
      {"tracked", [&] { c.tracked = parse_number<std::int64_t>(key, v); }},
      {"sample_pool", [&] { c.sample_pool = parse_number<std::int64_t>(key, v); }},
      {"oracle", [&] { c.oracle = parse_bool(key, v); }},
      {"seed", [&] { c.seed = parse_number<std::uint64_t>(key, v); }},
      {"out", [&] { c.out = v; }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError(key, "unknown key");
  it->second();
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", path.string() + ":" + std::to_string(lineno) +
                                      ": expected 'key = value'");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  RunConfig c;
  apply_config_file(c, path);
  return c;
}

}  // namespace localdrift
