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

#ifndef LOCALDRIFT_CONFIG_HPP_
#define LOCALDRIFT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "localdrift/cluster_tree.hpp"
#include "localdrift/generators.hpp"
#include "localdrift/pipeline.hpp"

namespace localdrift {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Flat run configuration. Keys in a config file use the field names below;
// list values are comma-separated.
struct RunConfig {
  // stream
  std::string input;            // csv path; empty selects the generator
  std::string label_column;     // empty = last column
  bool has_header = true;
  std::string generator = "sea";  // sea | agrawal
  std::int64_t length = 50000;
  std::vector<std::int64_t> drift_positions;
  std::vector<std::int64_t> drift_widths;
  std::vector<int> concepts;
  double perturbation = 0.1;

  // bench: csv files with sidecars; empty runs the generated stream
  std::vector<std::string> streams;

  // drift injection
  double top_fraction = 1.0 / 3.0;
  int mi_bins = 10;

  // model
  ModelKind model = ModelKind::kLogistic;
  double learning_rate = 0.1;

  // detector
  double gamma = 0.95;
  double alpha = 0.01;
  double beta = 0.001;
  std::int64_t window = 200;
  std::int64_t max_age = 100;
  int max_depth = 5;  // negative = unbounded

  // evaluation
  std::vector<double> interval_fractions{0.01, 0.025, 0.05, 0.075, 0.10};
  std::int64_t warmup = 1000;
  std::vector<std::string> detectors{"cdleeds", "ddm"};
  bool with_timing = false;

  // attribution tracking
  std::int64_t tracked = 100;
  std::int64_t sample_pool = 1000;
  bool oracle = true;

  std::uint64_t seed = 1;
  std::filesystem::path out = "out";

  // Throws ConfigError naming the first invalid field.
  void validate() const;
  TreeConfig tree_config() const;
  ModelSpec model_spec() const;
  GeneratorConfig generator_config() const;
  DriftSchedule schedule() const;
};

// Applies "key = value" pairs. Unknown keys are an error.
void apply_setting(RunConfig& config, const std::string& key,
                   const std::string& value);

// Reads a flat key-value file: one "key = value" per line, '#' comments.
RunConfig load_config(const std::filesystem::path& path);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

std::string to_string(ModelKind kind);

}  // namespace localdrift

#endif  // LOCALDRIFT_CONFIG_HPP_
