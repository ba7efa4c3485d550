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

// localdrift command-line entry point.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "localdrift/commands.hpp"
#include "localdrift/config.hpp"

namespace {

using localdrift::RunConfig;

// Flags that map one-to-one onto config keys.
const std::vector<std::pair<std::string, std::string>> kFlagKeys{
    {"--seed", "seed"},
    {"--out", "out"},
    {"--gamma", "gamma"},
    {"--alpha", "alpha"},
    {"--beta", "beta"},
    {"--window", "window"},
    {"--max-age", "max_age"},
    {"--max-depth", "max_depth"},
    {"--label-column", "label_column"},
    {"--interval-fractions", "interval_fractions"},
    {"--warmup", "warmup"},
    {"--input", "input"},
    {"--model", "model"},
    {"--learning-rate", "learning_rate"},
    {"--generator", "generator"},
    {"--length", "length"},
    {"--drift-positions", "drift_positions"},
    {"--drift-widths", "drift_widths"},
    {"--concepts", "concepts"},
    {"--perturbation", "perturbation"},
    {"--top-fraction", "top_fraction"},
    {"--tracked", "tracked"},
    {"--streams", "streams"},
    {"--detectors", "detectors"},
};

struct Flags {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool with_timing = false;
  bool no_oracle = false;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "flat key = value config file");
  for (const auto& [flag, key] : kFlagKeys) {
    cmd->add_option(flag, flags.values[key]);
  }
  cmd->add_option("--set", flags.set, "extra key=value overrides");
}

RunConfig build_config(CLI::App* cmd, const Flags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) {
    localdrift::apply_config_file(config, flags.config_path);
  }
  for (const auto& [flag, key] : kFlagKeys) {
    if (cmd->count(flag) > 0) localdrift::apply_setting(config, key, flags.values.at(key));
  }
  for (const auto& kv : flags.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw localdrift::ConfigError(kv, "--set expects key=value");
    }
    localdrift::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.with_timing) config.with_timing = true;
  if (flags.no_oracle) config.oracle = false;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local concept drift detection on data streams"};
  app.require_subcommand(1);

  Flags flags;
  std::string alert_log;
  std::string truth;

  auto* generate = app.add_subcommand("generate", "write a synthetic stream and its sidecar");
  auto* inject = app.add_subcommand("inject-drift", "inject permutation drifts into a CSV");
  auto* detect = app.add_subcommand("detect", "run the detector; write alerts and tree stats");
  auto* track = app.add_subcommand("track-attributions",
                                    "track attributions of sampled observations");
  auto* bench = app.add_subcommand("bench", "benchmark detectors on streams with ground truth");
  auto* score = app.add_subcommand("score", "score an external alert log");
  for (auto* cmd : {generate, inject, detect, track, bench, score}) add_common(cmd, flags);
  bench->add_flag("--with-timing", flags.with_timing, "report mean update time");
  track->add_flag("--no-oracle", flags.no_oracle, "skip the always-recompute reference");
  score->add_option("--alerts", alert_log, "JSON Lines alert log")->required();
  score->add_option("--truth", truth, "sidecar JSON with drift positions")->required();

  CLI11_PARSE(app, argc, argv);

  CLI::App* cmd = app.get_subcommands().front();
  try {
    RunConfig config;
    try {
      config = build_config(cmd, flags);
    } catch (const std::exception& e) {
      throw localdrift::StageError("config", e.what());
    }
    if (cmd == generate) {
      localdrift::cmd_generate(config);
    } else if (cmd == inject) {
      localdrift::cmd_inject_drift(config);
    } else if (cmd == detect) {
      const auto r = localdrift::cmd_detect(config);
      std::cout << "alerts: " << r.alerts.size() << " (global "
                << r.global_times.size() << ")\n";
      if (r.score) std::cout << "combined: " << r.score->combined_mean << '\n';
    } else if (cmd == track) {
      const auto r = localdrift::cmd_track_attributions(config);
      std::cout << "reduction_pct: ";
      if (r.summary.reduction_pct) {
        std::cout << *r.summary.reduction_pct << '\n';
      } else {
        std::cout << "n/a\n";
      }
      std::cout << "mean_abs_deviation: " << r.summary.mean_abs_deviation << '\n';
    } else if (cmd == bench) {
      const auto report = localdrift::cmd_bench(config);
      for (const auto& row : report.rows) {
        std::cout << row.stream << ' ' << row.detector << " combined "
                  << row.combined_mean << " +- " << row.combined_std << '\n';
      }
    } else if (cmd == score) {
      const auto report = localdrift::cmd_score(config, alert_log, truth);
      const auto& row = report.rows.front();
      std::cout << "combined " << row.combined_mean << " +- " << row.combined_std << '\n';
    }
  } catch (const localdrift::StageError& e) {
    std::cerr << "localdrift " << cmd->get_name() << ": stage '" << e.stage()
              << "' failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "localdrift " << cmd->get_name() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
