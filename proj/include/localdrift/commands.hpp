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

#ifndef LOCALDRIFT_COMMANDS_HPP_
#define LOCALDRIFT_COMMANDS_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "localdrift/attribution.hpp"
#include "localdrift/config.hpp"
#include "localdrift/evaluation.hpp"

namespace localdrift {

// Error raised by a command, tagged with the stage that failed.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Stream described by the config: CSV (with an optional sidecar next to it
// carrying the drift positions) or the configured generator. Not normalized.
BufferedStream load_stream(const RunConfig& config);
BufferedStream load_csv_stream(const std::filesystem::path& path,
                               const RunConfig& config);

// Min-max scales every row in place using statistics of the whole stream.
void normalize_stream(BufferedStream& stream);

struct DetectResult {
  std::vector<DriftAlert> alerts;  // local and global, in emission order
  std::vector<std::int64_t> global_times;
  std::optional<ReportRow> score;  // when ground truth is known
};

struct TrackResult {
  RecomputeSummary summary;
  std::vector<AttributionRecord> records;
};

// Each command writes its files under config.out (created if missing).
// generate: stream.csv + stream.json
void cmd_generate(const RunConfig& config);
// inject-drift: reads config.input, writes injected.csv + injected.json
void cmd_inject_drift(const RunConfig& config);
// detect: alerts.jsonl, stats.jsonl, summary.json
DetectResult cmd_detect(const RunConfig& config);
// track-attributions: attributions.csv, summary.json
TrackResult cmd_track_attributions(const RunConfig& config);
// bench: report.csv, report.json
BenchmarkReport cmd_bench(const RunConfig& config);
// score: scores an external alert log against a sidecar; report.csv/json
BenchmarkReport cmd_score(const RunConfig& config,
                          const std::filesystem::path& alert_log,
                          const std::filesystem::path& sidecar);

}  // namespace localdrift

#endif  // LOCALDRIFT_COMMANDS_HPP_
