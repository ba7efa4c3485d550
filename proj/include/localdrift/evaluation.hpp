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

#ifndef LOCALDRIFT_EVALUATION_HPP_
#define LOCALDRIFT_EVALUATION_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "localdrift/generators.hpp"
#include "localdrift/pipeline.hpp"

namespace localdrift {

// Length of the true-positive interval after a drift, as a fraction of the
// stream length.
struct DetectionInterval {
  double fraction = 0.05;
  explicit DetectionInterval(double f);
};

std::vector<DetectionInterval> default_intervals();

// Per drift: first alert at or after the position and before the next
// position, minus the position. nullopt if there is none.
std::vector<std::optional<std::int64_t>> compute_delay(
    std::span<const std::int64_t> truth, std::span<const std::int64_t> alerts);

// Mean over detected drifts; nullopt when nothing was detected.
std::optional<double> mean_delay(
    std::span<const std::optional<std::int64_t>> delays);

struct RecallFdr {
  double recall = 0.0;
  double fdr = 0.0;
  std::size_t counted_alerts = 0;
  std::size_t false_alerts = 0;
  std::size_t detected_drifts = 0;
};

// Alerts before `warmup` are dropped. An alert is a true positive iff it
// lies in [p, p + fraction * stream_length] for p the latest drift position
// not after it. Each drift is detected at most once.
RecallFdr compute_recall_fdr(std::span<const std::int64_t> truth,
                             std::span<const std::int64_t> alerts,
                             DetectionInterval interval,
                             std::int64_t stream_length, std::int64_t warmup);

// (recall + (1 - fdr)) / 2.
double combined_score(double recall, double fdr);

enum class DdmStatus { kStable, kWarning, kDrift };

struct DdmState {
  std::int64_t i = 0;
  double p = 0.0;
  double s = 0.0;
  double p_min = std::numeric_limits<double>::infinity();
  double s_min = std::numeric_limits<double>::infinity();
  DdmStatus status = DdmStatus::kStable;
};

// Error-rate drift detector. Thresholds activate after kMinSamples samples;
// a drift resets the state.
class Ddm {
 public:
  static constexpr std::int64_t kMinSamples = 30;
  static constexpr double kWarningLevel = 2.0;
  static constexpr double kDriftLevel = 3.0;

  // Returns the status after this sample; true drift resets the state.
  DdmStatus update(bool correct);
  const DdmState& state() const { return state_; }

 private:
  DdmState state_;
};

class DdmDetector final : public DriftDetector {
 public:
  std::string name() const override { return "ddm"; }
  bool observe(const StepInput& step) override {
    return ddm_.update(step.predicted == step.y) == DdmStatus::kDrift;
  }

 private:
  Ddm ddm_;
};

// Alerts exactly at the given positions; a scoring fixture.
class ScheduledDetector final : public DriftDetector {
 public:
  ScheduledDetector(std::string name, std::vector<std::int64_t> alerts);
  std::string name() const override { return name_; }
  bool observe(const StepInput& step) override;

 private:
  std::string name_;
  std::vector<std::int64_t> alerts_;
};

struct ReportRow {
  std::string stream;
  std::string detector;
  double recall_mean = 0.0, recall_std = 0.0;
  double fdr_mean = 0.0, fdr_std = 0.0;
  double combined_mean = 0.0, combined_std = 0.0;
  std::optional<double> delay;
  std::size_t detected_drifts = 0;
  std::size_t total_drifts = 0;
  std::size_t alerts = 0;
  std::optional<double> mean_update_ms;
  std::vector<double> combined_per_interval;
};

struct BenchmarkReport {
  std::vector<ReportRow> rows;
  const ReportRow* find(const std::string& stream,
                        const std::string& detector) const;
};

// Scores one alert sequence against ground truth over all intervals
// (mean and population standard deviation across intervals).
ReportRow score_alerts(std::string stream, std::string detector,
                       std::span<const std::int64_t> alerts,
                       std::span<const std::int64_t> truth,
                       std::int64_t stream_length,
                       std::span<const DetectionInterval> intervals,
                       std::int64_t warmup);

struct BenchmarkStream {
  std::string name;
  BufferedStream data;  // normalized, with drift positions in its metadata
  ModelSpec model;
  double beta = 0.001;
};

using DetectorFactory =
    std::function<std::unique_ptr<DriftDetector>(const BenchmarkStream&)>;

struct BenchmarkOptions {
  std::vector<DetectionInterval> intervals = default_intervals();
  std::int64_t warmup = 1000;
  bool record_timing = false;
};

// One prequential pass per stream with every detector attached; streams run
// in parallel. Rows are ordered stream-major, detector-minor.
BenchmarkReport run_benchmark(const std::vector<BenchmarkStream>& streams,
                              const std::vector<DetectorFactory>& detectors,
                              const BenchmarkOptions& options);

}  // namespace localdrift

#endif  // LOCALDRIFT_EVALUATION_HPP_
