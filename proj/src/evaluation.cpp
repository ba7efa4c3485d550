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

#include "localdrift/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace localdrift {

DetectionInterval::DetectionInterval(double f) : fraction(f) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw std::invalid_argument("detection interval fraction must be in (0, 1]");
  }
}

std::vector<DetectionInterval> default_intervals() {
  return {DetectionInterval(0.01), DetectionInterval(0.025),
          DetectionInterval(0.05), DetectionInterval(0.075),
          DetectionInterval(0.10)};
}

std::vector<std::optional<std::int64_t>> compute_delay(
    std::span<const std::int64_t> truth, std::span<const std::int64_t> alerts) {
  std::vector<std::optional<std::int64_t>> delays;
  delays.reserve(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::int64_t p = truth[i];
    const auto it = std::lower_bound(alerts.begin(), alerts.end(), p);
    if (it != alerts.end() && (i + 1 >= truth.size() || *it < truth[i + 1])) {
      delays.emplace_back(*it - p);
    } else {
      delays.emplace_back(std::nullopt);
    }
  }
  return delays;
}

std::optional<double> mean_delay(
    std::span<const std::optional<std::int64_t>> delays) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : delays) {
    if (!d) continue;
    sum += static_cast<double>(*d);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

RecallFdr compute_recall_fdr(std::span<const std::int64_t> truth,
                             std::span<const std::int64_t> alerts,
                             DetectionInterval interval,
                             std::int64_t stream_length, std::int64_t warmup) {
  if (warmup < 0) throw std::invalid_argument("warmup must be >= 0");
  const double length = interval.fraction * static_cast<double>(stream_length);
  std::vector<bool> detected(truth.size(), false);
  RecallFdr r;
  for (const std::int64_t a : alerts) {
    if (a < warmup) continue;
    ++r.counted_alerts;
    const auto it = std::upper_bound(truth.begin(), truth.end(), a);
    if (it == truth.begin()) {
      ++r.false_alerts;
      continue;
    }
    const auto idx = static_cast<std::size_t>(it - truth.begin()) - 1;
    if (static_cast<double>(a - truth[idx]) <= length) {
      detected[idx] = true;
    } else {
      ++r.false_alerts;
    }
  }
  r.detected_drifts =
      static_cast<std::size_t>(std::count(detected.begin(), detected.end(), true));
  r.recall = truth.empty() ? 0.0
                           : static_cast<double>(r.detected_drifts) /
                                 static_cast<double>(truth.size());
  r.fdr = r.counted_alerts == 0 ? 0.0
                                : static_cast<double>(r.false_alerts) /
                                      static_cast<double>(r.counted_alerts);
  return r;
}

double combined_score(double recall, double fdr) {
  if (!(recall >= 0.0 && recall <= 1.0) || !(fdr >= 0.0 && fdr <= 1.0)) {
    throw std::invalid_argument("combined_score: recall and fdr must be in [0, 1]");
  }
  return (recall + (1.0 - fdr)) / 2.0;
}

DdmStatus Ddm::update(bool correct) {
  if (state_.status == DdmStatus::kDrift) state_ = DdmState{};
  auto& s = state_;
  ++s.i;
  const double error = correct ? 0.0 : 1.0;
  const double n = static_cast<double>(s.i);
  s.p += (error - s.p) / n;
  s.s = std::sqrt(s.p * (1.0 - s.p) / n);
  s.status = DdmStatus::kStable;
  if (s.i < kMinSamples) return s.status;
  if (s.p + s.s <= s.p_min + s.s_min) {
    s.p_min = s.p;
    s.s_min = s.s;
  }
  if (s.p + s.s > s.p_min + kDriftLevel * s.s_min) {
    s.status = DdmStatus::kDrift;
  } else if (s.p + s.s > s.p_min + kWarningLevel * s.s_min) {
    s.status = DdmStatus::kWarning;
  }
  return s.status;
}

ScheduledDetector::ScheduledDetector(std::string name,
                                     std::vector<std::int64_t> alerts)
    : name_(std::move(name)), alerts_(std::move(alerts)) {
  std::sort(alerts_.begin(), alerts_.end());
}

bool ScheduledDetector::observe(const StepInput& step) {
  return std::binary_search(alerts_.begin(), alerts_.end(), step.t);
}

const ReportRow* BenchmarkReport::find(const std::string& stream,
                                       const std::string& detector) const {
  for (const auto& r : rows) {
    if (r.stream == stream && r.detector == detector) return &r;
  }
  return nullptr;
}

namespace {

std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

ReportRow score_alerts(std::string stream, std::string detector,
                       std::span<const std::int64_t> alerts,
                       std::span<const std::int64_t> truth,
                       std::int64_t stream_length,
                       std::span<const DetectionInterval> intervals,
                       std::int64_t warmup) {
  ReportRow row;
  row.stream = std::move(stream);
  row.detector = std::move(detector);
  row.total_drifts = truth.size();
  row.alerts = alerts.size();
  std::vector<double> recall, fdr, combined;
  for (const auto& interval : intervals) {
    const auto r = compute_recall_fdr(truth, alerts, interval, stream_length, warmup);
    recall.push_back(r.recall);
    fdr.push_back(r.fdr);
    combined.push_back(combined_score(r.recall, r.fdr));
  }
  std::tie(row.recall_mean, row.recall_std) = mean_std(recall);
  std::tie(row.fdr_mean, row.fdr_std) = mean_std(fdr);
  std::tie(row.combined_mean, row.combined_std) = mean_std(combined);
  row.combined_per_interval = combined;
  const auto delays = compute_delay(truth, alerts);
  row.delay = mean_delay(delays);
  row.detected_drifts = static_cast<std::size_t>(std::count_if(
      delays.begin(), delays.end(), [](const auto& d) { return d.has_value(); }));
  return row;
}

BenchmarkReport run_benchmark(const std::vector<BenchmarkStream>& streams,
                              const std::vector<DetectorFactory>& detectors,
                              const BenchmarkOptions& options) {
  if (detectors.empty()) {
    throw std::invalid_argument("run_benchmark: no detectors configured");
  }
  for (const auto& s : streams) {
    if (s.data.metadata().drift_positions.empty()) {
      throw std::invalid_argument("run_benchmark: stream '" + s.name +
                                  "' has no ground-truth drifts");
    }
  }
  std::vector<std::vector<ReportRow>> per_stream(streams.size());
  std::vector<std::string> errors(streams.size());
  const auto n_streams = static_cast<std::int64_t>(streams.size());

#ifdef LOCALDRIFT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t si = 0; si < n_streams; ++si) {
    const auto& spec = streams[static_cast<std::size_t>(si)];
    try {
      BufferedStream data = spec.data;
      data.rewind();
      const auto& meta = data.metadata();
      auto model = make_model(spec.model, meta.num_features, meta.num_classes);
      EwmaBaseline baseline(spec.beta);

      std::vector<std::unique_ptr<DriftDetector>> owned;
      std::vector<DriftDetector*> raw;
      for (const auto& make : detectors) {
        owned.push_back(make(spec));
        raw.push_back(owned.back().get());
      }
      std::vector<std::vector<std::int64_t>> alerts(raw.size());
      // Wrap detectors so that global alerts are recorded.
      class Recording final : public DriftDetector {
       public:
        Recording(DriftDetector& inner, std::vector<std::int64_t>& out)
            : inner_(inner), out_(out) {}
        std::string name() const override { return inner_.name(); }
        bool observe(const StepInput& step) override {
          const bool alert = inner_.observe(step);
          if (alert) out_.push_back(step.t);
          return alert;
        }

       private:
        DriftDetector& inner_;
        std::vector<std::int64_t>& out_;
      };
      std::vector<std::unique_ptr<DriftDetector>> wrappers;
      std::vector<DriftDetector*> wrapped;
      for (std::size_t d = 0; d < raw.size(); ++d) {
        wrappers.push_back(std::make_unique<Recording>(*raw[d], alerts[d]));
        wrapped.push_back(wrappers.back().get());
      }
      const auto timing = run_prequential(data, *model, baseline, wrapped);

      const auto length = static_cast<std::int64_t>(data.size());
      for (std::size_t d = 0; d < raw.size(); ++d) {
        auto row = score_alerts(spec.name, raw[d]->name(), alerts[d],
                                meta.drift_positions, length, options.intervals,
                                options.warmup);
        if (options.record_timing) row.mean_update_ms = timing.mean_update_ms[d];
        per_stream[static_cast<std::size_t>(si)].push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(si)] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("benchmark stream '" + streams[i].name +
                               "': " + errors[i]);
    }
  }
  BenchmarkReport report;
  for (auto& rows : per_stream) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace localdrift
