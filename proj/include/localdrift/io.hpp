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

#ifndef LOCALDRIFT_IO_HPP_
#define LOCALDRIFT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "localdrift/attribution.hpp"
#include "localdrift/cluster_tree.hpp"
#include "localdrift/evaluation.hpp"
#include "localdrift/generators.hpp"
#include "localdrift/stream.hpp"

namespace localdrift::io {

// One JSON object per line: {"t","scope","node_id"(local only),"p_value","kind"}.
std::string alert_to_json(const DriftAlert& alert);
void write_alert(std::ostream& out, const DriftAlert& alert);

// Reads a JSON Lines alert log. Throws ParseError with the line number.
std::vector<DriftAlert> read_alert_log(std::istream& in);
std::vector<DriftAlert> read_alert_log(const std::filesystem::path& path);

// Time steps of global alerts, sorted. When the log has no global alerts
// (an external detector without scopes), every alert is used.
std::vector<std::int64_t> global_alert_times(const std::vector<DriftAlert>& alerts);

// {"t","node_count","leaf_count","stored_entries","leaves_per_depth":[...]}
void write_stats(std::ostream& out, std::int64_t t, const TreeStats& stats);

struct Sidecar {
  DriftSchedule schedule;
  std::int64_t rows = 0;
  std::size_t features = 0;
  int classes = 0;
  std::vector<std::string> feature_names;
  std::string generator;  // empty for injected/CSV streams
  std::uint64_t seed = 0;
};

void write_sidecar(const std::filesystem::path& path, const Sidecar& sidecar);
Sidecar read_sidecar(const std::filesystem::path& path);
// "<stem>.json" next to a stream CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

void write_report_csv(std::ostream& out, const BenchmarkReport& report,
                      std::span<const DetectionInterval> intervals);
void write_report_json(std::ostream& out, const BenchmarkReport& report,
                       std::span<const DetectionInterval> intervals);

// Header "t,record,feature,phi,reason"; feature -1 carries phi0.
void write_attribution_header(std::ostream& out);
void write_attribution_rows(std::ostream& out, const AttributionRecord& record,
                            RecomputeReason reason);

void write_recompute_summary(std::ostream& out, const RecomputeSummary& summary);

// Shortest round-trip representation.
std::string format_double(double v);

}  // namespace localdrift::io

#endif  // LOCALDRIFT_IO_HPP_
