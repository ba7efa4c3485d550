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

#include "localdrift/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace localdrift::io {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string alert_to_json(const DriftAlert& alert) {
  ordered_json j;
  j["t"] = alert.t;
  j["scope"] = to_string(alert.scope);
  if (alert.scope == AlertScope::kLocal) j["node_id"] = alert.node_id;
  j["p_value"] = alert.p_value;
  j["kind"] = to_string(alert.kind);
  return j.dump();
}

void write_alert(std::ostream& out, const DriftAlert& alert) {
  out << alert_to_json(alert) << '\n';
}

std::vector<DriftAlert> read_alert_log(std::istream& in) {
  std::vector<DriftAlert> alerts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      DriftAlert a;
      a.t = j.at("t").get<std::int64_t>();
      const std::string scope = j.value("scope", "global");
      if (scope == "local") {
        a.scope = AlertScope::kLocal;
        a.node_id = j.value("node_id", std::int64_t{-1});
      } else if (scope == "global") {
        a.scope = AlertScope::kGlobal;
        a.node_id = -1;
      } else {
        throw ParseError("unknown scope '" + scope + "'");
      }
      a.p_value = j.value("p_value", 0.0);
      const std::string kind = j.value("kind", "change-test");
      a.kind = kind == "prune-retest" ? AlertKind::kPruneRetest
                                      : AlertKind::kChangeTest;
      alerts.push_back(a);
    } catch (const std::exception& e) {
      throw ParseError("alert log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return alerts;
}

std::vector<DriftAlert> read_alert_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open alert log '" + path.string() + "'");
  return read_alert_log(in);
}

std::vector<std::int64_t> global_alert_times(const std::vector<DriftAlert>& alerts) {
  std::vector<std::int64_t> out;
  for (const auto& a : alerts) {
    if (a.scope == AlertScope::kGlobal) out.push_back(a.t);
  }
  if (out.empty()) {
    for (const auto& a : alerts) out.push_back(a.t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_stats(std::ostream& out, std::int64_t t, const TreeStats& stats) {
  ordered_json j;
  j["t"] = t;
  j["node_count"] = stats.node_count;
  j["leaf_count"] = stats.leaf_count;
  j["stored_entries"] = stats.stored_entries;
  j["leaves_per_depth"] = stats.leaves_per_depth;
  out << j.dump() << '\n';
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

void write_sidecar(const std::filesystem::path& path, const Sidecar& s) {
  ordered_json j;
  j["positions"] = s.schedule.positions;
  std::vector<std::int64_t> widths;
  for (std::size_t i = 0; i < s.schedule.positions.size(); ++i) {
    widths.push_back(s.schedule.width(i));
  }
  j["widths"] = widths;
  j["rows"] = s.rows;
  j["features"] = s.features;
  j["classes"] = s.classes;
  j["feature_names"] = s.feature_names;
  if (!s.generator.empty()) {
    j["generator"] = s.generator;
    j["seed"] = s.seed;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sidecar '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

Sidecar read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sidecar '" + path.string() + "'");
  try {
    const auto j = json::parse(in);
    Sidecar s;
    s.schedule.positions = j.at("positions").get<std::vector<std::int64_t>>();
    s.schedule.widths =
        j.value("widths", std::vector<std::int64_t>(s.schedule.positions.size(), 0));
    s.rows = j.value("rows", std::int64_t{0});
    s.features = j.value("features", std::size_t{0});
    s.classes = j.value("classes", 0);
    s.feature_names = j.value("feature_names", std::vector<std::string>{});
    s.generator = j.value("generator", std::string{});
    s.seed = j.value("seed", std::uint64_t{0});
    return s;
  } catch (const json::exception& e) {
    throw ParseError("sidecar '" + path.string() + "': " + e.what());
  }
}

namespace {

std::string interval_label(const DetectionInterval& i) {
  return format_double(i.fraction);
}

}  // namespace

void write_report_csv(std::ostream& out, const BenchmarkReport& report,
                      std::span<const DetectionInterval> intervals) {
  out << "stream,detector,recall_mean,recall_std,fdr_mean,fdr_std,"
         "combined_mean,combined_std,delay,detected,drifts,alerts,"
         "mean_update_ms";
  for (const auto& i : intervals) out << ",combined@" << interval_label(i);
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.stream << ',' << r.detector << ',' << format_double(r.recall_mean)
        << ',' << format_double(r.recall_std) << ',' << format_double(r.fdr_mean)
        << ',' << format_double(r.fdr_std) << ','
        << format_double(r.combined_mean) << ','
        << format_double(r.combined_std) << ','
        << (r.delay ? format_double(*r.delay) : std::string{}) << ','
        << r.detected_drifts << ',' << r.total_drifts << ',' << r.alerts << ','
        << (r.mean_update_ms ? format_double(*r.mean_update_ms) : std::string{});
    for (double c : r.combined_per_interval) out << ',' << format_double(c);
    out << '\n';
  }
}

void write_report_json(std::ostream& out, const BenchmarkReport& report,
                       std::span<const DetectionInterval> intervals) {
  ordered_json j;
  std::vector<double> fractions;
  for (const auto& i : intervals) fractions.push_back(i.fraction);
  j["interval_fractions"] = fractions;
  j["rows"] = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["stream"] = r.stream;
    row["detector"] = r.detector;
    row["recall"] = {{"mean", r.recall_mean}, {"std", r.recall_std}};
    row["fdr"] = {{"mean", r.fdr_mean}, {"std", r.fdr_std}};
    row["combined"] = {{"mean", r.combined_mean}, {"std", r.combined_std}};
    row["combined_per_interval"] = r.combined_per_interval;
    row["delay"] = r.delay ? ordered_json(*r.delay) : ordered_json(nullptr);
    row["detected_drifts"] = r.detected_drifts;
    row["total_drifts"] = r.total_drifts;
    row["alerts"] = r.alerts;
    if (r.mean_update_ms) row["mean_update_ms"] = *r.mean_update_ms;
    j["rows"].push_back(row);
  }
  out << j.dump(2) << '\n';
}

void write_attribution_header(std::ostream& out) {
  out << "t,record,feature,phi,reason\n";
}

void write_attribution_rows(std::ostream& out, const AttributionRecord& record,
                            RecomputeReason reason) {
  const auto& a = record.current;
  const char* why = to_string(reason);
  out << a.t << ',' << record.id << ",-1," << format_double(a.phi0) << ','
      << why << '\n';
  for (std::size_t j = 0; j < a.phi.size(); ++j) {
    out << a.t << ',' << record.id << ',' << j << ',' << format_double(a.phi[j])
        << ',' << why << '\n';
  }
}

void write_recompute_summary(std::ostream& out, const RecomputeSummary& s) {
  ordered_json j;
  j["records"] = s.records;
  j["steps"] = s.steps;
  j["reduction_pct"] =
      s.reduction_pct ? ordered_json(*s.reduction_pct) : ordered_json("n/a");
  j["mean_abs_deviation"] = s.mean_abs_deviation;
  j["oracle_min"] = s.oracle_min;
  j["oracle_max"] = s.oracle_max;
  const double range = s.oracle_range();
  j["deviation_pct_of_range"] =
      range > 0.0 ? ordered_json(100.0 * s.mean_abs_deviation / range)
                  : ordered_json("n/a");
  out << j.dump(2) << '\n';
}

}  // namespace localdrift::io
