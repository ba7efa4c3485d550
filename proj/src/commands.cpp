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

#include "localdrift/commands.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "localdrift/io.hpp"
#include "localdrift/pipeline.hpp"
#include "json.hpp"

namespace localdrift {

namespace {

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::filesystem::path prepare_out(const RunConfig& config) {
  return stage("output", [&] {
    std::filesystem::create_directories(config.out);
    return config.out;
  });
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError("output", "cannot write '" + path.string() + "'");
  return out;
}

io::Sidecar sidecar_for(const BufferedStream& s, const DriftSchedule& schedule) {
  io::Sidecar sc;
  sc.schedule = schedule;
  sc.rows = static_cast<std::int64_t>(s.size());
  sc.features = s.metadata().num_features;
  sc.classes = s.metadata().num_classes;
  sc.feature_names = s.metadata().feature_names;
  return sc;
}

std::vector<DetectionInterval> intervals_of(const RunConfig& config) {
  std::vector<DetectionInterval> out;
  for (double f : config.interval_fractions) out.emplace_back(f);
  return out;
}

std::string stream_name(const std::filesystem::path& p) {
  return p.stem().string();
}

}  // namespace

BufferedStream load_csv_stream(const std::filesystem::path& path,
                               const RunConfig& config) {
  CsvOptions opts;
  opts.label_column = config.label_column;
  opts.has_header = config.has_header;
  BufferedStream s = read_csv(path, opts);
  const auto side = io::sidecar_path(path);
  if (std::filesystem::exists(side)) {
    const auto sc = io::read_sidecar(side);
    sc.schedule.validate(static_cast<std::int64_t>(s.size()));
    s.mutable_metadata().drift_positions = sc.schedule.positions;
    if (sc.feature_names.size() == s.metadata().num_features) {
      s.mutable_metadata().feature_names = sc.feature_names;
    }
  }
  return s;
}

BufferedStream load_stream(const RunConfig& config) {
  if (!config.input.empty()) return load_csv_stream(config.input, config);
  return generate(config.generator_config());
}

void normalize_stream(BufferedStream& stream) {
  const Normalizer n = fit_normalizer(stream);
  for (auto& row : stream.mutable_rows()) normalize_in_place(n, row.obs.x);
  stream.rewind();
}

void cmd_generate(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  const auto gen = stage("config", [&] {
    auto g = config.generator_config();
    g.validate();
    return g;
  });
  const auto stream = stage("generate", [&] { return generate(gen); });
  const auto out = prepare_out(config);
  stage("output", [&] {
    write_csv(out / "stream.csv", stream);
    auto sc = sidecar_for(stream, gen.schedule);
    sc.generator = config.generator;
    sc.seed = config.seed;
    io::write_sidecar(out / "stream.json", sc);
  });
}

void cmd_inject_drift(const RunConfig& config) {
  stage("config", [&] {
    config.validate();
    if (config.input.empty()) throw ConfigError("input", "a CSV input is required");
    if (config.drift_positions.empty()) {
      throw ConfigError("drift_positions", "at least one position is required");
    }
  });
  auto stream = stage("read", [&] { return load_csv_stream(config.input, config); });
  const auto schedule = config.schedule();
  const auto injected = stage("inject", [&] {
    return permute_inject(stream, schedule, config.top_fraction, config.seed,
                          config.mi_bins);
  });
  const auto out = prepare_out(config);
  stage("output", [&] {
    write_csv(out / "injected.csv", injected);
    io::write_sidecar(out / "injected.json", sidecar_for(injected, schedule));
  });
}

DetectResult cmd_detect(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  auto stream = stage("read", [&] { return load_stream(config); });
  stage("normalize", [&] { normalize_stream(stream); });
  const auto out = prepare_out(config);
  auto alert_log = open_out(out / "alerts.jsonl");
  auto stats_log = open_out(out / "stats.jsonl");

  DetectResult result;
  stage("detect", [&] {
    const auto& meta = stream.metadata();
    auto model = make_model(config.model_spec(), meta.num_features, meta.num_classes);
    EwmaBaseline baseline(config.beta);
    TreeDetector detector(meta.num_features, config.tree_config());
    DriftDetector* detectors[] = {&detector};
    run_prequential(stream, *model, baseline, detectors,
                    [&](const StepInput& step, const Classifier&, const EwmaBaseline&) {
                      for (const auto& a : detector.last_alerts()) {
                        io::write_alert(alert_log, a);
                        result.alerts.push_back(a);
                        if (a.scope == AlertScope::kGlobal) {
                          result.global_times.push_back(a.t);
                        }
                      }
                      io::write_stats(stats_log, step.t, detector.tree().stats());
                    });
  });

  stage("score", [&] {
    nlohmann::ordered_json j;
    const auto& truth = stream.metadata().drift_positions;
    std::size_t local = 0;
    for (const auto& a : result.alerts) local += a.scope == AlertScope::kLocal;
    j["observations"] = stream.size();
    j["local_alerts"] = local;
    j["global_alerts"] = result.global_times.size();
    if (!truth.empty()) {
      const auto intervals = intervals_of(config);
      result.score = score_alerts("stream", "cdleeds", result.global_times, truth,
                                  static_cast<std::int64_t>(stream.size()),
                                  intervals, config.warmup);
      j["recall"] = result.score->recall_mean;
      j["fdr"] = result.score->fdr_mean;
      j["combined"] = result.score->combined_mean;
      j["delay"] = result.score->delay ? nlohmann::ordered_json(*result.score->delay)
                                       : nlohmann::ordered_json(nullptr);
    }
    auto summary = open_out(out / "summary.json");
    summary << j.dump(2) << '\n';
  });
  return result;
}

TrackResult cmd_track_attributions(const RunConfig& config) {
  stage("config", [&] {
    config.validate();
    if (config.model != ModelKind::kLogistic) {
      throw ConfigError("model", "attribution tracking needs the linear model (logreg)");
    }
  });
  auto stream = stage("read", [&] { return load_stream(config); });
  stage("normalize", [&] { normalize_stream(stream); });

  const auto pool = std::min<std::int64_t>(config.sample_pool,
                                           static_cast<std::int64_t>(stream.size()));
  const auto k = std::min(config.tracked, pool);
  std::vector<Observation> tracked;
  stage("sample", [&] {
    std::vector<std::size_t> idx(static_cast<std::size_t>(pool));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(config.seed);
    shuffle(std::span<std::size_t>(idx), rng);
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());
    for (auto i : idx) tracked.push_back(stream.rows()[i].obs);
  });

  const auto out = prepare_out(config);
  auto trace = open_out(out / "attributions.csv");
  io::write_attribution_header(trace);

  TrackResult result;
  AttributionManager manager(tracked);
  RecomputeMetrics metrics;
  stage("track", [&] {
    const auto& meta = stream.metadata();
    auto model = make_model(config.model_spec(), meta.num_features, meta.num_classes);
    EwmaBaseline baseline(config.beta);
    TreeDetector detector(meta.num_features, config.tree_config());
    DriftDetector* detectors[] = {&detector};
    const std::int64_t start = pool - 1;
    bool started = false;
    run_prequential(
        stream, *model, baseline, detectors,
        [&](const StepInput& step, const Classifier& m, const EwmaBaseline& b) {
          if (tracked.empty() || step.t < start) return;
          const auto& lin = static_cast<const LogisticModel&>(m);
          if (!started) {
            manager.initialize(detector.tree(), lin, b.value(), step.t);
            started = true;
            for (const auto& r : manager.records()) {
              io::write_attribution_rows(trace, r, RecomputeReason::kInitial);
            }
          } else {
            const auto changed = manager.step(detector.tree(), detector.last_alerts(),
                                              lin, b.value(), step.t);
            for (auto i : changed) {
              const auto& r = manager.records()[i];
              io::write_attribution_rows(trace, r, r.log.back().second);
            }
          }
          if (config.oracle) {
            metrics.observe(manager.records(),
                            oracle_attributions(manager.records(), lin, b.value()));
          }
        });
  });
  result.summary = metrics.summary(manager.records());
  result.records = manager.records();
  stage("output", [&] {
    auto summary = open_out(out / "summary.json");
    io::write_recompute_summary(summary, result.summary);
  });
  return result;
}

BenchmarkReport cmd_bench(const RunConfig& config) {
  stage("config", [&] {
    config.validate();
    if (config.detectors.empty()) throw ConfigError("detectors", "must not be empty");
  });
  std::vector<BenchmarkStream> streams;
  stage("read", [&] {
    auto add = [&](std::string name, BufferedStream data) {
      if (data.metadata().drift_positions.empty()) {
        throw ConfigError("streams", "stream '" + name + "' has no ground truth");
      }
      normalize_stream(data);
      streams.push_back(BenchmarkStream{std::move(name), std::move(data),
                                        config.model_spec(), config.beta});
    };
    if (config.streams.empty()) {
      add(config.input.empty() ? config.generator : stream_name(config.input),
          load_stream(config));
    } else {
      for (const auto& p : config.streams) add(stream_name(p), load_csv_stream(p, config));
    }
  });
  std::vector<DetectorFactory> factories;
  const auto tree_config = config.tree_config();
  for (const auto& d : config.detectors) {
    if (d == "cdleeds") {
      factories.push_back([tree_config](const BenchmarkStream& s) {
        return std::make_unique<TreeDetector>(s.data.metadata().num_features,
                                              tree_config);
      });
    } else {
      factories.push_back(
          [](const BenchmarkStream&) { return std::make_unique<DdmDetector>(); });
    }
  }
  BenchmarkOptions options;
  options.intervals = intervals_of(config);
  options.warmup = config.warmup;
  options.record_timing = config.with_timing;
  auto report = stage("bench", [&] { return run_benchmark(streams, factories, options); });
  const auto out = prepare_out(config);
  stage("output", [&] {
    auto csv = open_out(out / "report.csv");
    io::write_report_csv(csv, report, options.intervals);
    auto json = open_out(out / "report.json");
    io::write_report_json(json, report, options.intervals);
  });
  return report;
}

BenchmarkReport cmd_score(const RunConfig& config,
                          const std::filesystem::path& alert_log,
                          const std::filesystem::path& sidecar) {
  stage("config", [&] { config.validate(); });
  const auto alerts = stage("read", [&] { return io::read_alert_log(alert_log); });
  const auto sc = stage("read", [&] {
    auto s = io::read_sidecar(sidecar);
    if (s.schedule.positions.empty()) throw ParseError("sidecar has no drift positions");
    if (s.rows <= 0) throw ParseError("sidecar is missing the row count");
    return s;
  });
  const auto intervals = intervals_of(config);
  BenchmarkReport report;
  report.rows.push_back(stage("score", [&] {
    return score_alerts(stream_name(sidecar), stream_name(alert_log),
                        io::global_alert_times(alerts), sc.schedule.positions,
                        sc.rows, intervals, config.warmup);
  }));
  const auto out = prepare_out(config);
  stage("output", [&] {
    auto csv = open_out(out / "report.csv");
    io::write_report_csv(csv, report, intervals);
    auto json = open_out(out / "report.json");
    io::write_report_json(json, report, intervals);
  });
  return report;
}

}  // namespace localdrift
