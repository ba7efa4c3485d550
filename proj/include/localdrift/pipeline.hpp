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

#ifndef LOCALDRIFT_PIPELINE_HPP_
#define LOCALDRIFT_PIPELINE_HPP_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "localdrift/baseline.hpp"
#include "localdrift/cluster_tree.hpp"
#include "localdrift/models.hpp"
#include "localdrift/stream.hpp"

namespace localdrift {

// Everything a detector may look at for one prequential step. The model has
// predicted but not yet trained on this observation.
struct StepInput {
  std::int64_t t = 0;
  std::span<const double> x;
  int y = 0;
  int predicted = 0;
  std::span<const double> proba;
  std::span<const double> baseline_proba;
  double diff = 0.0;
};

// Global drift detector fed once per time step.
class DriftDetector {
 public:
  virtual ~DriftDetector() = default;
  virtual std::string name() const = 0;
  // True when the detector signals a global drift at this step.
  virtual bool observe(const StepInput& step) = 0;
  // Local alerts raised during the last observe() call, if the detector has
  // a notion of them.
  virtual std::span<const DriftAlert> last_alerts() const { return {}; }
};

// Cluster-tree detector: local half-window tests plus the Fisher-combined
// global test.
class TreeDetector final : public DriftDetector {
 public:
  TreeDetector(std::size_t dim, TreeConfig config);
  std::string name() const override { return "cdleeds"; }
  bool observe(const StepInput& step) override;
  std::span<const DriftAlert> last_alerts() const override { return alerts_; }

  const ClusterTree& tree() const { return tree_; }

 private:
  ClusterTree tree_;
  std::vector<DriftAlert> alerts_;
};

enum class ModelKind { kLogistic, kGaussianNB };

struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  double learning_rate = 0.1;
};

std::unique_ptr<Classifier> make_model(const ModelSpec& spec,
                                       std::size_t num_features, int num_classes);

// Per-step hook, called after all detectors observed the step and before the
// model trains on it.
using StepHook = std::function<void(const StepInput&, const Classifier&,
                                    const EwmaBaseline&)>;

struct RunTiming {
  // Mean wall time of observe() per detector, milliseconds.
  std::vector<double> mean_update_ms;
};

// Test-then-train loop over a (normalized) stream: predict, update the
// baseline average, feed every detector, call the hook, then train.
RunTiming run_prequential(StreamSource& stream, Classifier& model,
                          EwmaBaseline& baseline,
                          std::span<DriftDetector* const> detectors,
                          const StepHook& hook = {});

}  // namespace localdrift

#endif  // LOCALDRIFT_PIPELINE_HPP_
