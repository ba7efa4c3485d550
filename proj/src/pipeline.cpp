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

#include "localdrift/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace localdrift {

TreeDetector::TreeDetector(std::size_t dim, TreeConfig config)
    : tree_(dim, config) {}

bool TreeDetector::observe(const StepInput& step) {
  alerts_ = tree_.update(step.x, step.diff, step.t);
  if (auto global = tree_.test_global_change(step.t)) {
    alerts_.push_back(*global);
    return true;
  }
  return false;
}

std::unique_ptr<Classifier> make_model(const ModelSpec& spec,
                                       std::size_t num_features,
                                       int num_classes) {
  switch (spec.kind) {
    case ModelKind::kLogistic:
      if (num_classes > 2) {
        throw std::invalid_argument(
            "logistic model supports binary labels only (found " +
            std::to_string(num_classes) + " classes)");
      }
      return std::make_unique<LogisticModel>(num_features, spec.learning_rate);
    case ModelKind::kGaussianNB:
      return std::make_unique<GaussianNBModel>(num_features,
                                               std::max(num_classes, 2));
  }
  throw std::invalid_argument("unknown model kind");
}

RunTiming run_prequential(StreamSource& stream, Classifier& model,
                          EwmaBaseline& baseline,
                          std::span<DriftDetector* const> detectors,
                          const StepHook& hook) {
  using Clock = std::chrono::steady_clock;
  std::vector<Clock::duration> spent(detectors.size(), Clock::duration::zero());
  std::int64_t steps = 0;
  const auto k = static_cast<std::size_t>(model.num_classes());
  const std::vector<double> uniform(k, 1.0 / static_cast<double>(k));

  while (auto row = stream.next()) {
    const auto& x = row->obs.x;
    baseline.update(x);
    std::vector<double> proba = uniform;
    std::vector<double> base = uniform;
    if (model.ready()) {
      proba = model.predict_proba(x);
      base = baseline.evaluate(model);
    }
    StepInput step;
    step.t = row->obs.t;
    step.x = x;
    step.y = row->y;
    step.predicted = static_cast<int>(
        std::max_element(proba.begin(), proba.end()) - proba.begin());
    step.proba = proba;
    step.baseline_proba = base;
    step.diff = detector_input(proba, base);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      const auto start = Clock::now();
      detectors[d]->observe(step);
      spent[d] += Clock::now() - start;
    }
    if (hook) hook(step, model, baseline);
    model.learn(x, row->y);
    ++steps;
  }

  RunTiming timing;
  for (const auto& s : spent) {
    timing.mean_update_ms.push_back(
        steps > 0 ? std::chrono::duration<double, std::milli>(s).count() /
                        static_cast<double>(steps)
                  : 0.0);
  }
  return timing;
}

}  // namespace localdrift
