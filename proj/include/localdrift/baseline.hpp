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

#ifndef LOCALDRIFT_BASELINE_HPP_
#define LOCALDRIFT_BASELINE_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include "localdrift/models.hpp"

namespace localdrift {

// Exponentially weighted moving average of the observations. The model
// evaluated at this point is the baseline outcome used both by the detector
// and by the attributions. The first observation initializes the average.
class EwmaBaseline {
 public:
  explicit EwmaBaseline(double beta);

  // ewma <- beta * x + (1 - beta) * ewma.
  void update(std::span<const double> x);

  // Pins the reference point; later updates are ignored. Used to run the
  // detector against a fixed reference input.
  void freeze_at(std::span<const double> x);

  bool initialized() const { return initialized_; }
  double beta() const { return beta_; }
  std::span<const double> value() const { return ewma_; }

  // Model output at the current average. Throws if not initialized.
  std::vector<double> evaluate(const Classifier& model) const;

 private:
  double beta_;
  bool initialized_ = false;
  bool frozen_ = false;
  std::vector<double> ewma_;
};

// Any prediction function evaluated at the current average, e.g. a margin.
template <typename Fn>
auto baseline_value(const EwmaBaseline& state, Fn&& fn) {
  if (!state.initialized()) {
    throw std::logic_error("baseline_value: baseline not initialized");
  }
  return fn(state.value());
}

}  // namespace localdrift

#endif  // LOCALDRIFT_BASELINE_HPP_
