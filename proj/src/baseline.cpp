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

#include "localdrift/baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace localdrift {

EwmaBaseline::EwmaBaseline(double beta) : beta_(beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("EwmaBaseline: beta must be in [0, 1]");
  }
}

void EwmaBaseline::update(std::span<const double> x) {
  if (frozen_) return;
  if (!initialized_) {
    ewma_.assign(x.begin(), x.end());
    initialized_ = true;
    return;
  }
  if (x.size() != ewma_.size()) {
    throw std::invalid_argument("EwmaBaseline::update: length mismatch");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    ewma_[j] = beta_ * x[j] + (1.0 - beta_) * ewma_[j];
  }
}

void EwmaBaseline::freeze_at(std::span<const double> x) {
  ewma_.assign(x.begin(), x.end());
  initialized_ = true;
  frozen_ = true;
}

std::vector<double> EwmaBaseline::evaluate(const Classifier& model) const {
  if (!initialized_) {
    throw std::logic_error("EwmaBaseline::evaluate: baseline not initialized");
  }
  return model.predict_proba(ewma_);
}

}  // namespace localdrift
