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

#include "localdrift/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace localdrift {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticModel::LogisticModel(std::size_t num_features, double learning_rate)
    : weights_(num_features, 0.0), learning_rate_(learning_rate) {
  if (!(learning_rate >= 0.0)) {
    throw std::invalid_argument("LogisticModel: learning rate must be >= 0");
  }
}

LogisticModel::LogisticModel(std::vector<double> weights, double bias,
                             double learning_rate)
    : weights_(std::move(weights)), bias_(bias), learning_rate_(learning_rate) {}

double LogisticModel::margin(std::span<const double> x) const {
  if (x.size() != weights_.size()) {
    throw std::invalid_argument("LogisticModel: expected " +
                                std::to_string(weights_.size()) +
                                " features, got " + std::to_string(x.size()));
  }
  double z = bias_;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights_[j] * x[j];
  return z;
}

double LogisticModel::predict(std::span<const double> x) const {
  return sigmoid(margin(x));
}

void LogisticModel::update(std::span<const double> x, int y) {
  if (y != 0 && y != 1) {
    throw std::invalid_argument("LogisticModel: label must be 0 or 1");
  }
  const double g = learning_rate_ * (predict(x) - static_cast<double>(y));
  if (g == 0.0) return;
  for (std::size_t j = 0; j < x.size(); ++j) weights_[j] -= g * x[j];
  bias_ -= g;
}

std::vector<double> LogisticModel::predict_proba(
    std::span<const double> x) const {
  const double p = predict(x);
  return {1.0 - p, p};
}

GaussianNBModel::GaussianNBModel(std::size_t num_features, int num_classes)
    : num_features_(num_features),
      counts_(static_cast<std::size_t>(std::max(num_classes, 1)), 0.0),
      means_(counts_.size(), std::vector<double>(num_features, 0.0)),
      m2_(counts_.size(), std::vector<double>(num_features, 0.0)) {
  if (num_classes < 1) {
    throw std::invalid_argument("GaussianNBModel: need at least one class");
  }
}

void GaussianNBModel::update(std::span<const double> x, int y) {
  if (y < 0 || y >= num_classes()) {
    throw std::invalid_argument("GaussianNBModel: label " + std::to_string(y) +
                                " out of range");
  }
  if (x.size() != num_features_) {
    throw std::invalid_argument("GaussianNBModel: feature count mismatch");
  }
  const auto c = static_cast<std::size_t>(y);
  counts_[c] += 1.0;
  total_ += 1.0;
  const double n = counts_[c];
  for (std::size_t j = 0; j < num_features_; ++j) {
    const double delta = x[j] - means_[c][j];
    means_[c][j] += delta / n;
    m2_[c][j] += delta * (x[j] - means_[c][j]);
  }
}

double GaussianNBModel::variance(int c, std::size_t j) const {
  const double n = counts_[static_cast<std::size_t>(c)];
  if (n < 2.0) return kVarianceFloor;
  return std::max(m2_[static_cast<std::size_t>(c)][j] / (n - 1.0),
                  kVarianceFloor);
}

double GaussianNBModel::prior(int c) const {
  return total_ > 0.0 ? counts_[static_cast<std::size_t>(c)] / total_ : 0.0;
}

std::vector<double> GaussianNBModel::predict_proba(
    std::span<const double> x) const {
  if (total_ <= 0.0) {
    throw std::logic_error("GaussianNBModel: no classes seen");
  }
  if (x.size() != num_features_) {
    throw std::invalid_argument("GaussianNBModel: feature count mismatch");
  }
  const std::size_t k = counts_.size();
  std::vector<double> log_post(k, -std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    if (counts_[c] <= 0.0) continue;
    double lp = std::log(counts_[c] / total_);
    for (std::size_t j = 0; j < num_features_; ++j) {
      const double var = variance(static_cast<int>(c), j);
      const double d = x[j] - means_[c][j];
      lp -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
    }
    log_post[c] = lp;
    best = std::max(best, lp);
  }
  std::vector<double> proba(k, 0.0);
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts_[c] <= 0.0) continue;
    proba[c] = std::exp(log_post[c] - best);
    sum += proba[c];
  }
  for (auto& p : proba) p /= sum;
  return proba;
}

double detector_input(std::span<const double> model_output,
                      std::span<const double> baseline_output) {
  if (model_output.size() != baseline_output.size() || model_output.empty()) {
    throw std::invalid_argument("detector_input: output shapes differ");
  }
  if (model_output.size() == 1) return model_output[0] - baseline_output[0];
  if (model_output.size() == 2) return model_output[1] - baseline_output[1];
  const auto k = static_cast<std::size_t>(
      std::max_element(model_output.begin(), model_output.end()) -
      model_output.begin());
  return model_output[k] - baseline_output[k];
}

}  // namespace localdrift
