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

#ifndef LOCALDRIFT_MODELS_HPP_
#define LOCALDRIFT_MODELS_HPP_

#include <memory>
#include <span>
#include <vector>

namespace localdrift {

// Incremental classifier seen by the detector: a probability vector per
// input and one training step per labeled observation.
class Classifier {
 public:
  virtual ~Classifier() = default;

  // Probability per class; size() == num_classes().
  virtual std::vector<double> predict_proba(std::span<const double> x) const = 0;
  virtual void learn(std::span<const double> x, int y) = 0;
  virtual int num_classes() const = 0;
  // False until the model can produce predictions.
  virtual bool ready() const { return true; }
  virtual std::unique_ptr<Classifier> clone() const = 0;
};

// Binary logistic regression trained by plain SGD on the log-loss.
class LogisticModel final : public Classifier {
 public:
  LogisticModel(std::size_t num_features, double learning_rate);
  LogisticModel(std::vector<double> weights, double bias, double learning_rate);

  double margin(std::span<const double> x) const;
  // sigmoid(margin(x)), probability of class 1.
  double predict(std::span<const double> x) const;
  // w -= lr (p - y) x; b -= lr (p - y).
  void update(std::span<const double> x, int y);

  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn(std::span<const double> x, int y) override { update(x, y); }
  int num_classes() const override { return 2; }
  std::unique_ptr<Classifier> clone() const override {
    return std::make_unique<LogisticModel>(*this);
  }

  std::span<const double> weights() const { return weights_; }
  std::span<double> mutable_weights() { return weights_; }
  double bias() const { return bias_; }
  void set_bias(double b) { bias_ = b; }
  double learning_rate() const { return learning_rate_; }
  void set_learning_rate(double lr) { learning_rate_ = lr; }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  double learning_rate_;
};

double sigmoid(double z);

// Gaussian naive Bayes with Welford running moments per class and feature.
class GaussianNBModel final : public Classifier {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  GaussianNBModel(std::size_t num_features, int num_classes);

  void update(std::span<const double> x, int y);
  // Posterior over all classes; classes without samples get 0. Throws
  // std::logic_error before the first update.
  std::vector<double> predict_proba(std::span<const double> x) const override;
  void learn(std::span<const double> x, int y) override { update(x, y); }
  int num_classes() const override { return static_cast<int>(counts_.size()); }
  bool ready() const override { return total_ > 0; }
  std::unique_ptr<Classifier> clone() const override {
    return std::make_unique<GaussianNBModel>(*this);
  }

  double count(int c) const { return counts_[c]; }
  double mean(int c, std::size_t j) const { return means_[c][j]; }
  // Sample variance (n - 1 denominator), floored.
  double variance(int c, std::size_t j) const;
  double prior(int c) const;

 private:
  std::size_t num_features_;
  double total_ = 0.0;
  std::vector<double> counts_;
  std::vector<std::vector<double>> means_;
  std::vector<std::vector<double>> m2_;
};

// Scalar tested by the detector. Binary (size 2) and scalar (size 1)
// outputs: difference of the positive-class value. Multiclass: difference
// of the probabilities of the class predicted at x (first argmax on ties).
double detector_input(std::span<const double> model_output,
                      std::span<const double> baseline_output);

}  // namespace localdrift

#endif  // LOCALDRIFT_MODELS_HPP_
