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

#ifndef LOCALDRIFT_GENERATORS_HPP_
#define LOCALDRIFT_GENERATORS_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "localdrift/stream.hpp"

namespace localdrift {

// mt19937_64 with a portable mapping to doubles, so that streams are
// bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by Rng.
template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        rng.integer(0, static_cast<std::int64_t>(i) - 1));
    std::swap(values[i - 1], values[j]);
  }
}

// Concept change points. A width of 0 is an abrupt switch at the position;
// a positive width W mixes old and new concept over [p - W/2, p + W/2).
struct DriftSchedule {
  std::vector<std::int64_t> positions;
  std::vector<std::int64_t> widths;

  // Throws if positions are not strictly increasing, widths are negative or
  // transition windows overlap, or a position is >= stream_length.
  void validate(std::int64_t stream_length) const;
  std::int64_t width(std::size_t i) const {
    return i < widths.size() ? widths[i] : 0;
  }
};

// Probability of drawing the new concept at step t for a transition
// centered at p with width W: 1 / (1 + exp(-4 (t - p) / W)).
double new_concept_probability(std::int64_t position, std::int64_t width,
                               std::int64_t t);

// Index into the concept sequence active at step t (0 before the first
// drift). Consumes one uniform from `rng` only inside transition windows.
std::size_t gradual_mix(const DriftSchedule& schedule, std::int64_t t, Rng& rng);

enum class GeneratorKind { kSea, kAgrawal };

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::kSea;
  std::uint64_t seed = 0;
  std::int64_t length = 10000;
  // SEA: variant indices into kSeaThresholds. Agrawal: function indices.
  std::vector<int> concepts{0};
  double perturbation = 0.1;
  DriftSchedule schedule;

  void validate() const;
};

inline constexpr std::array<double, 4> kSeaThresholds{8.0, 9.0, 7.0, 9.5};
inline constexpr int kAgrawalFunctions = 3;

// 1 iff x0 + x1 <= theta.
int sea_label(std::span<const double> x, double theta);

// Agrawal features, in order: salary, commission, age, elevel, car, zipcode,
// hvalue, hyears, loan.
int agrawal_label(int function, std::span<const double> x);
std::vector<std::string> agrawal_feature_names();

// Streams SEA or Agrawal observations with the configured concept changes.
class SyntheticStream final : public StreamSource {
 public:
  explicit SyntheticStream(GeneratorConfig config);

  std::optional<LabeledObservation> next() override;
  void rewind() override;
  const StreamMetadata& metadata() const override { return meta_; }

 private:
  LabeledObservation sea_next(std::size_t concept_index);
  LabeledObservation agrawal_next(std::size_t concept_index);

  GeneratorConfig config_;
  StreamMetadata meta_;
  Rng rng_;
  std::int64_t t_ = 0;
};

BufferedStream generate(const GeneratorConfig& config);

// Features ranked by mutual information (nats) with the label, descending;
// stable for ties. Equal-width binning over the sample range.
std::vector<std::pair<std::size_t, double>> mi_rank_features(
    std::span<const LabeledObservation> sample, int bins = 10);

// Injects abrupt drifts into a buffered stream: at each position the
// ceil(top_fraction * m) features with the highest mutual information on the
// segment just before the position are shuffled, independently per feature
// and per following segment, in every segment from that position on.
// Labels and other features are untouched. The positions become the stream's
// ground truth.
BufferedStream permute_inject(const BufferedStream& stream,
                              const DriftSchedule& schedule, double top_fraction,
                              std::uint64_t seed, int bins = 10);

}  // namespace localdrift

#endif  // LOCALDRIFT_GENERATORS_HPP_
