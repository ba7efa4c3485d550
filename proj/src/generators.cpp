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

#include "localdrift/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace localdrift {

namespace {

constexpr std::size_t kAgrawalFeatures = 9;
enum AgrawalField : std::size_t {
  kSalary = 0, kCommission, kAge, kElevel, kCar, kZipcode, kHvalue, kHyears, kLoan
};

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

double perturb(double v, double lo, double hi, double amount, Rng& rng) {
  const double u = rng.uniform();
  return std::clamp(v + (hi - lo) * amount * (2.0 * u - 1.0), lo, hi);
}

// Start of transition window i (inclusive) and its end (exclusive).
std::pair<std::int64_t, std::int64_t> transition(const DriftSchedule& s,
                                                 std::size_t i) {
  const std::int64_t w = s.width(i);
  if (w == 0) return {s.positions[i], s.positions[i]};
  return {s.positions[i] - w / 2, s.positions[i] - w / 2 + w};
}

}  // namespace

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  const double span = static_cast<double>(hi - lo + 1);
  const auto k = static_cast<std::int64_t>(uniform() * span);
  return std::min(lo + k, hi);
}

void DriftSchedule::validate(std::int64_t stream_length) const {
  if (!widths.empty() && widths.size() != positions.size()) {
    throw std::invalid_argument("drift widths: expected one per position");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 0 || positions[i] >= stream_length) {
      throw std::invalid_argument("drift position " +
                                  std::to_string(positions[i]) +
                                  " outside stream of length " +
                                  std::to_string(stream_length));
    }
    if (width(i) < 0) throw std::invalid_argument("drift width must be >= 0");
    if (i > 0) {
      if (positions[i] <= positions[i - 1]) {
        throw std::invalid_argument("drift positions must be strictly increasing");
      }
      if (transition(*this, i).first < transition(*this, i - 1).second) {
        throw std::invalid_argument("drift transition windows overlap");
      }
    }
  }
}

double new_concept_probability(std::int64_t position, std::int64_t width,
                               std::int64_t t) {
  if (width <= 0) return t >= position ? 1.0 : 0.0;
  const double z = -4.0 * static_cast<double>(t - position) /
                   static_cast<double>(width);
  return 1.0 / (1.0 + std::exp(z));
}

std::size_t gradual_mix(const DriftSchedule& schedule, std::int64_t t,
                        Rng& rng) {
  std::size_t active = 0;
  for (std::size_t i = 0; i < schedule.positions.size(); ++i) {
    const auto [begin, end] = transition(schedule, i);
    if (schedule.width(i) == 0) {
      if (t >= schedule.positions[i]) active = i + 1;
      continue;
    }
    if (t >= end) {
      active = i + 1;
    } else if (t >= begin) {
      const double p = new_concept_probability(schedule.positions[i],
                                               schedule.width(i), t);
      return rng.uniform() < p ? i + 1 : i;
    }
  }
  return active;
}

void GeneratorConfig::validate() const {
  if (length <= 0) throw std::invalid_argument("length must be positive");
  if (!(perturbation >= 0.0 && perturbation <= 1.0)) {
    throw std::invalid_argument("perturbation must be in [0, 1]");
  }
  schedule.validate(length);
  if (concepts.size() != schedule.positions.size() + 1) {
    throw std::invalid_argument(
        "concepts: expected one more concept than drift positions (" +
        std::to_string(schedule.positions.size() + 1) + "), got " +
        std::to_string(concepts.size()));
  }
  const int limit = kind == GeneratorKind::kSea
                        ? static_cast<int>(kSeaThresholds.size())
                        : kAgrawalFunctions;
  for (int c : concepts) {
    if (c < 0 || c >= limit) {
      throw std::invalid_argument("concepts: unsupported index " +
                                  std::to_string(c));
    }
  }
}

int sea_label(std::span<const double> x, double theta) {
  return x[0] + x[1] <= theta ? 1 : 0;
}

int agrawal_label(int function, std::span<const double> x) {
  if (x.size() != kAgrawalFeatures) {
    throw std::invalid_argument("agrawal_label: expected 9 features");
  }
  const double salary = x[kSalary];
  const double age = x[kAge];
  const double elevel = x[kElevel];
  switch (function) {
    case 0:
      return (age < 40.0 || age >= 60.0) ? 0 : 1;
    case 1:
      if (age < 40.0) return in_range(salary, 50000.0, 100000.0) ? 0 : 1;
      if (age < 60.0) return in_range(salary, 75000.0, 125000.0) ? 0 : 1;
      return in_range(salary, 25000.0, 75000.0) ? 0 : 1;
    case 2:
      if (age < 40.0) return (elevel == 0.0 || elevel == 1.0) ? 0 : 1;
      if (age < 60.0) return in_range(elevel, 1.0, 3.0) ? 0 : 1;
      return in_range(elevel, 2.0, 4.0) ? 0 : 1;
    default:
      throw std::invalid_argument("agrawal_label: unsupported function " +
                                  std::to_string(function));
  }
}

std::vector<std::string> agrawal_feature_names() {
  return {"salary", "commission", "age",    "elevel", "car",
          "zipcode", "hvalue",    "hyears", "loan"};
}

SyntheticStream::SyntheticStream(GeneratorConfig config)
    : config_(std::move(config)), rng_(config_.seed) {
  config_.validate();
  meta_.num_classes = 2;
  meta_.drift_positions = config_.schedule.positions;
  meta_.label_name = "class";
  if (config_.kind == GeneratorKind::kSea) {
    meta_.num_features = 3;
    meta_.feature_names = {"x0", "x1", "x2"};
  } else {
    meta_.num_features = kAgrawalFeatures;
    meta_.feature_names = agrawal_feature_names();
  }
}

void SyntheticStream::rewind() {
  rng_ = Rng(config_.seed);
  t_ = 0;
}

std::optional<LabeledObservation> SyntheticStream::next() {
  if (t_ >= config_.length) return std::nullopt;
  const std::size_t concept_index = gradual_mix(config_.schedule, t_, rng_);
  auto row = config_.kind == GeneratorKind::kSea ? sea_next(concept_index)
                                                 : agrawal_next(concept_index);
  row.obs.t = t_++;
  return row;
}

LabeledObservation SyntheticStream::sea_next(std::size_t concept_index) {
  LabeledObservation row;
  row.obs.x = {rng_.uniform(0.0, 10.0), rng_.uniform(0.0, 10.0),
               rng_.uniform(0.0, 10.0)};
  const double theta = kSeaThresholds[static_cast<std::size_t>(
      config_.concepts[concept_index])];
  row.y = sea_label(row.obs.x, theta);
  if (rng_.uniform() < config_.perturbation) row.y = 1 - row.y;
  return row;
}

LabeledObservation SyntheticStream::agrawal_next(std::size_t concept_index) {
  std::vector<double> x(kAgrawalFeatures);
  x[kSalary] = rng_.uniform(20000.0, 150000.0);
  const double commission = rng_.uniform(10000.0, 75000.0);
  x[kCommission] = x[kSalary] >= 75000.0 ? 0.0 : commission;
  x[kAge] = static_cast<double>(rng_.integer(20, 80));
  x[kElevel] = static_cast<double>(rng_.integer(0, 4));
  x[kCar] = static_cast<double>(rng_.integer(1, 20));
  x[kZipcode] = static_cast<double>(rng_.integer(0, 8));
  const double zip_scale = (9.0 - x[kZipcode]) * 100000.0;
  x[kHvalue] = zip_scale * rng_.uniform(0.5, 1.5);
  x[kHyears] = static_cast<double>(rng_.integer(1, 30));
  x[kLoan] = rng_.uniform(0.0, 500000.0);

  LabeledObservation row;
  row.y = agrawal_label(config_.concepts[concept_index], x);

  const double p = config_.perturbation;
  x[kSalary] = perturb(x[kSalary], 20000.0, 150000.0, p, rng_);
  const double perturbed_commission = perturb(x[kCommission], 10000.0, 75000.0, p, rng_);
  if (x[kCommission] > 0.0) x[kCommission] = perturbed_commission;
  x[kAge] = perturb(x[kAge], 20.0, 80.0, p, rng_);
  x[kHvalue] = perturb(x[kHvalue], 0.5 * zip_scale, 1.5 * zip_scale, p, rng_);
  x[kHyears] = perturb(x[kHyears], 1.0, 30.0, p, rng_);
  x[kLoan] = perturb(x[kLoan], 0.0, 500000.0, p, rng_);
  row.obs.x = std::move(x);
  return row;
}

BufferedStream generate(const GeneratorConfig& config) {
  SyntheticStream source(config);
  std::vector<LabeledObservation> rows;
  rows.reserve(static_cast<std::size_t>(config.length));
  while (auto row = source.next()) rows.push_back(std::move(*row));
  return BufferedStream(source.metadata(), std::move(rows));
}

std::vector<std::pair<std::size_t, double>> mi_rank_features(
    std::span<const LabeledObservation> sample, int bins) {
  if (sample.size() < 100) {
    throw std::invalid_argument("mi_rank_features: need at least 100 rows");
  }
  if (bins < 2) throw std::invalid_argument("mi_rank_features: bins must be >= 2");
  const std::size_t m = sample.front().obs.x.size();
  int num_labels = 0;
  for (const auto& r : sample) {
    if (r.y < 0) throw std::invalid_argument("mi_rank_features: negative label");
    num_labels = std::max(num_labels, r.y + 1);
  }
  const auto n = static_cast<double>(sample.size());
  const auto b = static_cast<std::size_t>(bins);
  const auto k = static_cast<std::size_t>(num_labels);

  std::vector<double> label_p(k, 0.0);
  for (const auto& r : sample) label_p[static_cast<std::size_t>(r.y)] += 1.0 / n;

  std::vector<std::pair<std::size_t, double>> ranking;
  ranking.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    double lo = sample.front().obs.x[j];
    double hi = lo;
    for (const auto& r : sample) {
      lo = std::min(lo, r.obs.x[j]);
      hi = std::max(hi, r.obs.x[j]);
    }
    std::vector<double> joint(b * k, 0.0);
    std::vector<double> bin_p(b, 0.0);
    for (const auto& r : sample) {
      std::size_t bin = 0;
      if (hi > lo) {
        const double pos = (r.obs.x[j] - lo) / (hi - lo) * static_cast<double>(bins);
        bin = std::min(b - 1, static_cast<std::size_t>(std::max(pos, 0.0)));
      }
      joint[bin * k + static_cast<std::size_t>(r.y)] += 1.0 / n;
      bin_p[bin] += 1.0 / n;
    }
    double mi = 0.0;
    for (std::size_t bi = 0; bi < b; ++bi) {
      for (std::size_t c = 0; c < k; ++c) {
        const double pj = joint[bi * k + c];
        if (pj > 0.0) mi += pj * std::log(pj / (bin_p[bi] * label_p[c]));
      }
    }
    ranking.emplace_back(j, std::max(mi, 0.0));
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const auto& a, const auto& c) { return a.second > c.second; });
  return ranking;
}

BufferedStream permute_inject(const BufferedStream& stream,
                              const DriftSchedule& schedule, double top_fraction,
                              std::uint64_t seed, int bins) {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw std::invalid_argument("top_fraction must be in (0, 1]");
  }
  const auto length = static_cast<std::int64_t>(stream.size());
  schedule.validate(length);
  for (std::size_t i = 0; i < schedule.positions.size(); ++i) {
    if (schedule.width(i) != 0) {
      throw std::invalid_argument("permute_inject: only abrupt drifts (width 0)");
    }
  }
  const std::size_t m = stream.metadata().num_features;
  const auto n_selected = static_cast<std::size_t>(
      std::ceil(top_fraction * static_cast<double>(m) - 1e-9));

  BufferedStream out = stream;
  auto& rows = out.mutable_rows();
  std::vector<std::int64_t> bounds = schedule.positions;
  bounds.push_back(length);
  Rng rng(seed);

  std::int64_t previous = 0;
  for (std::size_t d = 0; d < schedule.positions.size(); ++d) {
    const std::int64_t position = schedule.positions[d];
    if (position - previous < 100) {
      throw std::invalid_argument(
          "permute_inject: need >= 100 rows before drift at " +
          std::to_string(position));
    }
    const auto ranking = mi_rank_features(
        std::span<const LabeledObservation>(rows).subspan(
            static_cast<std::size_t>(previous),
            static_cast<std::size_t>(position - previous)),
        bins);
    for (std::size_t r = 0; r < n_selected && r < ranking.size(); ++r) {
      const std::size_t feature = ranking[r].first;
      for (std::size_t s = d; s + 1 < bounds.size(); ++s) {
        const auto begin = static_cast<std::size_t>(bounds[s]);
        const auto end = static_cast<std::size_t>(bounds[s + 1]);
        std::vector<double> column(end - begin);
        for (std::size_t i = begin; i < end; ++i) column[i - begin] = rows[i].obs.x[feature];
        shuffle(std::span<double>(column), rng);
        for (std::size_t i = begin; i < end; ++i) rows[i].obs.x[feature] = column[i - begin];
      }
    }
    previous = position;
  }
  out.mutable_metadata().drift_positions = schedule.positions;
  return out;
}

}  // namespace localdrift
