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

#include "localdrift/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "localdrift/kernels.hpp"

namespace localdrift {

AttributionVector attribute_linear(const LogisticModel& model,
                                   std::span<const double> x,
                                   std::span<const double> reference,
                                   std::int64_t t) {
  const auto w = model.weights();
  if (x.size() != w.size() || reference.size() != w.size()) {
    throw std::invalid_argument("attribute_linear: length mismatch");
  }
  AttributionVector out;
  out.t = t;
  out.phi0 = model.margin(reference);
  out.phi.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.phi[j] = w[j] * (x[j] - reference[j]);
  }
  return out;
}

bool verify_local_accuracy(const LogisticModel& model, std::span<const double> x,
                           const AttributionVector& attribution, double tol) {
  double total = attribution.phi0;
  for (double v : attribution.phi) total += v;
  return std::fabs(model.margin(x) - total) <= tol;
}

const char* to_string(RecomputeReason reason) {
  switch (reason) {
    case RecomputeReason::kInitial: return "initial";
    case RecomputeReason::kLeafChange: return "leaf-change";
    case RecomputeReason::kLocalAlert: return "local-alert";
    case RecomputeReason::kScheduled: return "scheduled";
  }
  return "unknown";
}

AttributionManager::AttributionManager(std::vector<Observation> tracked,
                                       RecomputePolicy policy)
    : policy_(policy) {
  records_.reserve(tracked.size());
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    AttributionRecord r;
    r.id = i;
    r.obs = std::move(tracked[i]);
    records_.push_back(std::move(r));
  }
}

void AttributionManager::initialize(const ClusterTree& tree,
                                    const LogisticModel& model,
                                    std::span<const double> reference,
                                    std::int64_t t) {
  for (auto& r : records_) {
    r.current = attribute_linear(model, r.obs.x, reference, t);
    r.leaf_id = tree.find_leaf(r.obs.x).id();
    r.log.clear();
    r.log.emplace_back(t, RecomputeReason::kInitial);
    r.recompute_count = r.log.size();
  }
}

std::vector<std::size_t> AttributionManager::step(
    const ClusterTree& tree, std::span<const DriftAlert> alerts,
    const LogisticModel& model, std::span<const double> reference,
    std::int64_t t) {
  std::vector<std::int64_t> alerted;
  for (const auto& a : alerts) {
    if (a.scope == AlertScope::kLocal) alerted.push_back(a.node_id);
  }

  // Leaf lookups are read-only on the tree and independent per record.
  std::vector<std::int64_t> leaves(records_.size());
  const auto n = static_cast<std::int64_t>(records_.size());
#ifdef LOCALDRIFT_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (n >= 256)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    leaves[static_cast<std::size_t>(i)] =
        tree.find_leaf(records_[static_cast<std::size_t>(i)].obs.x).id();
  }

  std::vector<std::size_t> recomputed;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    auto& r = records_[i];
    std::optional<RecomputeReason> reason;
    switch (policy_) {
      case RecomputePolicy::kAlways:
        reason = RecomputeReason::kScheduled;
        break;
      case RecomputePolicy::kNever:
        break;
      case RecomputePolicy::kOnChange:
        if (leaves[i] != r.leaf_id) {
          reason = RecomputeReason::kLeafChange;
        } else if (std::find(alerted.begin(), alerted.end(), leaves[i]) !=
                   alerted.end()) {
          reason = RecomputeReason::kLocalAlert;
        }
        break;
    }
    r.leaf_id = leaves[i];
    if (!reason) continue;
    r.current = attribute_linear(model, r.obs.x, reference, t);
    r.log.emplace_back(t, *reason);
    r.recompute_count = r.log.size();
    recomputed.push_back(i);
  }
  return recomputed;
}

std::vector<double> oracle_attributions(
    const std::vector<AttributionRecord>& records, const LogisticModel& model,
    std::span<const double> reference) {
  const std::size_t m = model.weights().size();
  std::vector<double> xs(records.size() * m);
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::copy(records[i].obs.x.begin(), records[i].obs.x.end(),
              xs.begin() + static_cast<std::ptrdiff_t>(i * m));
  }
  std::vector<double> out(xs.size());
  kernels::linear_attributions({model.weights(), reference}, {xs, m}, out);
  return out;
}

void RecomputeMetrics::observe(const std::vector<AttributionRecord>& records,
                               std::span<const double> oracle) {
  std::size_t offset = 0;
  for (const auto& r : records) {
    const auto& phi = r.current.phi;
    if (offset + phi.size() > oracle.size()) {
      throw std::invalid_argument("RecomputeMetrics: trajectory length mismatch");
    }
    for (std::size_t j = 0; j < phi.size(); ++j) {
      const double o = oracle[offset + j];
      abs_dev_sum_ += std::fabs(phi[j] - o);
      if (!any_) {
        min_ = max_ = o;
        any_ = true;
      }
      min_ = std::min(min_, o);
      max_ = std::max(max_, o);
    }
    values_ += phi.size();
    offset += phi.size();
  }
  if (offset != oracle.size()) {
    throw std::invalid_argument("RecomputeMetrics: trajectory length mismatch");
  }
  ++steps_;
}

RecomputeSummary RecomputeMetrics::summary(
    const std::vector<AttributionRecord>& records) const {
  RecomputeSummary s;
  s.steps = steps_;
  s.records = records.size();
  s.oracle_min = min_;
  s.oracle_max = max_;
  s.mean_abs_deviation = values_ > 0 ? abs_dev_sum_ / static_cast<double>(values_) : 0.0;
  // The first observed step is the initial computation.
  const std::int64_t opportunities = steps_ - 1;
  if (!records.empty() && opportunities > 0) {
    double total = 0.0;
    for (const auto& r : records) {
      std::size_t performed = 0;
      for (const auto& [t, reason] : r.log) {
        if (reason != RecomputeReason::kInitial) ++performed;
      }
      total += 1.0 - static_cast<double>(performed) / static_cast<double>(opportunities);
    }
    s.reduction_pct = 100.0 * total / static_cast<double>(records.size());
  }
  return s;
}

}  // namespace localdrift
