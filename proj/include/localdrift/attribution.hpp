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

#ifndef LOCALDRIFT_ATTRIBUTION_HPP_
#define LOCALDRIFT_ATTRIBUTION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "localdrift/cluster_tree.hpp"
#include "localdrift/models.hpp"
#include "localdrift/stream.hpp"

namespace localdrift {

// Additive attribution on the log-odds margin:
// margin(x) == phi0 + sum(phi).
struct AttributionVector {
  std::vector<double> phi;
  double phi0 = 0.0;
  std::int64_t t = 0;
};

// phi_j = w_j (x_j - reference_j), phi0 = margin(reference).
AttributionVector attribute_linear(const LogisticModel& model,
                                   std::span<const double> x,
                                   std::span<const double> reference,
                                   std::int64_t t = 0);

// |margin(x) - (phi0 + sum phi)| <= tol.
bool verify_local_accuracy(const LogisticModel& model, std::span<const double> x,
                           const AttributionVector& attribution, double tol);

enum class RecomputeReason { kInitial, kLeafChange, kLocalAlert, kScheduled };
const char* to_string(RecomputeReason reason);

struct AttributionRecord {
  std::size_t id = 0;
  Observation obs;
  AttributionVector current;
  std::int64_t leaf_id = -1;
  std::size_t recompute_count = 0;
  std::vector<std::pair<std::int64_t, RecomputeReason>> log;
};

enum class RecomputePolicy {
  kOnChange,  // leaf reassignment or a local alert at the record's leaf
  kAlways,
  kNever,
};

// Keeps a set of tracked observations and decides, once per time step after
// the tree update, which of their attributions must be recomputed.
class AttributionManager {
 public:
  explicit AttributionManager(std::vector<Observation> tracked,
                              RecomputePolicy policy = RecomputePolicy::kOnChange);

  // Computes the initial attributions and leaf assignments.
  void initialize(const ClusterTree& tree, const LogisticModel& model,
                  std::span<const double> reference, std::int64_t t);

  // Returns the indices of the records recomputed at time t.
  std::vector<std::size_t> step(const ClusterTree& tree,
                                std::span<const DriftAlert> alerts,
                                const LogisticModel& model,
                                std::span<const double> reference,
                                std::int64_t t);

  const std::vector<AttributionRecord>& records() const { return records_; }
  RecomputePolicy policy() const { return policy_; }

 private:
  std::vector<AttributionRecord> records_;
  RecomputePolicy policy_;
};

// Attributions of every tracked observation under the current model; the
// always-recompute reference. Row i belongs to record i.
std::vector<double> oracle_attributions(const std::vector<AttributionRecord>& records,
                                        const LogisticModel& model,
                                        std::span<const double> reference);

struct RecomputeSummary {
  // nullopt when nothing was tracked.
  std::optional<double> reduction_pct;
  double mean_abs_deviation = 0.0;
  double oracle_min = 0.0;
  double oracle_max = 0.0;
  std::int64_t steps = 0;
  std::size_t records = 0;

  double oracle_range() const { return oracle_max - oracle_min; }
};

// Streaming accumulation of the reduction / deviation metrics against the
// always-recompute oracle. Feed once per tracked step after the manager,
// starting with the step of the initial computation.
class RecomputeMetrics {
 public:
  // `oracle` is laid out as returned by oracle_attributions.
  void observe(const std::vector<AttributionRecord>& records,
               std::span<const double> oracle);
  RecomputeSummary summary(const std::vector<AttributionRecord>& records) const;

 private:
  std::int64_t steps_ = 0;
  double abs_dev_sum_ = 0.0;
  std::size_t values_ = 0;
  bool any_ = false;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace localdrift

#endif  // LOCALDRIFT_ATTRIBUTION_HPP_
