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

#ifndef LOCALDRIFT_CLUSTER_TREE_HPP_
#define LOCALDRIFT_CLUSTER_TREE_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "localdrift/numerics.hpp"
#include "localdrift/sliding_window.hpp"

namespace localdrift {

enum class AlertScope { kLocal, kGlobal };
enum class AlertKind { kChangeTest, kPruneRetest };

const char* to_string(AlertScope scope);
const char* to_string(AlertKind kind);

struct DriftAlert {
  std::int64_t t = 0;
  AlertScope scope = AlertScope::kLocal;
  std::int64_t node_id = -1;  // -1 for global alerts
  double p_value = 1.0;
  AlertKind kind = AlertKind::kChangeTest;

  bool operator==(const DriftAlert&) const = default;
};

inline constexpr std::int64_t kNoPruning = std::numeric_limits<std::int64_t>::max();

struct TreeConfig {
  double gamma = 0.95;
  double alpha = 0.01;
  std::size_t window = 200;
  std::int64_t max_age = 100;
  // nullopt = unbounded depth.
  std::optional<int> max_depth = 5;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

class ClusterNode {
 public:
  ClusterNode(std::int64_t id, int depth, std::size_t window, std::size_t dim);

  std::int64_t id() const { return id_; }
  std::int64_t age() const { return age_; }
  int depth() const { return depth_; }
  bool is_leaf() const { return left_ == nullptr; }
  const ClusterNode* left() const { return left_.get(); }
  const ClusterNode* right() const { return right_.get(); }
  const SlidingWindow& window() const { return window_; }
  std::span<const double> centroid() const { return centroid_; }

  // Number of window entries whose diffs arrived after the last reset.
  std::size_t fresh_diffs() const { return fresh_; }
  // Result of the most recent half-window test at this node, if any.
  std::optional<double> last_p_value() const { return last_p_; }
  std::optional<std::int64_t> last_test_time() const { return last_test_t_; }

 private:
  friend class ClusterTree;

  void push(std::span<const double> x, double diff, std::int64_t t);
  void reset_diffs(std::int64_t t);

  std::int64_t id_;
  std::int64_t age_ = 0;
  int depth_;
  SlidingWindow window_;
  std::vector<double> centroid_;
  std::unique_ptr<ClusterNode> left_;
  std::unique_ptr<ClusterNode> right_;
  // Entries with time <= reset_t_ carry diffs from before the last reset.
  std::int64_t reset_t_ = std::numeric_limits<std::int64_t>::min();
  std::size_t fresh_ = 0;
  std::optional<double> last_p_;
  std::optional<std::int64_t> last_test_t_;
};

struct TreeStats {
  std::size_t node_count = 0;
  std::size_t leaf_count = 0;
  std::size_t stored_entries = 0;
  // leaves_per_depth[d] = number of leaves at depth d.
  std::vector<std::size_t> leaves_per_depth;
};

// What the most recent update did; used by tests and the tracing CLI.
struct UpdateTrace {
  std::int64_t leaf_id = -1;  // leaf the observation was routed to
  int leaf_depth = 0;
  std::optional<std::int64_t> split_node_id;
  std::vector<std::int64_t> pruned_node_ids;
};

// Half-window change test: the diff sequence (arrival order, even length) is
// split into its older and newer half and compared with the pooled t-test.
numerics::TestResult half_window_test(std::span<const double> diffs);

// age - min(left_age, right_age) >= max_age.
bool should_prune(std::int64_t age, std::int64_t left_age,
                  std::int64_t right_age, std::int64_t max_age);

// Eq. 5-style pointwise check: |(f1 - phi1) - (f2 - phi2)| > tol.
bool naive_point_change(double f_t1_x, double phi0_t1, double f_t2_x,
                        double phi0_t2, double tol);

// Adaptive binary cluster tree over the stream. Every node keeps a sliding
// window of (x, diff, t) and its centroid; leaves split when their window is
// no longer gamma-similar to the centroid, branches whose children stopped
// receiving observations are pruned, and leaves test their diff window for a
// change in mean. Single writer; const members are safe between updates.
class ClusterTree {
 public:
  ClusterTree(std::size_t dim, TreeConfig config);

  // Routes (x, diff) from the root, updating every node on the path.
  // Returns the local alerts raised by this update.
  std::vector<DriftAlert> update(std::span<const double> x, double diff,
                                 std::int64_t t);

  // Fisher combination of the current leaf p-values against the corrected
  // alpha. Suppressed for `window` updates after a global alert.
  std::optional<DriftAlert> test_global_change(std::int64_t t);

  // Combined test without side effects; nullopt when no leaf contributes.
  struct GlobalTest {
    numerics::TestResult combined;
    int contributing_leaves = 0;
    double corrected_alpha = 0.0;
  };
  std::optional<GlobalTest> global_statistic() const;

  const ClusterNode& find_leaf(std::span<const double> x) const;
  const ClusterNode& root() const { return *root_; }
  const ClusterNode* find_node(std::int64_t id) const;

  std::size_t dim() const { return dim_; }
  const TreeConfig& config() const { return config_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t leaf_count() const;
  TreeStats stats() const;
  const UpdateTrace& last_update() const { return trace_; }
  std::int64_t updates() const { return updates_; }

  void for_each_node(const std::function<void(const ClusterNode&)>& fn) const;
  void for_each_leaf(const std::function<void(const ClusterNode&)>& fn) const;

 private:
  void update_node(ClusterNode& node, std::span<const double> x, double diff,
                   std::int64_t entry_t, std::int64_t now,
                   std::vector<DriftAlert>& alerts);
  void split_leaf(ClusterNode& node, std::int64_t now,
                  std::vector<DriftAlert>& alerts);
  void prune(ClusterNode& node);
  std::optional<DriftAlert> test_local_change(ClusterNode& node,
                                              std::int64_t now, AlertKind kind);
  ClusterNode& closer_child(ClusterNode& node, std::span<const double> x) const;
  bool leaf_may_split(const ClusterNode& node) const;
  std::unique_ptr<ClusterNode> make_node(int depth);
  bool contributes(const ClusterNode& leaf) const;

  std::size_t dim_;
  TreeConfig config_;
  std::unique_ptr<ClusterNode> root_;
  std::int64_t next_id_ = 0;
  std::size_t node_count_ = 0;
  std::int64_t updates_ = 0;
  std::int64_t last_t_ = std::numeric_limits<std::int64_t>::min();
  std::int64_t global_refractory_ = 0;
  bool in_replay_ = false;
  UpdateTrace trace_;
};

}  // namespace localdrift

#endif  // LOCALDRIFT_CLUSTER_TREE_HPP_
