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

#include "localdrift/cluster_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "localdrift/kernels.hpp"

namespace localdrift {

const char* to_string(AlertScope scope) {
  return scope == AlertScope::kLocal ? "local" : "global";
}

const char* to_string(AlertKind kind) {
  return kind == AlertKind::kChangeTest ? "change-test" : "prune-retest";
}

void TreeConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must be in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1)");
  }
  if (window < 4 || window % 2 != 0) {
    throw std::invalid_argument("window must be even and >= 4");
  }
  if (max_age < 1) throw std::invalid_argument("max_age must be >= 1");
  if (max_depth && *max_depth < 0) {
    throw std::invalid_argument("max_depth must be >= 0");
  }
}

numerics::TestResult half_window_test(std::span<const double> diffs) {
  if (diffs.size() < 4 || diffs.size() % 2 != 0) {
    throw std::invalid_argument("half_window_test: need an even window >= 4");
  }
  const std::size_t half = diffs.size() / 2;
  return numerics::t_test_unpaired(diffs.first(half), diffs.subspan(half));
}

bool should_prune(std::int64_t age, std::int64_t left_age,
                  std::int64_t right_age, std::int64_t max_age) {
  if (max_age == kNoPruning) return false;
  return age - std::min(left_age, right_age) >= max_age;
}

bool naive_point_change(double f_t1_x, double phi0_t1, double f_t2_x,
                        double phi0_t2, double tol) {
  return std::fabs((f_t1_x - phi0_t1) - (f_t2_x - phi0_t2)) > tol;
}

ClusterNode::ClusterNode(std::int64_t id, int depth, std::size_t window,
                         std::size_t dim)
    : id_(id), depth_(depth), window_(window, dim), centroid_(dim, 0.0) {}

void ClusterNode::push(std::span<const double> x, double diff, std::int64_t t) {
  if (window_.full() && window_.time(0) > reset_t_) --fresh_;
  window_.push(x, diff, t);
  if (t > reset_t_) ++fresh_;
  window_.mean(centroid_);
}

void ClusterNode::reset_diffs(std::int64_t t) {
  reset_t_ = t;
  fresh_ = 0;
}

ClusterTree::ClusterTree(std::size_t dim, TreeConfig config)
    : dim_(dim), config_(config) {
  if (dim == 0) throw std::invalid_argument("ClusterTree: dimension 0");
  config_.validate();
  root_ = make_node(0);
}

std::unique_ptr<ClusterNode> ClusterTree::make_node(int depth) {
  ++node_count_;
  return std::make_unique<ClusterNode>(next_id_++, depth, config_.window, dim_);
}

std::vector<DriftAlert> ClusterTree::update(std::span<const double> x,
                                            double diff, std::int64_t t) {
  if (x.size() != dim_) {
    throw std::invalid_argument("ClusterTree::update: expected " +
                                std::to_string(dim_) + " features, got " +
                                std::to_string(x.size()));
  }
  if (!std::isfinite(diff) ||
      !std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("ClusterTree::update: non-finite input");
  }
  trace_ = UpdateTrace{};
  last_t_ = t;
  ++updates_;
  if (global_refractory_ > 0) --global_refractory_;
  std::vector<DriftAlert> alerts;
  update_node(*root_, x, diff, t, t, alerts);
  return alerts;
}

bool ClusterTree::leaf_may_split(const ClusterNode& node) const {
  if (config_.max_depth && node.depth_ >= *config_.max_depth) return false;
  if (node.window_.size() < 2) return false;
  const kernels::Rows rows{node.window_.rows(), dim_};
  return kernels::min_similarity(rows, node.centroid_) < config_.gamma;
}

ClusterNode& ClusterTree::closer_child(ClusterNode& node,
                                       std::span<const double> x) const {
  const double sl = numerics::rbf_similarity_unchecked(x, node.left_->centroid_);
  const double sr = numerics::rbf_similarity_unchecked(x, node.right_->centroid_);
  return sl >= sr ? *node.left_ : *node.right_;
}

void ClusterTree::update_node(ClusterNode& node, std::span<const double> x,
                              double diff, std::int64_t entry_t,
                              std::int64_t now,
                              std::vector<DriftAlert>& alerts) {
  ++node.age_;
  node.push(x, diff, entry_t);

  if (node.is_leaf()) {
    if (!in_replay_) {
      trace_.leaf_id = node.id_;
      trace_.leaf_depth = node.depth_;
    }
    if (leaf_may_split(node)) {
      if (!in_replay_) trace_.split_node_id = node.id_;
      split_leaf(node, now, alerts);
    } else if (auto alert = test_local_change(node, now, AlertKind::kChangeTest)) {
      alerts.push_back(*alert);
    }
    return;
  }

  ClusterNode& child = closer_child(node, x);
  update_node(child, x, diff, entry_t, now, alerts);
  child.age_ = node.age_;

  if (!in_replay_ &&
      should_prune(node.age_, node.left_->age_, node.right_->age_,
                   config_.max_age)) {
    trace_.pruned_node_ids.push_back(node.id_);
    prune(node);
    if (auto alert = test_local_change(node, now, AlertKind::kPruneRetest)) {
      alerts.push_back(*alert);
    }
  }
}

void ClusterTree::split_leaf(ClusterNode& node, std::int64_t now,
                             std::vector<DriftAlert>& alerts) {
  const SlidingWindow& window = node.window_;
  if (window.size() < 2) {
    throw std::logic_error("split_leaf: window holds fewer than 2 entries");
  }
  const auto pair =
      kernels::most_dissimilar_pair(kernels::Rows{window.rows(), dim_});

  node.left_ = make_node(node.depth_ + 1);
  node.right_ = make_node(node.depth_ + 1);
  for (ClusterNode* child : {node.left_.get(), node.right_.get()}) {
    child->reset_t_ = node.reset_t_;
  }
  const auto seed_l = window.x(pair.first);
  const auto seed_r = window.x(pair.second);
  std::copy(seed_l.begin(), seed_l.end(), node.left_->centroid_.begin());
  std::copy(seed_r.begin(), seed_r.end(), node.right_->centroid_.begin());

  const bool outer = in_replay_;
  in_replay_ = true;
  for (std::size_t i = 0; i < window.size(); ++i) {
    ClusterNode& child = closer_child(node, window.x(i));
    update_node(child, window.x(i), window.diff(i), window.time(i), now, alerts);
    child.age_ = node.age_;
  }
  in_replay_ = outer;
  node.left_->age_ = node.age_;
  node.right_->age_ = node.age_;
}

void ClusterTree::prune(ClusterNode& node) {
  std::size_t removed = 0;
  std::vector<const ClusterNode*> stack{node.left_.get(), node.right_.get()};
  while (!stack.empty()) {
    const ClusterNode* n = stack.back();
    stack.pop_back();
    ++removed;
    if (!n->is_leaf()) {
      stack.push_back(n->left_.get());
      stack.push_back(n->right_.get());
    }
  }
  node.left_.reset();
  node.right_.reset();
  node_count_ -= removed;
  // The retained window was never tested as a leaf in its current form.
  node.last_p_.reset();
  node.last_test_t_.reset();
}

std::optional<DriftAlert> ClusterTree::test_local_change(ClusterNode& node,
                                                         std::int64_t now,
                                                         AlertKind kind) {
  if (!node.window_.full() || node.fresh_ < config_.window) return std::nullopt;
  const auto result = half_window_test(node.window_.diffs());
  node.last_p_ = result.p_value;
  node.last_test_t_ = now;
  if (result.p_value < config_.alpha) {
    node.reset_diffs(now);
    return DriftAlert{now, AlertScope::kLocal, node.id_, result.p_value, kind};
  }
  return std::nullopt;
}

bool ClusterTree::contributes(const ClusterNode& leaf) const {
  if (!leaf.last_p_) return false;
  if (leaf.window_.full() && leaf.fresh_ >= config_.window) return true;
  return leaf.last_test_t_ && *leaf.last_test_t_ == last_t_;
}

std::optional<ClusterTree::GlobalTest> ClusterTree::global_statistic() const {
  std::vector<double> p_values;
  for_each_leaf([&](const ClusterNode& leaf) {
    if (contributes(leaf)) p_values.push_back(*leaf.last_p_);
  });
  if (p_values.empty()) return std::nullopt;
  GlobalTest g;
  g.combined = numerics::fisher_combine(p_values);
  g.contributing_leaves = static_cast<int>(p_values.size());
  g.corrected_alpha =
      numerics::corrected_alpha(config_.alpha, g.contributing_leaves);
  return g;
}

std::optional<DriftAlert> ClusterTree::test_global_change(std::int64_t t) {
  if (global_refractory_ > 0) return std::nullopt;
  const auto g = global_statistic();
  if (!g || !(g->combined.p_value < g->corrected_alpha)) return std::nullopt;
  global_refractory_ = static_cast<std::int64_t>(config_.window);
  return DriftAlert{t, AlertScope::kGlobal, -1, g->combined.p_value,
                    AlertKind::kChangeTest};
}

const ClusterNode& ClusterTree::find_leaf(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("ClusterTree::find_leaf: dimension mismatch");
  }
  const ClusterNode* node = root_.get();
  while (!node->is_leaf()) {
    const double sl =
        numerics::rbf_similarity_unchecked(x, node->left_->centroid_);
    const double sr =
        numerics::rbf_similarity_unchecked(x, node->right_->centroid_);
    node = sl >= sr ? node->left_.get() : node->right_.get();
  }
  return *node;
}

const ClusterNode* ClusterTree::find_node(std::int64_t id) const {
  const ClusterNode* found = nullptr;
  for_each_node([&](const ClusterNode& n) {
    if (n.id() == id) found = &n;
  });
  return found;
}

void ClusterTree::for_each_node(
    const std::function<void(const ClusterNode&)>& fn) const {
  std::vector<const ClusterNode*> stack{root_.get()};
  while (!stack.empty()) {
    const ClusterNode* n = stack.back();
    stack.pop_back();
    fn(*n);
    if (!n->is_leaf()) {
      // Right first so that the left subtree is visited first.
      stack.push_back(n->right_.get());
      stack.push_back(n->left_.get());
    }
  }
}

void ClusterTree::for_each_leaf(
    const std::function<void(const ClusterNode&)>& fn) const {
  for_each_node([&](const ClusterNode& n) {
    if (n.is_leaf()) fn(n);
  });
}

std::size_t ClusterTree::leaf_count() const {
  std::size_t count = 0;
  for_each_leaf([&](const ClusterNode&) { ++count; });
  return count;
}

TreeStats ClusterTree::stats() const {
  TreeStats s;
  s.node_count = node_count_;
  for_each_node([&](const ClusterNode& n) {
    s.stored_entries += n.window().size();
    if (!n.is_leaf()) return;
    ++s.leaf_count;
    const auto d = static_cast<std::size_t>(n.depth());
    if (s.leaves_per_depth.size() <= d) s.leaves_per_depth.resize(d + 1, 0);
    ++s.leaves_per_depth[d];
  });
  return s;
}

}  // namespace localdrift
