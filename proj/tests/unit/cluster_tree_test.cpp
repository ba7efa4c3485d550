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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "localdrift/cluster_tree.hpp"
#include "localdrift/kernels.hpp"

namespace localdrift {
namespace {

using V = std::vector<double>;

TreeConfig small_config(std::size_t window, double gamma = 0.95) {
  TreeConfig c;
  c.window = window;
  c.gamma = gamma;
  return c;
}

std::vector<std::int64_t> sorted_times(const SlidingWindow& w) {
  std::vector<std::int64_t> t(w.times().begin(), w.times().end());
  std::sort(t.begin(), t.end());
  return t;
}

TEST(TreeConfig, Validation) {
  TreeConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window = 7;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.window = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TreeConfig{};
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TreeConfig{};
  c.alpha = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ClusterTree, FirstObservationInitializesRoot) {
  ClusterTree tree(2, TreeConfig{});
  const auto alerts = tree.update(V{0.2, 0.7}, 0.0, 0);
  EXPECT_TRUE(alerts.empty());
  const auto& root = tree.root();
  EXPECT_TRUE(root.is_leaf());
  EXPECT_EQ(root.age(), 1);
  EXPECT_EQ(root.window().size(), 1u);
  EXPECT_EQ(root.centroid()[0], 0.2);
  EXPECT_EQ(root.centroid()[1], 0.7);
  EXPECT_EQ(&tree.find_leaf(V{5.0, 5.0}), &root);
}

TEST(ClusterTree, RejectsBadInput) {
  ClusterTree tree(2, TreeConfig{});
  EXPECT_THROW(tree.update(V{1.0}, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(tree.update(V{1.0, NAN}, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(tree.update(V{1.0, 1.0}, INFINITY, 0), std::invalid_argument);
  EXPECT_THROW(ClusterTree(0, TreeConfig{}), std::invalid_argument);
}

TEST(ClusterTree, TwoPointSplit) {
  ClusterTree tree(1, small_config(8));
  tree.update(V{0.0}, 0.0, 0);
  EXPECT_TRUE(tree.root().is_leaf());
  tree.update(V{1.0}, 0.0, 1);
  // centroid 0.5, sim(0, 0.5) = exp(-0.25) < 0.95
  EXPECT_NEAR(numerics::rbf_similarity(V{0.0}, V{0.5}), std::exp(-0.25), 1e-15);
  const auto& root = tree.root();
  ASSERT_FALSE(root.is_leaf());
  EXPECT_EQ(tree.last_update().split_node_id, root.id());
  const auto* l = root.left();
  const auto* r = root.right();
  ASSERT_EQ(l->window().size(), 1u);
  ASSERT_EQ(r->window().size(), 1u);
  EXPECT_EQ(l->window().x(0)[0], 0.0);
  EXPECT_EQ(r->window().x(0)[0], 1.0);
  EXPECT_EQ(l->centroid()[0], 0.0);
  EXPECT_EQ(r->centroid()[0], 1.0);
  EXPECT_EQ(l->depth(), 1);
  EXPECT_EQ(l->age(), root.age());
  EXPECT_EQ(r->age(), root.age());
  EXPECT_EQ(root.window().size(), 2u);
}

TEST(ClusterTree, ThreePointSplitReplay) {
  // gamma low enough that {0, 0.1} stays together but {0, 0.1, 1} splits.
  ClusterTree tree(1, small_config(8, 0.9));
  tree.update(V{0.0}, 0.0, 0);
  tree.update(V{0.1}, 0.0, 1);
  ASSERT_TRUE(tree.root().is_leaf());
  tree.update(V{1.0}, 0.0, 2);
  const auto& root = tree.root();
  ASSERT_FALSE(root.is_leaf());
  const auto* l = root.left();
  const auto* r = root.right();
  ASSERT_EQ(l->window().size(), 2u);
  EXPECT_EQ(l->window().x(0)[0], 0.0);
  EXPECT_EQ(l->window().x(1)[0], 0.1);
  EXPECT_NEAR(l->centroid()[0], 0.05, 1e-15);
  ASSERT_EQ(r->window().size(), 1u);
  EXPECT_EQ(r->centroid()[0], 1.0);
}

TEST(Kernels, DissimilarPairTieTakesFirstInScanOrder) {
  // (0,1), (0,3), (1,2) and (2,3) all tie at distance 1.
  const V data{0.0, 1.0, 0.0, 1.0};
  const auto p = kernels::serial::most_dissimilar_pair({data, 1});
  EXPECT_EQ(p.first, 0u);
  EXPECT_EQ(p.second, 1u);
  EXPECT_EQ(kernels::parallel::most_dissimilar_pair({data, 1}).first, 0u);
  EXPECT_EQ(kernels::parallel::most_dissimilar_pair({data, 1}).second, 1u);
}

TEST(ClusterTree, FindLeafPrefersCloserAndLeftOnTies) {
  ClusterTree tree(1, small_config(8));
  tree.update(V{0.0}, 0.0, 0);
  tree.update(V{1.0}, 0.0, 1);
  const auto& root = tree.root();
  ASSERT_FALSE(root.is_leaf());
  EXPECT_EQ(&tree.find_leaf(V{0.1}), root.left());
  EXPECT_EQ(&tree.find_leaf(V{0.9}), root.right());
  EXPECT_EQ(&tree.find_leaf(V{0.5}), root.left());
}

TEST(ClusterTree, ConstantStreamIsQuiet) {
  ClusterTree tree(3, small_config(20));
  for (int t = 0; t < 400; ++t) {
    EXPECT_TRUE(tree.update(V{0.3, 0.3, 0.3}, 0.25, t).empty());
    EXPECT_FALSE(tree.test_global_change(t).has_value());
  }
  EXPECT_EQ(tree.node_count(), 1u);
  EXPECT_EQ(tree.root().last_p_value(), 1.0);
}

TEST(HalfWindowTest, EqualDiffsGivePOne) {
  const V diffs(200, 0.3);
  EXPECT_EQ(half_window_test(diffs).p_value, 1.0);
}

TEST(HalfWindowTest, DegenerateStepAlerts) {
  ClusterTree tree(1, small_config(8));
  std::vector<DriftAlert> alerts;
  const V diffs{0, 0, 0, 0, 1, 1, 1, 1};
  for (int t = 0; t < 8; ++t) {
    alerts = tree.update(V{0.5}, diffs[t], t);
    if (t < 7) EXPECT_TRUE(alerts.empty());
  }
  ASSERT_EQ(alerts.size(), 1u);
  EXPECT_EQ(alerts[0].p_value, 0.0);
  EXPECT_EQ(alerts[0].scope, AlertScope::kLocal);
  EXPECT_EQ(alerts[0].t, 7);
  EXPECT_EQ(alerts[0].node_id, tree.root().id());
  // Diffs were reset: no further test until a full window of new diffs.
  EXPECT_EQ(tree.root().fresh_diffs(), 0u);
  for (int t = 8; t < 15; ++t) EXPECT_TRUE(tree.update(V{0.5}, 1.0, t).empty());
}

TEST(HalfWindowTest, MixedHalvesMatchOracle) {
  const V diffs{0.1, -0.1, 0.2, -0.2, 0.15, -0.05, 0.1, -0.1};
  const auto r = half_window_test(diffs);
  // Frozen from the high-precision t-test oracle.
  EXPECT_NEAR(r.p_value, 0.8261662964842905, 1e-9);
  EXPECT_FALSE(r.p_value < 0.01);
  ClusterTree tree(1, small_config(8));
  for (int t = 0; t < 8; ++t) EXPECT_TRUE(tree.update(V{0.5}, diffs[t], t).empty());
}

TEST(HalfWindowTest, RejectsOddWindows) {
  EXPECT_THROW(half_window_test(V{1, 2, 3}), std::invalid_argument);
}

TEST(Prune, Condition) {
  EXPECT_TRUE(should_prune(300, 300, 150, 100));
  EXPECT_FALSE(should_prune(300, 300, 300, 100));
  EXPECT_FALSE(should_prune(300, 300, 150, kNoPruning));
}

TEST(Prune, IdleBranchIsPruned) {
  TreeConfig c = small_config(20);
  c.max_age = 100;
  ClusterTree tree(1, c);
  std::int64_t t = 0;
  for (; t < 200; ++t) tree.update(V{t % 2 == 0 ? 0.0 : 1.0}, 0.0, t);
  ASSERT_FALSE(tree.root().is_leaf());
  const auto leaves_before = tree.leaf_count();
  std::int64_t pruned_at = -1;
  for (std::int64_t k = 0; k < 150 && pruned_at < 0; ++k, ++t) {
    tree.update(V{0.0}, 0.0, t);
    if (!tree.last_update().pruned_node_ids.empty()) pruned_at = k;
  }
  ASSERT_GE(pruned_at, 0);
  EXPECT_LT(pruned_at, 100);
  EXPECT_LT(tree.leaf_count(), leaves_before);
}

TEST(GlobalTest, SingleLeafCorrectionIsIdentity) {
  EXPECT_EQ(numerics::corrected_alpha(0.01, 1), 0.01);
  const auto f = numerics::fisher_combine(V{0.005});
  EXPECT_NEAR(f.p_value, 0.005, 1e-12);
  EXPECT_LT(f.p_value, numerics::corrected_alpha(0.01, 1));
}

TEST(GlobalTest, FourModerateLeaves) {
  // chi-square(8) tail of -8 ln 0.05, frozen from scipy.
  const auto f = numerics::fisher_combine(V{0.05, 0.05, 0.05, 0.05});
  EXPECT_NEAR(f.p_value, 0.0023221929148880805, 1e-9);
  EXPECT_LT(f.p_value, numerics::corrected_alpha(0.01, 4));
  // Two such leaves stay above their corrected level.
  const auto two = numerics::fisher_combine(V{0.05, 0.05});
  EXPECT_GT(two.p_value, numerics::corrected_alpha(0.01, 2));
}

TEST(GlobalTest, RootOnlyTreeFollowsRootTest) {
  TreeConfig c = small_config(8);
  c.max_depth = 0;
  ClusterTree tree(1, c);
  const V diffs{0, 0, 0, 0, 1, 1, 1, 1};
  std::optional<DriftAlert> global;
  for (int t = 0; t < 8; ++t) {
    // Spread out inputs would split at depth > 0.
    tree.update(V{t * 0.5}, diffs[t], t);
    global = tree.test_global_change(t);
    if (t < 7) EXPECT_FALSE(global);
  }
  EXPECT_EQ(tree.node_count(), 1u);
  ASSERT_TRUE(global);
  EXPECT_EQ(global->scope, AlertScope::kGlobal);
  EXPECT_EQ(global->node_id, -1);
  // Refractory: no second global alert for `window` updates.
  for (int t = 8; t < 16; ++t) {
    tree.update(V{0.0}, 5.0 * (t % 2), t);
    EXPECT_FALSE(tree.test_global_change(t));
  }
}

TEST(GlobalTest, AllOnesNeverAlert) {
  ClusterTree tree(1, small_config(8));
  for (int t = 0; t < 64; ++t) {
    tree.update(V{0.5}, 0.1, t);
    EXPECT_FALSE(tree.test_global_change(t));
  }
  const auto g = tree.global_statistic();
  ASSERT_TRUE(g);
  EXPECT_EQ(g->combined.p_value, 1.0);
}

TEST(NaivePointChange, Examples) {
  EXPECT_FALSE(naive_point_change(0.7, 0.4, 0.7, 0.4, 0.05));
  EXPECT_TRUE(naive_point_change(0.7, 0.4, 0.7, 0.6, 0.05));
  EXPECT_FALSE(naive_point_change(0.7, 0.4, 0.7, 0.44, 0.05));
}

// Randomized updates over a drifting mixture; structural invariants are
// checked after every step.
class TreeFuzz : public ::testing::TestWithParam<unsigned> {};

TEST_P(TreeFuzz, InvariantsHold) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  TreeConfig c = small_config(16, 0.9);
  c.max_age = 40;
  c.max_depth = 4;
  const std::size_t dim = 2;
  ClusterTree tree(dim, c);
  std::set<std::int64_t> pending_pruned;
  V centers{0.1, 0.1, 0.9, 0.9, 0.1, 0.9};
  for (std::int64_t t = 0; t < 2500; ++t) {
    if (t % 500 == 0) {
      for (auto& v : centers) v = u(rng);
    }
    const std::size_t k = static_cast<std::size_t>(rng() % 3);
    const V x{centers[2 * k] + noise(rng), centers[2 * k + 1] + noise(rng)};
    tree.update(x, u(rng) - 0.5, t);
    const auto& trace = tree.last_update();
    for (auto id : trace.pruned_node_ids) pending_pruned.insert(id);
    pending_pruned.erase(trace.leaf_id);

    std::size_t nodes = 0, stored = 0;
    tree.for_each_node([&](const ClusterNode& n) {
      ++nodes;
      stored += n.window().size();
      // (a) zero or two children
      EXPECT_EQ(n.left() == nullptr, n.right() == nullptr);
      if (!n.is_leaf()) return;
      if (pending_pruned.count(n.id())) return;
      // (c) leaf coherence
      const bool capped = n.depth() >= *c.max_depth;
      const double min_sim = n.window().empty()
                                 ? 1.0
                                 : kernels::serial::min_similarity(
                                       {n.window().rows(), dim}, n.centroid());
      EXPECT_TRUE(capped || n.window().size() < 2 || min_sim >= c.gamma)
          << "leaf " << n.id() << " at t=" << t;
    });
    EXPECT_EQ(nodes, tree.node_count());
    // (b) memory bound
    EXPECT_LE(stored, tree.node_count() * c.window);

    // (d) split conservation
    const auto* n = trace.split_node_id ? tree.find_node(*trace.split_node_id) : nullptr;
    if (n != nullptr) {
      ASSERT_FALSE(n->is_leaf());
      auto joined = sorted_times(n->left()->window());
      const auto right = sorted_times(n->right()->window());
      joined.insert(joined.end(), right.begin(), right.end());
      std::sort(joined.begin(), joined.end());
      EXPECT_EQ(joined, sorted_times(n->window()));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TreeFuzz, ::testing::Values(1u, 2u, 3u, 4u));

}  // namespace
}  // namespace localdrift
