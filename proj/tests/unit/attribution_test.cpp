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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "localdrift/attribution.hpp"
#include "localdrift/baseline.hpp"

namespace localdrift {
namespace {

using V = std::vector<double>;

TEST(AttributeLinear, IdentityCase) {
  LogisticModel m(V{0.7, -0.2}, 0.1, 0.1);
  const V x{0.3, 0.9};
  const auto a = attribute_linear(m, x, x);
  EXPECT_EQ(a.phi, (V{0.0, 0.0}));
  EXPECT_DOUBLE_EQ(a.phi0, m.margin(x));
}

TEST(AttributeLinear, HandEvaluation) {
  LogisticModel m(V{2, -1}, 0.5, 0.1);
  const auto a = attribute_linear(m, V{1, 1}, V{0, 0});
  EXPECT_EQ(a.phi, (V{2, -1}));
  EXPECT_EQ(a.phi0, 0.5);
  EXPECT_EQ(a.phi0 + a.phi[0] + a.phi[1], 1.5);
}

TEST(AttributeLinear, LocalAccuracyOnRandomModels) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng() % 12;
    V w(m), x(m), ref(m);
    for (std::size_t j = 0; j < m; ++j) {
      w[j] = g(rng);
      x[j] = g(rng);
      ref[j] = g(rng);
    }
    LogisticModel model(w, g(rng), 0.1);
    const auto a = attribute_linear(model, x, ref);
    double sum = a.phi0;
    for (double p : a.phi) sum += p;
    ASSERT_LT(std::abs(sum - model.margin(x)), 1e-9);
    ASSERT_TRUE(verify_local_accuracy(model, x, a, 1e-9));
  }
}

TEST(VerifyLocalAccuracy, DetectsPerturbedWeight) {
  LogisticModel m(V{1.0, 2.0}, 0.0, 0.1);
  const V x{1.0, 0.5}, ref{0.0, 0.0};
  const auto a = attribute_linear(m, x, ref);
  m.mutable_weights()[0] += 0.01;
  EXPECT_FALSE(verify_local_accuracy(m, x, a, 1e-9));
}

TEST(VerifyLocalAccuracy, ZeroModel) {
  LogisticModel m(3, 0.1);
  const auto a = attribute_linear(m, V{1, 2, 3}, V{-1, 0, 4});
  EXPECT_EQ(a.phi, (V{0, 0, 0}));
  EXPECT_EQ(a.phi0, 0.0);
  EXPECT_TRUE(verify_local_accuracy(m, V{1, 2, 3}, a, 1e-9));
}

TEST(AttributeLinear, DimensionMismatchThrows) {
  LogisticModel m(2, 0.1);
  EXPECT_THROW(attribute_linear(m, V{1}, V{1, 2}), std::invalid_argument);
}

TreeConfig config8() {
  TreeConfig c;
  c.window = 8;
  return c;
}

TEST(Manager, StationaryStreamRecomputesOnlyOnce) {
  ClusterTree tree(1, config8());
  LogisticModel model(V{1.0}, 0.0, 0.0);
  const V ref{0.5};
  AttributionManager mgr({Observation{0, {0.5}}, Observation{1, {0.5}}});
  tree.update(V{0.5}, 0.0, 0);
  mgr.initialize(tree, model, ref, 0);
  RecomputeMetrics metrics;
  metrics.observe(mgr.records(), oracle_attributions(mgr.records(), model, ref));
  for (int t = 1; t < 100; ++t) {
    const auto alerts = tree.update(V{0.5}, 0.0, t);
    EXPECT_TRUE(mgr.step(tree, alerts, model, ref, t).empty());
    metrics.observe(mgr.records(), oracle_attributions(mgr.records(), model, ref));
  }
  for (const auto& r : mgr.records()) EXPECT_EQ(r.recompute_count, 1u);
  const auto s = metrics.summary(mgr.records());
  ASSERT_TRUE(s.reduction_pct);
  EXPECT_EQ(*s.reduction_pct, 100.0);
  EXPECT_EQ(s.mean_abs_deviation, 0.0);
}

TEST(Manager, SplitTriggersLeafChange) {
  ClusterTree tree(1, config8());
  LogisticModel model(V{1.0}, 0.0, 0.0);
  const V ref{0.0};
  AttributionManager mgr({Observation{0, {1.0}}});
  tree.update(V{0.0}, 0.0, 0);
  mgr.initialize(tree, model, ref, 0);
  const auto alerts = tree.update(V{1.0}, 0.0, 1);  // splits the root
  ASSERT_FALSE(tree.root().is_leaf());
  const auto changed = mgr.step(tree, alerts, model, ref, 1);
  ASSERT_EQ(changed.size(), 1u);
  const auto& log = mgr.records()[0].log;
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1], std::make_pair(std::int64_t{1}, RecomputeReason::kLeafChange));
}

TEST(Manager, LocalAlertAtRecordLeaf) {
  ClusterTree tree(1, config8());
  LogisticModel model(V{1.0}, 0.0, 0.0);
  const V ref{0.0};
  AttributionManager mgr({Observation{0, {0.5}}});
  tree.update(V{0.5}, 0.0, 4993);
  mgr.initialize(tree, model, ref, 4993);
  const V diffs{0, 0, 0, 1, 1, 1, 1};
  std::vector<std::size_t> changed;
  for (std::int64_t t = 4994; t <= 5000; ++t) {
    const auto alerts = tree.update(V{0.5}, diffs[static_cast<std::size_t>(t - 4994)], t);
    changed = mgr.step(tree, alerts, model, ref, t);
    if (t < 5000) EXPECT_TRUE(changed.empty());
  }
  ASSERT_EQ(changed.size(), 1u);
  EXPECT_EQ(mgr.records()[0].log.back(),
            std::make_pair(std::int64_t{5000}, RecomputeReason::kLocalAlert));
}

void run_policy(RecomputePolicy policy, double lr, RecomputeSummary& out) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  TreeConfig c = config8();
  ClusterTree tree(2, c);
  LogisticModel model(2, lr);
  EwmaBaseline base(0.01);
  std::vector<Observation> tracked;
  for (int i = 0; i < 10; ++i) tracked.push_back({i, {u(rng), u(rng)}});
  AttributionManager mgr(tracked, policy);
  RecomputeMetrics metrics;
  for (int t = 0; t < 300; ++t) {
    const V x{u(rng), u(rng)};
    base.update(x);
    const auto alerts = tree.update(x, model.predict(x) - 0.5, t);
    if (t == 0) {
      mgr.initialize(tree, model, base.value(), t);
    } else {
      mgr.step(tree, alerts, model, base.value(), t);
    }
    metrics.observe(mgr.records(),
                    oracle_attributions(mgr.records(), model, base.value()));
    model.update(x, x[0] > 0.5 ? 1 : 0);
  }
  out = metrics.summary(mgr.records());
}

TEST(RecomputeMetrics, AlwaysPolicyMatchesOracle) {
  RecomputeSummary s;
  run_policy(RecomputePolicy::kAlways, 0.1, s);
  ASSERT_TRUE(s.reduction_pct);
  EXPECT_EQ(*s.reduction_pct, 0.0);
  EXPECT_EQ(s.mean_abs_deviation, 0.0);
}

TEST(RecomputeMetrics, NeverPolicyWithFrozenModel) {
  // lr 0 keeps the weights at zero; attributions never change.
  RecomputeSummary s;
  run_policy(RecomputePolicy::kNever, 0.0, s);
  EXPECT_EQ(*s.reduction_pct, 100.0);
  EXPECT_EQ(s.mean_abs_deviation, 0.0);
}

TEST(RecomputeMetrics, NothingTracked) {
  RecomputeMetrics metrics;
  const std::vector<AttributionRecord> none;
  metrics.observe(none, {});
  EXPECT_FALSE(metrics.summary(none).reduction_pct.has_value());
}

TEST(OracleAttributions, MatchesPerRecordComputation) {
  LogisticModel m(V{0.3, -2.0, 1.1}, 0.4, 0.1);
  const V ref{0.1, 0.2, 0.3};
  AttributionManager mgr({Observation{0, {1, 2, 3}}, Observation{1, {-1, 0, 5}}});
  ClusterTree tree(3, TreeConfig{});
  tree.update(V{0, 0, 0}, 0.0, 0);
  mgr.initialize(tree, m, ref, 0);
  const auto o = oracle_attributions(mgr.records(), m, ref);
  ASSERT_EQ(o.size(), 6u);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto a = attribute_linear(m, mgr.records()[i].obs.x, ref);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(o[i * 3 + j], a.phi[j]);
  }
}

}  // namespace
}  // namespace localdrift
