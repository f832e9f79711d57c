// Copyright 2026 The StableGNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "stable/attack.hpp"
#include "stable/errors.hpp"
#include "stable/io.hpp"

using namespace stable;

namespace {

SparseGraph complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
  return SparseGraph::undirected(n, EdgeSet(e));
}

SparseGraph first_edges(const SparseGraph& g, std::size_t count) {
  auto all = g.edge_set();
  std::vector<Edge> kept(all.begin(), all.begin() + static_cast<long>(count));
  return SparseGraph::undirected(g.num_nodes(), EdgeSet(kept));
}

void expect_record_valid(const SparseGraph& clean, const AttackResult& r) {
  const auto edges = clean.edge_set();
  EXPECT_TRUE(set_intersection(r.record.added, edges).empty());
  EXPECT_EQ(set_intersection(r.record.removed, edges), r.record.removed);
  EXPECT_TRUE(set_intersection(r.record.added, r.record.removed).empty());
  EXPECT_EQ(apply_perturbation(clean, r.record), r.graph);
  EXPECT_EQ(perturbation_diff(clean, r.graph), r.record);
}

}  // namespace

TEST(Budget, RoundsRateTimesEdges) {
  EXPECT_EQ((AttackBudget{0.2, 0}.changes(100)), 20u);
  EXPECT_EQ((AttackBudget{0.2, 0}.changes(1583)), 317u);
  EXPECT_EQ((AttackBudget{0.0, 0}.changes(50)), 0u);
}

TEST(RandomAttack, ZeroRateIsIdentity) {
  std::mt19937_64 gen(1);
  auto g = oracle::graph_of(oracle::random_adjacency(30, 0.2, gen));
  auto r = random_attack(g, {0.0, 5});
  EXPECT_EQ(r.graph, g);
  EXPECT_EQ(r.record.size(), 0u);
}

TEST(RandomAttack, CompleteGraphOnlyDeletes) {
  auto g = complete(12);
  auto r = random_attack(g, {0.1, 3});
  EXPECT_TRUE(r.record.added.empty());
  EXPECT_EQ(r.record.removed.size(), 7u);
  expect_record_valid(g, r);
}

TEST(RandomAttack, ExactBudgetAndDeterminism) {
  std::mt19937_64 gen(2);
  auto g = first_edges(oracle::graph_of(oracle::random_adjacency(60, 0.1, gen)), 100);
  ASSERT_EQ(g.num_edges(), 100u);
  auto a = random_attack(g, {0.2, 8});
  EXPECT_EQ(a.record.size(), 20u);
  expect_record_valid(g, a);
  auto b = random_attack(g, {0.2, 8});
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.record, b.record);
}

TEST(RandomAttack, InfeasibleBudgetRejected) {
  auto g = SparseGraph::undirected(3, EdgeSet({{0, 1}}));
  EXPECT_THROW(random_attack(g, {5.0, 1}), InputError);
}

TEST(DiceAttack, RemovalsIntraAdditionsInter) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    SbmSpec spec{.num_nodes = 60, .num_classes = 3, .p_in = 0.3, .p_out = 0.02, .feature_dim = 8, .on_bits = 2, .seed = s};
    auto b = generate_sbm(spec);
    auto r = dice_attack(b.graph, b.labels, {0.2, s + 1000});
    for (auto e : r.record.removed) ASSERT_EQ(b.labels[e.u], b.labels[e.v]);
    for (auto e : r.record.added) ASSERT_NE(b.labels[e.u], b.labels[e.v]);
    ASSERT_EQ(r.record.size(), (AttackBudget{0.2, 0}.changes(b.graph.num_edges())));
    ASSERT_TRUE(r.complete);
  }
}

TEST(DiceAttack, NoIntraEdgesMeansAllAdditions) {
  auto g = SparseGraph::undirected(6, EdgeSet({{0, 1}, {2, 3}, {4, 5}, {0, 3}, {1, 4}}));
  auto labels = make_labels({0, 1, 0, 1, 0, 1});
  auto r = dice_attack(g, labels, {0.4, 2});
  EXPECT_TRUE(r.record.removed.empty());
  EXPECT_EQ(r.record.added.size(), 2u);
  expect_record_valid(g, r);
}

TEST(DiceAttack, ExactBudgetOn200EdgeGraph) {
  SbmSpec spec{.num_nodes = 120, .num_classes = 3, .p_in = 0.1, .p_out = 0.01, .feature_dim = 8, .on_bits = 2, .seed = 4};
  auto b = generate_sbm(spec);
  ASSERT_GE(b.graph.num_edges(), 200u);
  auto g = first_edges(b.graph, 200);
  auto r = dice_attack(g, b.labels, {0.1, 9});
  EXPECT_EQ(r.record.size(), 20u);
  expect_record_valid(g, r);
}

TEST(DiceAttack, ExhaustedPoolsGivePartialResultWithWarning) {
  // Two nodes of different classes, already linked: nothing to delete
  // intra-class and nothing to add inter-class.
  auto g = SparseGraph::undirected(2, EdgeSet({{0, 1}}));
  auto r = dice_attack(g, make_labels({0, 1}), {1.0, 1});
  EXPECT_FALSE(r.complete);
  EXPECT_FALSE(r.warning.empty());
  EXPECT_EQ(r.record.size(), 0u);
}

TEST(DiceAttack, MoveMixIsBalanced) {
  SbmSpec spec{.seed = 11};
  auto b = generate_sbm(spec);
  std::size_t added = 0, total = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto r = dice_attack(b.graph, b.labels, {0.2, s});
    added += r.record.added.size();
    total += r.record.size();
  }
  EXPECT_NEAR(static_cast<double>(added) / total, 0.5, 0.05);
}

TEST(PerturbationDiff, Examples) {
  auto g = SparseGraph::undirected(6, EdgeSet({{0, 1}, {2, 3}}));
  EXPECT_EQ(perturbation_diff(g, g).size(), 0u);
  auto p = SparseGraph::undirected(6, EdgeSet({{0, 1}, {2, 3}, {0, 5}}));
  auto d = perturbation_diff(g, p);
  EXPECT_EQ(d.added, EdgeSet({{0, 5}}));
  EXPECT_TRUE(d.removed.empty());
  EXPECT_THROW(perturbation_diff(g, SparseGraph::undirected(7, EdgeSet())), InputError);
}

TEST(PerturbationDiff, MatchesBruteForce) {
  std::mt19937_64 gen(77);
  for (int t = 0; t < 20; ++t) {
    auto a = oracle::random_adjacency(50, 0.08, gen);
    auto b = oracle::random_adjacency(50, 0.08, gen);
    std::vector<Edge> added, removed;
    for (NodeId i = 0; i < 50; ++i)
      for (NodeId j = i + 1; j < 50; ++j) {
        if (b[i][j] && !a[i][j]) added.push_back({i, j});
        if (a[i][j] && !b[i][j]) removed.push_back({i, j});
      }
    auto d = perturbation_diff(oracle::graph_of(a), oracle::graph_of(b));
    ASSERT_EQ(d.added, EdgeSet(added));
    ASSERT_EQ(d.removed, EdgeSet(removed));
    ASSERT_EQ(apply_perturbation(oracle::graph_of(a), d), oracle::graph_of(b));
  }
}
