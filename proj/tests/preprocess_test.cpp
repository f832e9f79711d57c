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
#include "stable/errors.hpp"
#include "stable/preprocess.hpp"

using namespace stable;

namespace {

double sim(std::vector<double> a, std::vector<double> b, SimilarityMetric m) { return feature_similarity(a, b, m); }

bool subset(const EdgeSet& a, const EdgeSet& b) { return set_intersection(a, b) == a; }

}  // namespace

TEST(FeatureSimilarity, Examples) {
  using enum SimilarityMetric;
  EXPECT_EQ(sim({1, 0, 1}, {1, 0, 1}, kJaccard), 1.0);
  EXPECT_NEAR(sim({1, 0, 1}, {1, 0, 1}, kCosine), 1.0, 1e-15);
  EXPECT_EQ(sim({1, 0}, {0, 1}, kJaccard), 0.0);
  EXPECT_EQ(sim({1, 0}, {0, 1}, kCosine), 0.0);
  EXPECT_NEAR(sim({1, 1, 0, 1}, {1, 0, 0, 1}, kJaccard), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(sim({1, 0}, {1, 1}, kCosine), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(sim({0, 0}, {0, 0}, kJaccard), 0.0);
  EXPECT_EQ(sim({0, 0}, {1, 0}, kCosine), 0.0);
  EXPECT_THROW(sim({1, 0}, {1, 0, 0}, kCosine), InputError);
}

TEST(FeatureSimilarity, MatchesOracleOnRandomVectors) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 200; ++t) {
    auto x = oracle::random_binary(2, 30, 0.2, gen);
    auto y = oracle::random_matrix(2, 30, gen);
    auto a = oracle::row_vec(x, 0), b = oracle::row_vec(x, 1);
    ASSERT_NEAR(feature_similarity(x.row(0), x.row(1), SimilarityMetric::kJaccard), oracle::jaccard(a, b), 1e-12);
    ASSERT_NEAR(feature_similarity(y.row(0), y.row(1), SimilarityMetric::kCosine),
                oracle::cosine(oracle::row_vec(y, 0), oracle::row_vec(y, 1)), 1e-12);
  }
}

TEST(Metric, ParseAndPrint) {
  EXPECT_EQ(parse_metric("jaccard"), SimilarityMetric::kJaccard);
  EXPECT_EQ(to_string(parse_metric("cosine")), "cosine");
  EXPECT_THROW(parse_metric("euclid"), InputError);
}

TEST(RoughPreprocess, VeryLowThresholdKeepsEverything) {
  std::mt19937_64 gen(1);
  auto g = oracle::graph_of(oracle::random_adjacency(30, 0.2, gen));
  auto x = oracle::random_matrix(30, 6, gen);
  auto r = rough_preprocess(g, x, SimilarityMetric::kCosine, -2.0);
  EXPECT_EQ(r.graph, g);
  EXPECT_TRUE(r.removed.empty());
}

TEST(RoughPreprocess, ZeroJaccardThresholdDropsOnlyDisjointSupports) {
  // Scores equal to t1 survive, so t1 = 0 keeps everything.
  std::mt19937_64 gen(2);
  auto g = oracle::graph_of(oracle::random_adjacency(40, 0.2, gen));
  auto x = oracle::random_binary(40, 10, 0.15, gen);
  EXPECT_TRUE(rough_preprocess(g, x, SimilarityMetric::kJaccard, 0.0).removed.empty());
  auto r = rough_preprocess(g, x, SimilarityMetric::kJaccard, 1e-12);
  for (auto e : g.edge_set()) {
    const bool disjoint = oracle::jaccard(oracle::row_vec(x, e.u), oracle::row_vec(x, e.v)) == 0.0;
    EXPECT_EQ(r.removed.contains(e.u, e.v), disjoint);
  }
}

TEST(RoughPreprocess, PartitionMatchesBruteForceFilter) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> thr(0.0, 0.6);
  for (int t = 0; t < 50; ++t) {
    auto a = oracle::random_adjacency(25, 0.17, gen);
    auto g = oracle::graph_of(a);
    auto x = oracle::random_binary(25, 12, 0.3, gen);
    const double t1 = thr(gen);
    std::vector<Edge> kept, removed;
    for (auto e : g.edge_set())
      (oracle::jaccard(oracle::row_vec(x, e.u), oracle::row_vec(x, e.v)) < t1 ? removed : kept).push_back(e);
    auto r = rough_preprocess(g, x, SimilarityMetric::kJaccard, t1);
    ASSERT_EQ(r.graph.edge_set(), EdgeSet(kept));
    ASSERT_EQ(r.removed, EdgeSet(removed));
    ASSERT_EQ(set_union(r.graph.edge_set(), r.removed), g.edge_set());
    ASSERT_EQ(r.scores.edges.size(), g.num_edges());
  }
}

TEST(LowestScoringEdges, PicksLowestScores) {
  auto g = SparseGraph::undirected(4, EdgeSet({{0, 1}, {1, 2}, {2, 3}}));
  DenseMatrix x(4, 3, std::vector<double>{1, 1, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1});
  auto low = lowest_scoring_edges(g, x, SimilarityMetric::kJaccard, 1);
  EXPECT_EQ(low, EdgeSet({{1, 2}}));
  EXPECT_EQ(lowest_scoring_edges(g, x, SimilarityMetric::kJaccard, 10).size(), 3u);
}

namespace {

struct RecoveryFixture {
  SparseGraph poisoned;
  PreprocessResult pre;
};

RecoveryFixture make_recovery(std::size_t removed_target, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RecoveryFixture f;
  auto x = oracle::random_binary(80, 20, 0.2, gen);
  f.poisoned = oracle::graph_of(oracle::random_adjacency(80, 0.1, gen));
  auto low = lowest_scoring_edges(f.poisoned, x, SimilarityMetric::kJaccard, removed_target);
  f.pre.removed = low;
  f.pre.graph = SparseGraph::undirected(80, set_difference(f.poisoned.edge_set(), low));
  return f;
}

}  // namespace

TEST(MakeViews, ExtremeProbabilities) {
  auto f = make_recovery(30, 1);
  auto none = make_views(f.pre.graph, f.pre.removed, 0.0, 3, 7);
  ASSERT_EQ(none.views.size(), 3u);
  for (const auto& v : none.views) EXPECT_EQ(v, f.pre.graph);
  auto all = make_views(f.pre.graph, f.pre.removed, 1.0, 2, 7);
  for (const auto& v : all.views) EXPECT_EQ(v, f.poisoned);
}

TEST(MakeViews, MeanRecoveredCountMonteCarlo) {
  auto f = make_recovery(50, 2);
  ASSERT_EQ(f.pre.removed.size(), 50u);
  double total = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    auto b = make_views(f.pre.graph, f.pre.removed, 0.2, 1, s);
    total += static_cast<double>(b.views[0].num_edges() - f.pre.graph.num_edges());
  }
  const double mean = total / 1000;
  EXPECT_GE(mean, 8.5);
  EXPECT_LE(mean, 11.5);
}

TEST(MakeViews, ViewsSitBetweenBaseAndPoisoned) {
  auto f = make_recovery(40, 3);
  auto b = make_views(f.pre.graph, f.pre.removed, 0.3, 4, 9);
  for (const auto& v : b.views) {
    EXPECT_FALSE(v.is_directed());
    EXPECT_TRUE(subset(f.pre.graph.edge_set(), v.edge_set()));
    EXPECT_TRUE(subset(v.edge_set(), f.poisoned.edge_set()));
  }
  EXPECT_NE(b.views[0], b.views[1]);
  auto again = make_views(f.pre.graph, f.pre.removed, 0.3, 4, 9);
  EXPECT_EQ(again.views, b.views);
}

TEST(MakeViews, RejectsBadArguments) {
  auto f = make_recovery(5, 4);
  EXPECT_THROW(make_views(f.pre.graph, f.pre.removed, 1.5, 2, 1), InputError);
  EXPECT_THROW(make_views(f.pre.graph, f.pre.removed, 0.2, 0, 1), InputError);
}

TEST(RandomPerturbViews, Counts) {
  std::mt19937_64 gen(6);
  auto base = oracle::graph_of(oracle::random_adjacency(60, 0.1, gen));
  auto edges = base.edge_set();
  std::vector<Edge> first(edges.begin(), edges.begin() + 100);
  base = SparseGraph::undirected(60, EdgeSet(first));
  auto b = random_perturb_views(base, 0.2, 3, 5);
  for (const auto& v : b.views) {
    EXPECT_EQ(set_difference(base.edge_set(), v.edge_set()).size(), 10u);
    EXPECT_EQ(set_difference(v.edge_set(), base.edge_set()).size(), 10u);
  }
  auto zero = random_perturb_views(base, 0.0, 2, 5);
  for (const auto& v : zero.views) EXPECT_EQ(v, base);
  EXPECT_EQ(random_perturb_views(base, 0.2, 3, 5).views, b.views);
}

TEST(RandomPerturbViews, InfeasibleRejected) {
  auto g = SparseGraph::undirected(3, EdgeSet({{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_THROW(random_perturb_views(g, 1.0, 1, 1), InputError);
  EXPECT_THROW(random_perturb_views(g, -0.1, 1, 1), InputError);
}

TEST(IdenticalViews, CopiesBase) {
  auto g = SparseGraph::undirected(3, EdgeSet({{0, 1}}));
  auto b = identical_views(g, 2);
  ASSERT_EQ(b.views.size(), 2u);
  for (const auto& v : b.views) EXPECT_EQ(v, g);
}
