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
#include "stable/graph.hpp"

using namespace stable;

namespace {

SparseGraph make(std::size_t n, std::vector<Edge> e) { return SparseGraph::undirected(n, EdgeSet(std::move(e))); }

SparseGraph triangle() { return make(3, {{0, 1}, {1, 2}, {0, 2}}); }
SparseGraph path3() { return make(3, {{0, 1}, {1, 2}}); }

// Component sizes by repeated flood fill over a dense adjacency matrix.
std::vector<std::size_t> component_sizes(const oracle::Adj& a) {
  const std::size_t n = a.size();
  std::vector<int> comp(n, -1);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      ++sizes.back();
      for (std::size_t u = 0; u < n; ++u)
        if (a[v][u] && comp[u] < 0) {
          comp[u] = id;
          stack.push_back(u);
        }
    }
  }
  return sizes;
}

}  // namespace

TEST(EdgeSet, NormalizesAndDeduplicates) {
  EdgeSet e({{3, 1}, {1, 3}, {0, 2}});
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e.edges()[0], (Edge{0, 2}));
  EXPECT_EQ(e.edges()[1], (Edge{1, 3}));
  EXPECT_TRUE(e.contains(3, 1));
  EXPECT_FALSE(e.contains(0, 1));
  EXPECT_EQ(e.min_node_count(), 4u);
  EXPECT_THROW(EdgeSet({{2, 2}}), InputError);
}

TEST(EdgeSet, SetAlgebra) {
  EdgeSet a({{0, 1}, {1, 2}, {2, 3}});
  EdgeSet b({{1, 2}, {3, 4}});
  EXPECT_EQ(set_union(a, b), EdgeSet({{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
  EXPECT_EQ(set_difference(a, b), EdgeSet({{0, 1}, {2, 3}}));
  EXPECT_EQ(set_intersection(a, b), EdgeSet({{1, 2}}));
}

TEST(SparseGraph, UndirectedStoresBothDirections) {
  auto g = path3();
  EXPECT_FALSE(g.is_directed());
  EXPECT_EQ(g.num_arcs(), 4u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_TRUE(g.has_arc(1, 0));
  EXPECT_TRUE(g.has_arc(0, 1));
  EXPECT_FALSE(g.has_arc(0, 2));
  EXPECT_EQ(g.edge_set(), EdgeSet({{0, 1}, {1, 2}}));
  EXPECT_THROW(make(2, {{0, 2}}), InputError);
}

TEST(SparseGraph, DirectedDedupAndValidation) {
  auto g = SparseGraph::directed(3, {{0, 1}, {0, 1}, {2, 1}});
  EXPECT_TRUE(g.is_directed());
  EXPECT_EQ(g.num_arcs(), 2u);
  EXPECT_TRUE(g.has_arc(2, 1));
  EXPECT_FALSE(g.has_arc(1, 2));
  EXPECT_EQ(g.edge_set(), EdgeSet({{0, 1}, {1, 2}}));
  auto s = g.symmetrized();
  EXPECT_FALSE(s.is_directed());
  EXPECT_EQ(s.num_arcs(), 4u);
  EXPECT_THROW(SparseGraph::directed(3, {{1, 1}}), InputError);
  EXPECT_THROW(SparseGraph::directed(3, {{0, 3}}), InputError);
}

TEST(Degrees, Examples) {
  EXPECT_EQ(degrees(make(4, {})), (std::vector<std::size_t>{0, 0, 0, 0}));
  EXPECT_EQ(degrees(triangle()), (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(degrees(path3()), (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(degrees(SparseGraph::directed(3, {{0, 1}, {0, 2}, {2, 1}})), (std::vector<std::size_t>{2, 0, 1}));
}

TEST(Degrees, SumIsTwiceEdgeCount) {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::graph_of(oracle::random_adjacency(40, 0.1, gen));
    std::size_t s = 0;
    for (auto d : degrees(g)) s += d;
    EXPECT_EQ(s, 2 * g.num_edges());
  }
}

TEST(LargestComponent, KeepsLargerComponent) {
  auto g = make(5, {{0, 1}, {2, 3}, {3, 4}});
  DenseMatrix x(5, 1);
  for (int i = 0; i < 5; ++i) x(i, 0) = i;
  auto lcc = largest_connected_component(g, x, make_labels({0, 1, 0, 1, 0}));
  EXPECT_EQ(lcc.graph.num_nodes(), 3u);
  EXPECT_EQ(lcc.new_to_old, (std::vector<NodeId>{2, 3, 4}));
  EXPECT_EQ(lcc.old_to_new, (std::vector<std::int64_t>{-1, -1, 0, 1, 2}));
  EXPECT_EQ(lcc.graph.edge_set(), EdgeSet({{0, 1}, {1, 2}}));
  EXPECT_EQ(lcc.features(0, 0), 2.0);
  EXPECT_EQ(lcc.labels.labels, (std::vector<int>{0, 1, 0}));
}

TEST(LargestComponent, ConnectedGraphIsIdentity) {
  auto g = triangle();
  auto lcc = largest_connected_component(g, DenseMatrix(3, 2, 1.0), make_labels({0, 1, 1}));
  EXPECT_EQ(lcc.graph, g);
  EXPECT_EQ(lcc.new_to_old, (std::vector<NodeId>{0, 1, 2}));
}

TEST(LargestComponent, TieGoesToComponentWithNodeZero) {
  auto g = make(4, {{1, 3}, {0, 2}});
  auto lcc = largest_connected_component(g, DenseMatrix(4, 1), make_labels({0, 1, 0, 1}));
  EXPECT_EQ(lcc.new_to_old, (std::vector<NodeId>{0, 2}));
}

TEST(LargestComponent, EmptyGraphRejected) {
  EXPECT_THROW(largest_connected_component(SparseGraph::undirected(0, EdgeSet()), DenseMatrix(), LabelVector{}),
               InputError);
}

TEST(LargestComponent, MatchesFloodFillOracle) {
  std::mt19937_64 gen(33);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = size(gen);
    auto a = oracle::random_adjacency(n, 1.2 / n, gen);
    auto sizes = component_sizes(a);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
    auto lcc = largest_connected_component(oracle::graph_of(a), DenseMatrix(n, 1), make_labels(labels));
    ASSERT_EQ(lcc.graph.num_nodes(), *std::max_element(sizes.begin(), sizes.end()));
  }
}

TEST(RenormalizedAdjacency, Examples) {
  auto iso = renormalized_adjacency(make(2, {}));
  EXPECT_EQ(iso.at(0, 0), 1.0);
  auto edge = renormalized_adjacency(make(2, {{0, 1}}));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(edge.at(i, j), 0.5);
  EXPECT_NEAR(renormalized_adjacency(path3()).at(0, 1), 1.0 / std::sqrt(6.0), 1e-15);
}

TEST(RenormalizedAdjacency, SymmetricAndMatchesOracle) {
  std::mt19937_64 gen(44);
  std::uniform_int_distribution<std::size_t> size(1, 100);
  std::uniform_real_distribution<double> dens(0.0, 0.3);
  for (int t = 0; t < 50; ++t) {
    auto a = oracle::random_adjacency(size(gen), dens(gen), gen);
    auto m = renormalized_adjacency(oracle::graph_of(a));
    auto expect = oracle::renormalized(a);
    ASSERT_LE(oracle::max_abs_diff(expect, m.to_dense()), 1e-12);
    for (double v : m.values()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(m, m.transpose());
  }
}

TEST(EdgeDegreeHistogram, Examples) {
  auto tri = triangle();
  EXPECT_EQ(edge_degree_histogram(tri, tri.edge_set()), (std::map<std::size_t, std::size_t>{{4, 3}}));
  auto p = path3();
  EXPECT_EQ(edge_degree_histogram(p, p.edge_set()), (std::map<std::size_t, std::size_t>{{3, 2}}));
  auto star = make(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(edge_degree_histogram(star, star.edge_set()), (std::map<std::size_t, std::size_t>{{4, 3}}));
}

TEST(Labels, RequireTwoClasses) {
  EXPECT_THROW(make_labels({0, 0, 0}), InputError);
  auto l = make_labels({0, kUnknownLabel, 2});
  EXPECT_EQ(l.num_classes, 3);
  EXPECT_FALSE(l.known(1));
}
