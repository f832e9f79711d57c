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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "stable/tensor.hpp"

namespace stable {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Sorted, duplicate-free list of unordered node pairs stored as (u < v).
class EdgeSet {
 public:
  EdgeSet() = default;
  // Normalizes each pair to (min, max), sorts and deduplicates. Self-pairs
  // are rejected.
  explicit EdgeSet(std::vector<Edge> pairs);

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  bool contains(NodeId a, NodeId b) const;
  std::span<const Edge> edges() const { return edges_; }
  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  // Largest endpoint + 1, or 0 for the empty set.
  std::size_t min_node_count() const;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::vector<Edge> edges_;
};

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b);

// Unit-weight adjacency in compressed-row form. Self-loops are never stored.
// An undirected graph stores both (i, j) and (j, i).
class SparseGraph {
 public:
  SparseGraph() = default;

  static SparseGraph undirected(std::size_t num_nodes, const EdgeSet& edges);
  // Arcs (i -> j) mean j is in row i. Duplicates are merged.
  static SparseGraph directed(std::size_t num_nodes, std::vector<Edge> arcs);

  std::size_t num_nodes() const { return num_nodes_; }
  bool is_directed() const { return directed_; }
  // Number of stored (row, col) entries.
  std::size_t num_arcs() const { return col_idx_.size(); }
  // Undirected pair count (= arcs / 2) for undirected graphs, arc count otherwise.
  std::size_t num_edges() const { return directed_ ? num_arcs() : num_arcs() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  bool has_arc(NodeId i, NodeId j) const;

  // Unordered pairs (i < j). For a directed graph, a pair is present when
  // either direction is stored.
  EdgeSet edge_set() const;
  std::vector<Edge> arcs() const;

  // Adds the reverse of every arc; the result is undirected.
  SparseGraph symmetrized() const;

  // 0/1 adjacency as a numeric operand.
  SparseMatrix adjacency_matrix() const;

  friend bool operator==(const SparseGraph&, const SparseGraph&) = default;

 private:
  std::size_t num_nodes_ = 0;
  bool directed_ = false;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_idx_;
};

inline constexpr int kUnknownLabel = -1;

struct LabelVector {
  std::vector<int> labels;  // kUnknownLabel for unlabeled nodes
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  int operator[](std::size_t i) const { return labels[i]; }
  bool known(std::size_t i) const { return labels[i] != kUnknownLabel; }
};

// Builds a LabelVector with K = max label + 1; rejects K < 2.
LabelVector make_labels(std::vector<int> labels);

std::vector<std::size_t> degrees(const SparseGraph& g);

struct ComponentSubgraph {
  SparseGraph graph;
  DenseMatrix features;
  LabelVector labels;
  std::vector<std::int64_t> old_to_new;  // -1 for dropped nodes
  std::vector<NodeId> new_to_old;
};

// Keeps the largest connected component (ties go to the component holding
// the smallest node id); surviving ids keep their relative order.
ComponentSubgraph largest_connected_component(const SparseGraph& g, const DenseMatrix& features,
                                              const LabelVector& labels);

// (D + I)^{-1/2} (A + I) (D + I)^{-1/2} with D the out-degree of each row.
SparseMatrix renormalized_adjacency(const SparseGraph& g);

// Counts edges by d_u + d_v, degrees taken on g.
std::map<std::size_t, std::size_t> edge_degree_histogram(const SparseGraph& g, const EdgeSet& edges);

}  // namespace stable
