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

#include "stable/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stable/errors.hpp"

namespace stable {

namespace {

std::string pair_string(NodeId a, NodeId b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

EdgeSet::EdgeSet(std::vector<Edge> pairs) : edges_(std::move(pairs)) {
  for (auto& e : edges_) {
    if (e.u == e.v) throw InputError("EdgeSet: self-pair " + pair_string(e.u, e.v));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeSet::contains(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
}

std::size_t EdgeSet::min_node_count() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n = std::max<std::size_t>(n, e.v + 1);
  return n;
}

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b) {
  std::vector<Edge> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return EdgeSet(std::move(out));
}

EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b) {
  std::vector<Edge> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return EdgeSet(std::move(out));
}

EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b) {
  std::vector<Edge> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return EdgeSet(std::move(out));
}

SparseGraph SparseGraph::undirected(std::size_t num_nodes, const EdgeSet& edges) {
  std::vector<Edge> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& e : edges) {
    arcs.push_back(e);
    arcs.push_back({e.v, e.u});
  }
  SparseGraph g = directed(num_nodes, std::move(arcs));
  g.directed_ = false;
  return g;
}

SparseGraph SparseGraph::directed(std::size_t num_nodes, std::vector<Edge> arcs) {
  for (const auto& a : arcs) {
    if (a.u >= num_nodes || a.v >= num_nodes) {
      throw InputError("SparseGraph: arc " + pair_string(a.u, a.v) + " outside " + std::to_string(num_nodes) +
                       " nodes");
    }
    if (a.u == a.v) throw InputError("SparseGraph: self-loop at node " + std::to_string(a.u));
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  SparseGraph g;
  g.num_nodes_ = num_nodes;
  g.directed_ = true;
  g.row_ptr_.assign(num_nodes + 1, 0);
  g.col_idx_.reserve(arcs.size());
  for (const auto& a : arcs) {
    ++g.row_ptr_[a.u + 1];
    g.col_idx_.push_back(a.v);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.row_ptr_[i + 1] += g.row_ptr_[i];
  return g;
}

bool SparseGraph::has_arc(NodeId i, NodeId j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

EdgeSet SparseGraph::edge_set() const {
  std::vector<Edge> pairs;
  pairs.reserve(num_arcs());
  for (NodeId i = 0; i < num_nodes_; ++i) {
    for (NodeId j : neighbors(i)) {
      if (directed_ || i < j) pairs.push_back({i, j});
    }
  }
  return EdgeSet(std::move(pairs));
}

std::vector<Edge> SparseGraph::arcs() const {
  std::vector<Edge> out;
  out.reserve(num_arcs());
  for (NodeId i = 0; i < num_nodes_; ++i) {
    for (NodeId j : neighbors(i)) out.push_back({i, j});
  }
  return out;
}

SparseGraph SparseGraph::symmetrized() const { return undirected(num_nodes_, edge_set()); }

SparseMatrix SparseGraph::adjacency_matrix() const {
  std::vector<Triplet> entries;
  entries.reserve(num_arcs());
  for (NodeId i = 0; i < num_nodes_; ++i) {
    for (NodeId j : neighbors(i)) entries.push_back({i, j, 1.0});
  }
  return SparseMatrix::from_triplets(num_nodes_, num_nodes_, std::move(entries));
}

LabelVector make_labels(std::vector<int> labels) {
  LabelVector out;
  int max_label = -1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < kUnknownLabel) {
      throw InputError("labels: negative label " + std::to_string(labels[i]) + " at node " + std::to_string(i));
    }
    max_label = std::max(max_label, labels[i]);
  }
  out.num_classes = max_label + 1;
  if (out.num_classes < 2) throw InputError("labels: need at least 2 classes, found " + std::to_string(out.num_classes));
  out.labels = std::move(labels);
  return out;
}

std::vector<std::size_t> degrees(const SparseGraph& g) {
  std::vector<std::size_t> d(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) d[i] = g.neighbors(i).size();
  return d;
}

ComponentSubgraph largest_connected_component(const SparseGraph& g, const DenseMatrix& features,
                                              const LabelVector& labels) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw InputError("largest_connected_component: empty graph");
  if (g.is_directed()) throw InputError("largest_connected_component: graph must be undirected");
  if (features.rows() != n || labels.size() != n) {
    throw InputError("largest_connected_component: features/labels do not match " + std::to_string(n) + " nodes");
  }
  // Components are discovered in order of their smallest node id, so a strict
  // '>' comparison keeps the earliest one on ties.
  std::vector<std::int64_t> component(n, -1);
  std::int64_t best = -1;
  std::size_t best_size = 0;
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < n; ++start) {
    if (component[start] != -1) continue;
    std::size_t size = 0;
    component[start] = start;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++size;
      for (NodeId v : g.neighbors(u)) {
        if (component[v] == -1) {
          component[v] = start;
          stack.push_back(v);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = start;
    }
  }

  ComponentSubgraph out;
  out.old_to_new.assign(n, -1);
  for (NodeId i = 0; i < n; ++i) {
    if (component[i] == best) {
      out.old_to_new[i] = static_cast<std::int64_t>(out.new_to_old.size());
      out.new_to_old.push_back(i);
    }
  }
  std::vector<Edge> kept;
  for (const auto& e : g.edge_set()) {
    if (out.old_to_new[e.u] >= 0 && out.old_to_new[e.v] >= 0) {
      kept.push_back({static_cast<NodeId>(out.old_to_new[e.u]), static_cast<NodeId>(out.old_to_new[e.v])});
    }
  }
  out.graph = SparseGraph::undirected(best_size, EdgeSet(std::move(kept)));
  out.features = DenseMatrix(best_size, features.cols());
  std::vector<int> new_labels(best_size);
  for (std::size_t k = 0; k < best_size; ++k) {
    auto src = features.row(out.new_to_old[k]);
    std::copy(src.begin(), src.end(), out.features.row(k).begin());
    new_labels[k] = labels[out.new_to_old[k]];
  }
  out.labels.labels = std::move(new_labels);
  out.labels.num_classes = labels.num_classes;
  return out;
}

SparseMatrix renormalized_adjacency(const SparseGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  for (NodeId i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.neighbors(i).size() + 1));
  std::vector<Triplet> entries;
  entries.reserve(g.num_arcs() + n);
  for (NodeId i = 0; i < n; ++i) {
    entries.push_back({i, i, inv_sqrt[i] * inv_sqrt[i]});
    for (NodeId j : g.neighbors(i)) entries.push_back({i, j, inv_sqrt[i] * inv_sqrt[j]});
  }
  return SparseMatrix::from_triplets(n, n, std::move(entries));
}

std::map<std::size_t, std::size_t> edge_degree_histogram(const SparseGraph& g, const EdgeSet& edges) {
  const auto d = degrees(g);
  std::map<std::size_t, std::size_t> hist;
  for (const auto& e : edges) {
    if (e.v >= g.num_nodes()) {
      throw InputError("edge_degree_histogram: edge " + pair_string(e.u, e.v) + " outside graph");
    }
    ++hist[d[e.u] + d[e.v]];
  }
  return hist;
}

}  // namespace stable
