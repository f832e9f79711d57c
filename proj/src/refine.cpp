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

#include "stable/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "stable/errors.hpp"

namespace stable {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double cosine(std::span<const double> a, std::span<const double> b, double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return dot(a, b) / (norm_a * norm_b);
}

std::vector<double> row_norms(const DenseMatrix& m) {
  std::vector<double> norms(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) norms[i] = std::sqrt(dot(m.row(i), m.row(i)));
  return norms;
}

// Appends the best `k` columns of one similarity row (self excluded).
template <typename ScoreFn>
void select_row(std::size_t n, std::size_t self, std::size_t k, ScoreFn&& score, std::vector<double>& scratch,
                std::vector<NodeId>& order, std::vector<Edge>& arcs) {
  order.clear();
  for (std::size_t j = 0; j < n; ++j) {
    scratch[j] = score(j);
    if (j != self) order.push_back(static_cast<NodeId>(j));
  }
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](NodeId a, NodeId b) { return scratch[a] != scratch[b] ? scratch[a] > scratch[b] : a < b; });
  for (std::size_t t = 0; t < take; ++t) arcs.push_back({static_cast<NodeId>(self), order[t]});
}

}  // namespace

double embedding_similarity(const DenseMatrix& embeddings, std::size_t i, std::size_t j) {
  auto a = embeddings.row(i);
  auto b = embeddings.row(j);
  return cosine(a, b, std::sqrt(dot(a, a)), std::sqrt(dot(b, b)));
}

SparseGraph prune_edges(const SparseGraph& g, const DenseMatrix& embeddings, double t2) {
  if (!std::isfinite(t2)) throw InputError("prune_edges: t2 must be finite");
  if (embeddings.rows() != g.num_nodes()) throw InputError("prune_edges: embedding rows do not match node count");
  std::vector<Edge> kept;
  for (const auto& e : g.edge_set()) {
    if (embedding_similarity(embeddings, e.u, e.v) > t2) kept.push_back(e);
  }
  return SparseGraph::undirected(g.num_nodes(), EdgeSet(std::move(kept)));
}

SparseGraph topk_from_similarity(const DenseMatrix& similarity, std::size_t k) {
  const std::size_t n = similarity.rows();
  if (similarity.cols() != n) throw InputError("topk_from_similarity: matrix must be square");
  std::vector<Edge> arcs;
  std::vector<double> scratch(n);
  std::vector<NodeId> order;
  for (std::size_t i = 0; i < n && k > 0; ++i) {
    select_row(n, i, k, [&](std::size_t j) { return similarity(i, j); }, scratch, order, arcs);
  }
  return SparseGraph::directed(n, std::move(arcs));
}

SparseGraph topk_graph(const DenseMatrix& embeddings, std::size_t k) {
  const std::size_t n = embeddings.rows();
  const auto norms = row_norms(embeddings);
  std::vector<Edge> arcs;
  std::vector<double> scratch(n);
  std::vector<NodeId> order;
  for (std::size_t i = 0; i < n && k > 0; ++i) {
    auto hi = embeddings.row(i);
    select_row(
        n, i, k, [&](std::size_t j) { return cosine(hi, embeddings.row(j), norms[i], norms[j]); }, scratch, order,
        arcs);
  }
  return SparseGraph::directed(n, std::move(arcs));
}

SparseGraph topk_insert(const SparseGraph& retained, const DenseMatrix& embeddings, std::size_t k) {
  if (embeddings.rows() != retained.num_nodes()) throw InputError("topk_insert: embedding rows do not match node count");
  std::vector<Edge> arcs = retained.arcs();
  const auto extra = topk_graph(embeddings, k).arcs();
  arcs.insert(arcs.end(), extra.begin(), extra.end());
  return SparseGraph::directed(retained.num_nodes(), std::move(arcs));
}

RefinedGraph refine_graph(const SparseGraph& preprocessed, const DenseMatrix& embeddings, double t2, std::size_t k) {
  RefinedGraph out;
  out.retained = prune_edges(preprocessed, embeddings, t2);
  out.topk = topk_graph(embeddings, k);
  std::vector<Edge> arcs = out.retained.arcs();
  const auto extra = out.topk.arcs();
  arcs.insert(arcs.end(), extra.begin(), extra.end());
  out.optimal = SparseGraph::directed(preprocessed.num_nodes(), std::move(arcs));
  return out;
}

RemovalCounts removal_report(const SparseGraph& clean, const SparseGraph& poisoned, const EdgeSet& removed,
                             const LabelVector& labels) {
  if (clean.num_nodes() != poisoned.num_nodes() || labels.size() != clean.num_nodes()) {
    throw InputError("removal_report: graphs and labels must cover the same nodes");
  }
  RemovalCounts out;
  for (const auto& e : removed) {
    if (e.v >= poisoned.num_nodes() || !poisoned.has_arc(e.u, e.v)) {
      throw InputError("removal_report: removed edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") is not in the poisoned graph");
    }
    ++out.total;
    if (clean.has_arc(e.u, e.v)) {
      ++out.normal;
      if (labels[e.u] != labels[e.v]) ++out.normal_heterophilic;
    } else {
      ++out.adversarial;
    }
  }
  out.accuracy = out.total == 0 ? 0.0 : static_cast<double>(out.adversarial) / static_cast<double>(out.total);
  return out;
}

}  // namespace stable
