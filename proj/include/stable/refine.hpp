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

#include <cstddef>

#include "stable/graph.hpp"
#include "stable/tensor.hpp"

namespace stable {

// Cosine similarity of embedding rows i and j; 0 if either row is all-zero.
// Exactly symmetric in (i, j).
double embedding_similarity(const DenseMatrix& embeddings, std::size_t i, std::size_t j);

// Keeps edge (i, j) of g iff embedding_similarity(i, j) > t2.
SparseGraph prune_edges(const SparseGraph& g, const DenseMatrix& embeddings, double t2);

// Directed top-k graph: row i points at the k other nodes with the highest
// score in row i of `similarity` (ties go to the smaller id). k >= N - 1
// connects every node to all others.
SparseGraph topk_from_similarity(const DenseMatrix& similarity, std::size_t k);

// Top-k graph under embedding_similarity, computed one row at a time.
SparseGraph topk_graph(const DenseMatrix& embeddings, std::size_t k);

// Elementwise OR of the retained graph and the top-k graph; directed.
SparseGraph topk_insert(const SparseGraph& retained, const DenseMatrix& embeddings, std::size_t k);

struct RefinedGraph {
  SparseGraph retained;  // undirected, after pruning
  SparseGraph topk;      // directed insertions
  SparseGraph optimal;   // directed union used for aggregation
};

RefinedGraph refine_graph(const SparseGraph& preprocessed, const DenseMatrix& embeddings, double t2, std::size_t k);

struct RemovalCounts {
  std::size_t total = 0;
  std::size_t adversarial = 0;          // removed and not in the clean graph
  std::size_t normal = 0;               // removed but present in the clean graph
  std::size_t normal_heterophilic = 0;  // normal removals joining different labels
  double accuracy = 0.0;                // adversarial / total, 0 when nothing was removed

  friend bool operator==(const RemovalCounts&, const RemovalCounts&) = default;
};

RemovalCounts removal_report(const SparseGraph& clean, const SparseGraph& poisoned, const EdgeSet& removed,
                             const LabelVector& labels);

}  // namespace stable
