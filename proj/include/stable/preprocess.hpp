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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stable/graph.hpp"
#include "stable/tensor.hpp"

namespace stable {

enum class SimilarityMetric { kJaccard, kCosine };

SimilarityMetric parse_metric(const std::string& name);
std::string to_string(SimilarityMetric metric);

// Jaccard binarizes as (value > 0) and returns 0 for an empty union; cosine
// returns 0 when either norm is 0.
double feature_similarity(std::span<const double> a, std::span<const double> b, SimilarityMetric metric);

// One score per undirected edge, aligned with `edges`.
struct SimilarityScores {
  std::vector<Edge> edges;
  std::vector<double> scores;
};

SimilarityScores score_edges(const SparseGraph& g, const DenseMatrix& features, SimilarityMetric metric);

struct PreprocessResult {
  SparseGraph graph;  // kept edges (score >= t1)
  EdgeSet removed;    // score < t1
  SimilarityScores scores;
};

PreprocessResult rough_preprocess(const SparseGraph& poisoned, const DenseMatrix& features, SimilarityMetric metric,
                                  double t1);

// The `count` edges of g with the lowest feature similarity (ties broken by
// edge order). Used as the raw-feature pruning baseline for removal audits.
EdgeSet lowest_scoring_edges(const SparseGraph& g, const DenseMatrix& features, SimilarityMetric metric,
                             std::size_t count);

struct ViewBundle {
  SparseGraph base;  // pre-processed graph
  EdgeSet removed;   // edges dropped by pre-processing
  std::vector<SparseGraph> views;
  std::uint64_t seed = 0;
};

// Recovery views: each removed edge reappears in a view with probability p,
// independently per view and per unordered pair.
ViewBundle make_views(const SparseGraph& base, const EdgeSet& removed, double p, std::size_t num_views,
                      std::uint64_t seed);

// Random views: each view drops round(ratio*|E|/2) random edges and adds the
// same number of random non-edges.
ViewBundle random_perturb_views(const SparseGraph& base, double ratio, std::size_t num_views, std::uint64_t seed);

// num_views copies of base.
ViewBundle identical_views(const SparseGraph& base, std::size_t num_views);

}  // namespace stable
