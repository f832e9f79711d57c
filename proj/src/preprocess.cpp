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

#include "stable/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "pair_sampler.hpp"
#include "stable/errors.hpp"
#include "stable/rng.hpp"

namespace stable {

SimilarityMetric parse_metric(const std::string& name) {
  if (name == "jaccard") return SimilarityMetric::kJaccard;
  if (name == "cosine") return SimilarityMetric::kCosine;
  throw InputError("unknown similarity metric '" + name + "' (expected jaccard or cosine)");
}

std::string to_string(SimilarityMetric metric) {
  return metric == SimilarityMetric::kJaccard ? "jaccard" : "cosine";
}

double feature_similarity(std::span<const double> a, std::span<const double> b, SimilarityMetric metric) {
  if (a.size() != b.size()) {
    throw InputError("feature_similarity: dimension mismatch " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  if (metric == SimilarityMetric::kJaccard) {
    std::size_t both = 0, either = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const bool x = a[i] > 0.0;
      const bool y = b[i] > 0.0;
      both += x && y;
      either += x || y;
    }
    return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SimilarityScores score_edges(const SparseGraph& g, const DenseMatrix& features, SimilarityMetric metric) {
  if (features.rows() != g.num_nodes()) {
    throw InputError("score_edges: " + std::to_string(features.rows()) + " feature rows for " +
                     std::to_string(g.num_nodes()) + " nodes");
  }
  SimilarityScores out;
  const EdgeSet edges = g.edge_set();
  out.edges.assign(edges.begin(), edges.end());
  out.scores.reserve(out.edges.size());
  for (const auto& e : out.edges) out.scores.push_back(feature_similarity(features.row(e.u), features.row(e.v), metric));
  return out;
}

PreprocessResult rough_preprocess(const SparseGraph& poisoned, const DenseMatrix& features, SimilarityMetric metric,
                                  double t1) {
  if (!std::isfinite(t1)) throw InputError("rough_preprocess: t1 must be finite");
  PreprocessResult out;
  out.scores = score_edges(poisoned, features, metric);
  std::vector<Edge> kept, removed;
  for (std::size_t k = 0; k < out.scores.edges.size(); ++k) {
    (out.scores.scores[k] < t1 ? removed : kept).push_back(out.scores.edges[k]);
  }
  out.graph = SparseGraph::undirected(poisoned.num_nodes(), EdgeSet(std::move(kept)));
  out.removed = EdgeSet(std::move(removed));
  return out;
}

EdgeSet lowest_scoring_edges(const SparseGraph& g, const DenseMatrix& features, SimilarityMetric metric,
                             std::size_t count) {
  const SimilarityScores s = score_edges(g, features, metric);
  std::vector<std::size_t> order(s.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });
  order.resize(std::min(count, order.size()));
  std::vector<Edge> out;
  for (auto k : order) out.push_back(s.edges[k]);
  return EdgeSet(std::move(out));
}

ViewBundle make_views(const SparseGraph& base, const EdgeSet& removed, double p, std::size_t num_views,
                      std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("make_views: recovery probability must lie in [0, 1]");
  if (num_views < 1) throw InputError("make_views: need at least one view");
  ViewBundle out{base, removed, {}, seed};
  const EdgeSet kept = base.edge_set();
  for (std::size_t j = 0; j < num_views; ++j) {
    Rng rng(derive_seed(seed, j));
    std::vector<Edge> recovered;
    for (const auto& e : removed) {
      if (rng.bernoulli(p)) recovered.push_back(e);
    }
    out.views.push_back(SparseGraph::undirected(base.num_nodes(), set_union(kept, EdgeSet(std::move(recovered)))));
  }
  return out;
}

ViewBundle random_perturb_views(const SparseGraph& base, double ratio, std::size_t num_views, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw InputError("random_perturb_views: ratio must lie in [0, 1]");
  if (num_views < 1) throw InputError("random_perturb_views: need at least one view");
  const EdgeSet edges = base.edge_set();
  const std::size_t n = base.num_nodes();
  const std::size_t count =
      static_cast<std::size_t>(std::llround(ratio * static_cast<double>(edges.size()) / 2.0));
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (count > edges.size() || count > pairs - edges.size()) {
    throw InputError("random_perturb_views: cannot remove and add " + std::to_string(count) + " edges on a graph with " +
                     std::to_string(edges.size()) + " edges and " + std::to_string(pairs - edges.size()) +
                     " non-edges");
  }
  std::unordered_set<std::uint64_t> existing;
  for (const auto& e : edges) existing.insert(detail::key(e.u, e.v));
  detail::PairSampler sampler(n, existing, [](NodeId, NodeId) { return true; });

  ViewBundle out{base, EdgeSet(), {}, seed};
  for (std::size_t j = 0; j < num_views; ++j) {
    Rng rng(derive_seed(seed, j));
    std::vector<Edge> pool(edges.begin(), edges.end());
    // Partial shuffle: the first `count` slots are a uniform subset to drop.
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t pick = i + static_cast<std::size_t>(rng.index(pool.size() - i));
      std::swap(pool[i], pool[pick]);
    }
    std::vector<Edge> view_edges(pool.begin() + static_cast<std::ptrdiff_t>(count), pool.end());
    std::unordered_set<std::uint64_t> added;
    for (std::size_t i = 0; i < count; ++i) {
      Edge e = sampler.draw(rng, pairs - edges.size() - i, added);
      added.insert(detail::key(e.u, e.v));
      view_edges.push_back(e);
    }
    out.views.push_back(SparseGraph::undirected(n, EdgeSet(std::move(view_edges))));
  }
  return out;
}

ViewBundle identical_views(const SparseGraph& base, std::size_t num_views) {
  if (num_views < 1) throw InputError("identical_views: need at least one view");
  return {base, EdgeSet(), std::vector<SparseGraph>(num_views, base), 0};
}

}  // namespace stable
