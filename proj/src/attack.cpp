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

#include "stable/attack.hpp"

#include <cmath>
#include <unordered_set>
#include <vector>

#include "stable/errors.hpp"
#include "stable/rng.hpp"
#include "pair_sampler.hpp"

namespace stable {

using detail::key;
using detail::PairSampler;

namespace {

void check_rate(const AttackBudget& budget, double add_probability) {
  if (!(budget.rate >= 0.0 && budget.rate <= 1.0)) throw InputError("attack: perturbation rate must lie in [0, 1]");
  if (!(add_probability >= 0.0 && add_probability <= 1.0)) {
    throw InputError("attack: add probability must lie in [0, 1]");
  }
}

struct MoveLoop {
  std::vector<Edge> deletable;
  std::uint64_t addable = 0;
};

AttackResult run_moves(const SparseGraph& clean, const AttackBudget& budget, double add_probability,
                       MoveLoop pools, PairSampler& sampler, std::unordered_set<std::uint64_t>& added_keys) {
  Rng rng(budget.seed);
  const std::size_t target = budget.changes(clean.num_edges());
  std::vector<Edge> added;
  std::vector<Edge> removed;
  AttackResult result;
  for (std::size_t step = 0; step < target; ++step) {
    const bool can_add = pools.addable > 0;
    const bool can_delete = !pools.deletable.empty();
    if (!can_add && !can_delete) {
      result.complete = false;
      result.warning = "candidate pools exhausted after " + std::to_string(step) + " of " + std::to_string(target) +
                       " changes";
      break;
    }
    bool add = rng.bernoulli(add_probability);
    if (add && !can_add) add = false;
    if (!add && !can_delete) add = true;
    if (add) {
      Edge e = sampler.draw(rng, pools.addable, added_keys);
      added_keys.insert(key(e.u, e.v));
      added.push_back(e);
      --pools.addable;
    } else {
      const std::size_t pick = static_cast<std::size_t>(rng.index(pools.deletable.size()));
      removed.push_back(pools.deletable[pick]);
      pools.deletable[pick] = pools.deletable.back();
      pools.deletable.pop_back();
    }
  }
  result.record.added = EdgeSet(std::move(added));
  result.record.removed = EdgeSet(std::move(removed));
  result.graph = apply_perturbation(clean, result.record);
  return result;
}

std::unordered_set<std::uint64_t> edge_keys(const EdgeSet& edges) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(edges.size() * 2);
  for (const auto& e : edges) keys.insert(key(e.u, e.v));
  return keys;
}

}  // namespace

std::size_t AttackBudget::changes(std::size_t clean_edges) const {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(clean_edges)));
}

AttackResult random_attack(const SparseGraph& clean, const AttackBudget& budget, double add_probability) {
  if (clean.is_directed()) throw InputError("random_attack: graph must be undirected");
  check_rate(budget, add_probability);
  const EdgeSet edges = clean.edge_set();
  const std::size_t n = clean.num_nodes();
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::size_t target = budget.changes(edges.size());
  if (target > pairs) {
    throw InputError("random_attack: budget of " + std::to_string(target) + " changes exceeds " +
                     std::to_string(pairs) + " node pairs");
  }
  auto clean_keys = edge_keys(edges);
  std::unordered_set<std::uint64_t> added_keys;
  PairSampler sampler(n, clean_keys, [](NodeId, NodeId) { return true; });
  MoveLoop pools{{edges.begin(), edges.end()}, pairs - edges.size()};
  return run_moves(clean, budget, add_probability, std::move(pools), sampler, added_keys);
}

AttackResult dice_attack(const SparseGraph& clean, const LabelVector& labels, const AttackBudget& budget,
                         double add_probability) {
  if (clean.is_directed()) throw InputError("dice_attack: graph must be undirected");
  check_rate(budget, add_probability);
  const std::size_t n = clean.num_nodes();
  if (labels.size() != n) throw InputError("dice_attack: label count does not match node count");
  for (std::size_t i = 0; i < n; ++i) {
    if (!labels.known(i)) throw InputError("dice_attack: node " + std::to_string(i) + " has no label");
  }
  const EdgeSet edges = clean.edge_set();
  MoveLoop pools;
  std::uint64_t inter_edges = 0;
  for (const auto& e : edges) {
    if (labels[e.u] == labels[e.v]) {
      pools.deletable.push_back(e);
    } else {
      ++inter_edges;
    }
  }
  std::vector<std::uint64_t> class_size(static_cast<std::size_t>(labels.num_classes), 0);
  for (std::size_t i = 0; i < n; ++i) ++class_size[static_cast<std::size_t>(labels[i])];
  std::uint64_t inter_pairs = 0, seen = 0;
  for (auto s : class_size) {
    inter_pairs += s * seen;
    seen += s;
  }
  pools.addable = inter_pairs - inter_edges;

  auto clean_keys = edge_keys(edges);
  std::unordered_set<std::uint64_t> added_keys;
  PairSampler sampler(n, clean_keys, [&labels](NodeId u, NodeId v) { return labels[u] != labels[v]; });
  return run_moves(clean, budget, add_probability, std::move(pools), sampler, added_keys);
}

PerturbationRecord perturbation_diff(const SparseGraph& clean, const SparseGraph& poisoned) {
  if (clean.num_nodes() != poisoned.num_nodes()) {
    throw InputError("perturbation_diff: node counts differ (" + std::to_string(clean.num_nodes()) + " vs " +
                     std::to_string(poisoned.num_nodes()) + ")");
  }
  const EdgeSet a = clean.edge_set();
  const EdgeSet b = poisoned.edge_set();
  return {set_difference(b, a), set_difference(a, b)};
}

SparseGraph apply_perturbation(const SparseGraph& clean, const PerturbationRecord& record) {
  EdgeSet edges = set_union(set_difference(clean.edge_set(), record.removed), record.added);
  return SparseGraph::undirected(clean.num_nodes(), edges);
}

}  // namespace stable
