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
#include <string>

#include "stable/graph.hpp"

namespace stable {

struct AttackBudget {
  double rate = 0.0;  // fraction of clean undirected edges to flip
  std::uint64_t seed = 0;

  // round(rate * clean_edges)
  std::size_t changes(std::size_t clean_edges) const;
};

struct PerturbationRecord {
  EdgeSet added;
  EdgeSet removed;

  std::size_t size() const { return added.size() + removed.size(); }
  friend bool operator==(const PerturbationRecord&, const PerturbationRecord&) = default;
};

struct AttackResult {
  SparseGraph graph;
  PerturbationRecord record;
  // False when DICE ran out of candidate moves before the budget was met.
  bool complete = true;
  std::string warning;
};

// Each change adds a uniformly random non-edge with probability
// add_probability, else deletes a uniformly random clean edge. When one
// pool is empty the other move is used. Rejects budgets larger than the
// number of node pairs.
AttackResult random_attack(const SparseGraph& clean, const AttackBudget& budget, double add_probability = 0.5);

// Disconnect internally, connect externally: deletions draw from
// same-label edges, additions from different-label non-edges.
AttackResult dice_attack(const SparseGraph& clean, const LabelVector& labels, const AttackBudget& budget,
                         double add_probability = 0.5);

PerturbationRecord perturbation_diff(const SparseGraph& clean, const SparseGraph& poisoned);
SparseGraph apply_perturbation(const SparseGraph& clean, const PerturbationRecord& record);

}  // namespace stable
