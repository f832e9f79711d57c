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
#include <functional>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "stable/graph.hpp"
#include "stable/rng.hpp"

namespace stable::detail {

inline std::uint64_t key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Draws uniformly from the unordered pairs accepted by `eligible` that are
// neither existing edges nor already added. The number of such pairs must be
// known and positive. Falls back to enumeration when the pool is sparse
// relative to all pairs, so rejection sampling stays bounded.
class PairSampler {
 public:
  PairSampler(std::size_t n, const std::unordered_set<std::uint64_t>& clean,
              std::function<bool(NodeId, NodeId)> eligible)
      : n_(n), clean_(clean), eligible_(std::move(eligible)) {}

  Edge draw(Rng& rng, std::uint64_t available, const std::unordered_set<std::uint64_t>& added) {
    const std::uint64_t pairs = static_cast<std::uint64_t>(n_) * (n_ - 1) / 2;
    if (available * 32 >= pairs) {
      for (;;) {
        auto u = static_cast<NodeId>(rng.index(n_));
        auto v = static_cast<NodeId>(rng.index(n_));
        if (u == v || !eligible_(u, v)) continue;
        const auto k = key(u, v);
        if (clean_.count(k) || added.count(k)) continue;
        return u < v ? Edge{u, v} : Edge{v, u};
      }
    }
    std::uint64_t target = rng.index(available);
    for (NodeId u = 0; u < n_; ++u) {
      for (NodeId v = u + 1; v < n_; ++v) {
        if (!eligible_(u, v)) continue;
        const auto k = key(u, v);
        if (clean_.count(k) || added.count(k)) continue;
        if (target-- == 0) return {u, v};
      }
    }
    throw std::logic_error("PairSampler: pool count out of sync");
  }

 private:
  std::size_t n_;
  const std::unordered_set<std::uint64_t>& clean_;
  std::function<bool(NodeId, NodeId)> eligible_;
};

}  // namespace stable::detail
