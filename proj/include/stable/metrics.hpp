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

#include <span>

#include "stable/graph.hpp"

namespace stable {

// Fraction of `nodes` whose prediction equals the label. Rejects an empty
// node set.
double accuracy(std::span<const int> predictions, const LabelVector& labels, std::span<const NodeId> nodes);

double mean(std::span<const double> values);
// Population standard deviation (divides by n).
double population_std(std::span<const double> values);

}  // namespace stable
