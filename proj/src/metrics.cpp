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

#include "stable/metrics.hpp"

#include <cmath>
#include <string>

#include "stable/errors.hpp"

namespace stable {

double accuracy(std::span<const int> predictions, const LabelVector& labels, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw InputError("accuracy: empty node set");
  std::size_t correct = 0;
  for (auto i : nodes) {
    if (i >= predictions.size() || i >= labels.size()) {
      throw InputError("accuracy: node " + std::to_string(i) + " out of range");
    }
    correct += predictions[i] == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size()));
}

}  // namespace stable
