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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stable/refine.hpp"

namespace stable {

// Edge counts at each pipeline stage for one run.
struct StageStats {
  std::size_t input_edges = 0;
  std::size_t preprocess_removed = 0;
  std::size_t preprocessed_edges = 0;
  std::vector<std::size_t> view_edges;  // undirected edge count per view
  std::size_t recovered_total = 0;      // recovered edges summed over views
  std::size_t pruned = 0;               // removed during refinement
  std::size_t retained_edges = 0;
  std::size_t inserted_arcs = 0;        // top-k entries
  std::size_t optimal_arcs = 0;         // directed entries in the final graph
  std::size_t encoder_epochs = 0;
  std::size_t encoder_best_epoch = 0;
  double encoder_best_loss = 0.0;

  friend bool operator==(const StageStats&, const StageStats&) = default;
};

struct SeedRun {
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double val_accuracy = 0.0;
  StageStats stats;
  // Audits against the clean graph, present when it is known.
  std::optional<RemovalCounts> removal;
  std::optional<RemovalCounts> feature_pruning_removal;
  std::vector<std::string> notes;

  friend bool operator==(const SeedRun&, const SeedRun&) = default;
};

struct RunResult {
  std::string label;
  nlohmann::json config = nlohmann::json::object();
  std::vector<SeedRun> runs;
  double wall_seconds = 0.0;

  std::vector<double> accuracies() const;
  double mean_accuracy() const;
  double std_accuracy() const;  // population std
};

nlohmann::json to_json(const RunResult& result, bool include_timing = false);
RunResult run_result_from_json(const nlohmann::json& doc);

// Keys are emitted in sorted order; doubles round-trip exactly. Wall time
// is left out unless include_timing is set, so repeated runs produce
// byte-identical files.
void write_report(const RunResult& result, const std::filesystem::path& path, bool include_timing = false);
RunResult read_report(const std::filesystem::path& path);

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace stable
