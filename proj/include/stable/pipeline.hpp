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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "stable/classifier.hpp"
#include "stable/encoder.hpp"
#include "stable/io.hpp"
#include "stable/preprocess.hpp"
#include "stable/report.hpp"

namespace stable {

enum class Augmentation { kRecovery, kRandom, kNone };

Augmentation parse_augmentation(const std::string& name);
std::string to_string(Augmentation augmentation);

enum class Variant {
  kStable,
  kNoPreprocess,       // STABLE-P
  kNoAugmentation,     // STABLE-A
  kRandomAugmentation, // STABLE-Ran
  kNoInsertion,        // STABLE-K
  kVanillaClassifier,  // STABLE-GCN
  kGcnBaseline,        // plain GCN on the input graph with raw features
};

Variant parse_variant(const std::string& name);
std::string to_string(Variant variant);
std::vector<Variant> all_variants();

struct PipelineConfig {
  SimilarityMetric metric = SimilarityMetric::kJaccard;
  double t1 = 0.03;
  bool preprocess = true;
  Augmentation augmentation = Augmentation::kRecovery;
  double recover_p = 0.2;
  std::size_t views = 2;
  EncoderConfig encoder;
  double t2 = 0.2;
  std::size_t k = 5;
  ClassifierConfig classifier;

  // Unknown keys and malformed values raise InputError.
  static PipelineConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

// The configuration a variant actually runs with: STABLE-P disables
// pre-processing and switches to random views at ratio recover_p; STABLE-A
// uses copies of the pre-processed graph; STABLE-Ran uses random views;
// STABLE-K forces k = 0; STABLE-GCN uses the vanilla classifier.
PipelineConfig apply_variant(PipelineConfig config, Variant variant);

// Intermediate products of one pipeline run, for callers that need more
// than the summary (CLI stage commands, tests).
struct PipelineArtifacts {
  PreprocessResult preprocessed;
  ViewBundle views;
  EncoderTrainResult encoder;
  RefinedGraph refined;
  ClassifierTrainResult classifier;
};

// The input graph filtered by feature similarity, or unchanged when
// pre-processing is off.
PreprocessResult preprocess_input(const GraphBundle& bundle, const PipelineConfig& config);

// The encoder's views for a pipeline seed.
ViewBundle build_views(const PreprocessResult& preprocessed, const PipelineConfig& config, std::uint64_t seed);

// Pre-process, views, encoder, refinement, classifier. `clean` enables the
// removal audit. Pure in (bundle, config, seed, clean).
SeedRun run_pipeline(const GraphBundle& bundle, const PipelineConfig& config, std::uint64_t seed,
                     const SparseGraph* clean = nullptr, PipelineArtifacts* artifacts = nullptr);

SeedRun run_variant(const GraphBundle& bundle, const PipelineConfig& config, Variant variant, std::uint64_t seed,
                    const SparseGraph* clean = nullptr);

// Seeds are run in the given order.
RunResult run_experiment(const GraphBundle& bundle, const PipelineConfig& config, Variant variant,
                         std::span<const std::uint64_t> seeds, const SparseGraph* clean = nullptr);

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count);

enum class SweepParam { kK, kAlpha, kT1, kT2 };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam param);
PipelineConfig with_param(PipelineConfig config, SweepParam param, double value);

struct SweepRow {
  double value = 0.0;
  RunResult result;
};

struct SweepTable {
  SweepParam param = SweepParam::kK;
  std::vector<SweepRow> rows;

  nlohmann::json to_json() const;
  // value,mean_accuracy,std_accuracy,runs
  std::string to_csv() const;
};

SweepTable sweep(const GraphBundle& bundle, const PipelineConfig& config, SweepParam param,
                 std::span<const double> values, std::span<const std::uint64_t> seeds,
                 const SparseGraph* clean = nullptr);

}  // namespace stable
