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

#include "stable/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "stable/errors.hpp"
#include "stable/rng.hpp"

namespace stable {

using nlohmann::json;

namespace {

enum SeedStream : std::uint64_t { kViewStream = 1, kEncoderStream = 2, kClassifierStream = 3 };

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericError& e) {
    throw NumericError(std::string("stage ") + name + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(std::string("stage ") + name + ": " + e.what());
  }
}

void reject_unknown(const json& doc, const std::set<std::string>& known, const std::string& where) {
  if (!doc.is_object()) throw InputError("config: " + where + " must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw InputError("config: unknown key '" + where + key + "'");
  }
}

template <typename T>
void read(const json& doc, const char* key, T& dst, const std::string& where) {
  if (!doc.contains(key)) return;
  try {
    dst = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError("config: bad value for '" + where + key + "'");
  }
}

void read_count(const json& doc, const char* key, std::size_t& dst, const std::string& where) {
  if (!doc.contains(key)) return;
  const auto& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError("config: '" + where + key + "' must be a non-negative integer");
  }
  dst = v.get<std::size_t>();
}

void validate(const PipelineConfig& c) {
  auto fail = [](const std::string& msg) { throw InputError("config: " + msg); };
  if (!std::isfinite(c.t1)) fail("t1 must be finite");
  if (!std::isfinite(c.t2)) fail("t2 must be finite");
  if (!(c.recover_p >= 0.0 && c.recover_p <= 1.0)) fail("recover_p must lie in [0, 1]");
  if (c.views < 1) fail("views must be >= 1");
  if (c.encoder.hidden < 1) fail("encoder.hidden must be >= 1");
  if (!(c.encoder.learning_rate > 0.0)) fail("encoder.learning_rate must be positive");
  if (c.classifier.hidden < 1) fail("classifier.hidden must be >= 1");
  if (!(c.classifier.learning_rate > 0.0)) fail("classifier.learning_rate must be positive");
  if (!(c.classifier.weight_decay >= 0.0)) fail("classifier.weight_decay must be >= 0");
  if (!std::isfinite(c.classifier.alpha) || !std::isfinite(c.classifier.beta)) fail("alpha and beta must be finite");
}

SeedRun run_gcn_baseline(const GraphBundle& bundle, const PipelineConfig& config, std::uint64_t seed) {
  ClassifierConfig cls = config.classifier;
  cls.mode = ClassifierMode::kVanilla;
  auto trained = stage("classifier", [&] {
    return train_classifier(bundle.graph, bundle.features, bundle.labels, bundle.split, cls,
                            derive_seed(seed, kClassifierStream));
  });
  SeedRun run;
  run.seed = seed;
  run.test_accuracy = trained.test_accuracy;
  run.val_accuracy = trained.val_accuracy;
  run.stats.input_edges = bundle.graph.num_edges();
  run.stats.preprocessed_edges = run.stats.input_edges;
  run.stats.retained_edges = run.stats.input_edges;
  run.stats.optimal_arcs = bundle.graph.num_arcs();
  if (!trained.warning.empty()) run.notes.push_back(trained.warning);
  return run;
}

}  // namespace

Augmentation parse_augmentation(const std::string& name) {
  if (name == "recovery") return Augmentation::kRecovery;
  if (name == "random") return Augmentation::kRandom;
  if (name == "none") return Augmentation::kNone;
  throw InputError("unknown augmentation '" + name + "' (expected recovery, random or none)");
}

std::string to_string(Augmentation augmentation) {
  switch (augmentation) {
    case Augmentation::kRecovery: return "recovery";
    case Augmentation::kRandom: return "random";
    case Augmentation::kNone: return "none";
  }
  return "recovery";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : all_variants()) {
    if (to_string(v) == name) return v;
  }
  throw InputError("unknown variant '" + name +
                   "' (expected STABLE, STABLE-P, STABLE-A, STABLE-Ran, STABLE-K, STABLE-GCN or GCN)");
}

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::kStable: return "STABLE";
    case Variant::kNoPreprocess: return "STABLE-P";
    case Variant::kNoAugmentation: return "STABLE-A";
    case Variant::kRandomAugmentation: return "STABLE-Ran";
    case Variant::kNoInsertion: return "STABLE-K";
    case Variant::kVanillaClassifier: return "STABLE-GCN";
    case Variant::kGcnBaseline: return "GCN";
  }
  return "STABLE";
}

std::vector<Variant> all_variants() {
  return {Variant::kStable,      Variant::kNoPreprocess,      Variant::kNoAugmentation, Variant::kRandomAugmentation,
          Variant::kNoInsertion, Variant::kVanillaClassifier, Variant::kGcnBaseline};
}

PipelineConfig PipelineConfig::from_json(const json& doc) {
  PipelineConfig c;
  reject_unknown(doc,
                 {"metric", "t1", "preprocess", "augmentation", "recover_p", "views", "encoder", "t2", "k",
                  "classifier"},
                 "");
  std::string metric = to_string(c.metric), aug = to_string(c.augmentation);
  read(doc, "metric", metric, "");
  read(doc, "t1", c.t1, "");
  read(doc, "preprocess", c.preprocess, "");
  read(doc, "augmentation", aug, "");
  read(doc, "recover_p", c.recover_p, "");
  read_count(doc, "views", c.views, "");
  read(doc, "t2", c.t2, "");
  read_count(doc, "k", c.k, "");
  c.metric = parse_metric(metric);
  c.augmentation = parse_augmentation(aug);
  if (doc.contains("encoder")) {
    const auto& e = doc.at("encoder");
    const std::string w = "encoder.";
    reject_unknown(e, {"hidden", "learning_rate", "max_epochs", "patience", "activation", "reshuffle_each_epoch"}, w);
    std::string act = to_string(c.encoder.activation);
    read_count(e, "hidden", c.encoder.hidden, w);
    read(e, "learning_rate", c.encoder.learning_rate, w);
    read_count(e, "max_epochs", c.encoder.max_epochs, w);
    read_count(e, "patience", c.encoder.patience, w);
    read(e, "activation", act, w);
    read(e, "reshuffle_each_epoch", c.encoder.reshuffle_each_epoch, w);
    c.encoder.activation = parse_activation(act);
  }
  if (doc.contains("classifier")) {
    const auto& e = doc.at("classifier");
    const std::string w = "classifier.";
    reject_unknown(e, {"hidden", "learning_rate", "weight_decay", "epochs", "alpha", "beta", "mode"}, w);
    std::string mode = to_string(c.classifier.mode);
    read_count(e, "hidden", c.classifier.hidden, w);
    read(e, "learning_rate", c.classifier.learning_rate, w);
    read(e, "weight_decay", c.classifier.weight_decay, w);
    read_count(e, "epochs", c.classifier.epochs, w);
    read(e, "alpha", c.classifier.alpha, w);
    read(e, "beta", c.classifier.beta, w);
    read(e, "mode", mode, w);
    c.classifier.mode = parse_mode(mode);
  }
  validate(c);
  return c;
}

json PipelineConfig::to_json() const {
  return {{"metric", to_string(metric)},
          {"t1", t1},
          {"preprocess", preprocess},
          {"augmentation", to_string(augmentation)},
          {"recover_p", recover_p},
          {"views", views},
          {"encoder",
           {{"hidden", encoder.hidden},
            {"learning_rate", encoder.learning_rate},
            {"max_epochs", encoder.max_epochs},
            {"patience", encoder.patience},
            {"activation", to_string(encoder.activation)},
            {"reshuffle_each_epoch", encoder.reshuffle_each_epoch}}},
          {"t2", t2},
          {"k", k},
          {"classifier",
           {{"hidden", classifier.hidden},
            {"learning_rate", classifier.learning_rate},
            {"weight_decay", classifier.weight_decay},
            {"epochs", classifier.epochs},
            {"alpha", classifier.alpha},
            {"beta", classifier.beta},
            {"mode", to_string(classifier.mode)}}}};
}

PipelineConfig apply_variant(PipelineConfig config, Variant variant) {
  switch (variant) {
    case Variant::kStable:
    case Variant::kGcnBaseline:
      break;
    case Variant::kNoPreprocess:
      config.preprocess = false;
      config.augmentation = Augmentation::kRandom;
      break;
    case Variant::kNoAugmentation:
      config.augmentation = Augmentation::kNone;
      break;
    case Variant::kRandomAugmentation:
      config.augmentation = Augmentation::kRandom;
      break;
    case Variant::kNoInsertion:
      config.k = 0;
      break;
    case Variant::kVanillaClassifier:
      config.classifier.mode = ClassifierMode::kVanilla;
      break;
  }
  return config;
}

PreprocessResult preprocess_input(const GraphBundle& bundle, const PipelineConfig& config) {
  if (config.preprocess) return rough_preprocess(bundle.graph, bundle.features, config.metric, config.t1);
  return PreprocessResult{bundle.graph, EdgeSet(), SimilarityScores{}};
}

ViewBundle build_views(const PreprocessResult& preprocessed, const PipelineConfig& config, std::uint64_t seed) {
  const std::uint64_t view_seed = derive_seed(seed, kViewStream);
  switch (config.augmentation) {
    case Augmentation::kRecovery:
      return make_views(preprocessed.graph, preprocessed.removed, config.recover_p, config.views, view_seed);
    case Augmentation::kRandom:
      return random_perturb_views(preprocessed.graph, config.recover_p, config.views, view_seed);
    case Augmentation::kNone:
      break;
  }
  return identical_views(preprocessed.graph, config.views);
}

SeedRun run_pipeline(const GraphBundle& bundle, const PipelineConfig& config, std::uint64_t seed,
                     const SparseGraph* clean, PipelineArtifacts* artifacts) {
  validate(config);
  const SparseGraph& input = bundle.graph;
  if (bundle.features.rows() != input.num_nodes()) throw InputError("pipeline: feature rows do not match graph");
  SeedRun run;
  run.seed = seed;

  PipelineArtifacts local;
  PipelineArtifacts& a = artifacts ? *artifacts : local;

  a.preprocessed = stage("preprocess", [&] { return preprocess_input(bundle, config); });
  a.views = stage("augment", [&] { return build_views(a.preprocessed, config, seed); });
  if (!config.preprocess && config.augmentation == Augmentation::kRandom) {
    run.notes.push_back("pre-processing disabled; views use random edge perturbation at ratio recover_p");
  }
  if (config.augmentation == Augmentation::kRecovery && a.preprocessed.removed.empty()) {
    run.notes.push_back("no edges removed by pre-processing; recovery views equal the pre-processed graph");
  }

  a.encoder = stage("encoder", [&] {
    return train_encoder(a.views, bundle.features, config.encoder, derive_seed(seed, kEncoderStream));
  });
  a.refined = stage("refine", [&] { return refine_graph(a.preprocessed.graph, a.encoder.embeddings, config.t2, config.k); });
  a.classifier = stage("classifier", [&] {
    return train_classifier(a.refined.optimal, a.encoder.embeddings, bundle.labels, bundle.split, config.classifier,
                            derive_seed(seed, kClassifierStream));
  });
  if (!a.classifier.warning.empty()) run.notes.push_back(a.classifier.warning);

  run.test_accuracy = a.classifier.test_accuracy;
  run.val_accuracy = a.classifier.val_accuracy;

  StageStats& s = run.stats;
  s.input_edges = input.num_edges();
  s.preprocess_removed = a.preprocessed.removed.size();
  s.preprocessed_edges = a.preprocessed.graph.num_edges();
  for (const auto& v : a.views.views) {
    s.view_edges.push_back(v.num_edges());
    if (config.augmentation == Augmentation::kRecovery) s.recovered_total += v.num_edges() - s.preprocessed_edges;
  }
  s.retained_edges = a.refined.retained.num_edges();
  s.pruned = s.preprocessed_edges - s.retained_edges;
  s.inserted_arcs = a.refined.topk.num_arcs();
  s.optimal_arcs = a.refined.optimal.num_arcs();
  s.encoder_epochs = a.encoder.losses.size();
  s.encoder_best_epoch = a.encoder.best_epoch;
  s.encoder_best_loss = a.encoder.losses.empty() ? 0.0 : a.encoder.losses[a.encoder.best_epoch];

  if (clean != nullptr) {
    stage("audit", [&] {
      const EdgeSet removed = set_difference(input.edge_set(), a.refined.retained.edge_set());
      run.removal = removal_report(*clean, input, removed, bundle.labels);
      const EdgeSet baseline = lowest_scoring_edges(input, bundle.features, config.metric, removed.size());
      run.feature_pruning_removal = removal_report(*clean, input, baseline, bundle.labels);
      return 0;
    });
  }
  return run;
}

SeedRun run_variant(const GraphBundle& bundle, const PipelineConfig& config, Variant variant, std::uint64_t seed,
                    const SparseGraph* clean) {
  if (variant == Variant::kGcnBaseline) return run_gcn_baseline(bundle, config, seed);
  return run_pipeline(bundle, apply_variant(config, variant), seed, clean);
}

RunResult run_experiment(const GraphBundle& bundle, const PipelineConfig& config, Variant variant,
                         std::span<const std::uint64_t> seeds, const SparseGraph* clean) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.label = to_string(variant);
  result.config = apply_variant(config, variant).to_json();
  for (auto seed : seeds) result.runs.push_back(run_variant(bundle, config, variant, seed, clean));
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "k") return SweepParam::kK;
  if (name == "alpha") return SweepParam::kAlpha;
  if (name == "t1") return SweepParam::kT1;
  if (name == "t2") return SweepParam::kT2;
  throw InputError("unknown sweep parameter '" + name + "' (expected k, alpha, t1 or t2)");
}

std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::kK: return "k";
    case SweepParam::kAlpha: return "alpha";
    case SweepParam::kT1: return "t1";
    case SweepParam::kT2: return "t2";
  }
  return "k";
}

PipelineConfig with_param(PipelineConfig config, SweepParam param, double value) {
  switch (param) {
    case SweepParam::kK:
      if (!(value >= 0.0) || value != std::floor(value)) throw InputError("sweep: k values must be non-negative integers");
      config.k = static_cast<std::size_t>(value);
      break;
    case SweepParam::kAlpha: config.classifier.alpha = value; break;
    case SweepParam::kT1: config.t1 = value; break;
    case SweepParam::kT2: config.t2 = value; break;
  }
  return config;
}

json SweepTable::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    rows_json.push_back({{"value", row.value},
                         {"mean_accuracy", row.result.mean_accuracy()},
                         {"std_accuracy", row.result.std_accuracy()},
                         {"result", stable::to_json(row.result)}});
  }
  return {{"param", to_string(param)}, {"rows", std::move(rows_json)}};
}

std::string SweepTable::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(param) << ",mean_accuracy,std_accuracy,runs\n";
  for (const auto& row : rows) {
    out << row.value << ',' << row.result.mean_accuracy() << ',' << row.result.std_accuracy() << ','
        << row.result.runs.size() << '\n';
  }
  return out.str();
}

SweepTable sweep(const GraphBundle& bundle, const PipelineConfig& config, SweepParam param,
                 std::span<const double> values, std::span<const std::uint64_t> seeds, const SparseGraph* clean) {
  if (values.empty()) throw InputError("sweep: no values given");
  if (seeds.empty()) throw InputError("sweep: no seeds given");
  SweepTable table;
  table.param = param;
  for (double v : values) {
    const PipelineConfig point = with_param(config, param, v);
    table.rows.push_back({v, run_experiment(bundle, point, Variant::kStable, seeds, clean)});
  }
  return table;
}

}  // namespace stable
