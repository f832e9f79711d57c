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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stable/attack.hpp"
#include "stable/errors.hpp"
#include "stable/io.hpp"
#include "stable/pipeline.hpp"
#include "stable/refine.hpp"
#include "stable/report.hpp"
#include "stable/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stable;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::string out = "out";
  bool timing = false;
};

struct DataOptions {
  std::string data;
  std::string edges;
};

struct Inputs {
  GraphBundle bundle;
  std::optional<SparseGraph> clean;
};

struct Overrides {
  std::optional<std::string> metric;
  std::optional<double> t1, p, t2, alpha, beta;
  std::optional<std::size_t> views, k;
  std::optional<std::string> augmentation;
  std::optional<std::size_t> enc_hidden, enc_epochs, enc_patience;
  std::optional<double> enc_lr;
  std::optional<std::string> activation;
  std::optional<std::size_t> cls_hidden, cls_epochs;
  std::optional<double> cls_lr, cls_wd;
  std::optional<std::string> mode;
};

struct Loaded {
  PipelineConfig config;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::optional<std::string> variant;
};

Loaded load_config(const GlobalOptions& g) {
  Loaded out;
  if (!g.config_path.empty()) {
    json doc = read_json(g.config_path);
    if (!doc.is_object()) throw InputError(g.config_path + ": config must be a JSON object");
    try {
      if (doc.contains("seed")) out.seed = doc.at("seed").get<std::uint64_t>();
      if (doc.contains("seeds")) out.seeds = doc.at("seeds").get<std::size_t>();
      if (doc.contains("variant")) out.variant = doc.at("variant").get<std::string>();
    } catch (const json::exception&) {
      throw InputError(g.config_path + ": seed, seeds and variant must be integers and a string");
    }
    doc.erase("seed");
    doc.erase("seeds");
    doc.erase("variant");
    out.config = PipelineConfig::from_json(doc);
  }
  if (g.seed) out.seed = *g.seed;
  if (g.seeds) out.seeds = *g.seeds;
  if (out.seeds < 1) throw InputError("--seeds must be >= 1");
  return out;
}

PipelineConfig apply_overrides(PipelineConfig c, const Overrides& o) {
  if (o.metric) c.metric = parse_metric(*o.metric);
  if (o.t1) c.t1 = *o.t1;
  if (o.p) c.recover_p = *o.p;
  if (o.views) c.views = *o.views;
  if (o.augmentation) c.augmentation = parse_augmentation(*o.augmentation);
  if (o.t2) c.t2 = *o.t2;
  if (o.k) c.k = *o.k;
  if (o.alpha) c.classifier.alpha = *o.alpha;
  if (o.beta) c.classifier.beta = *o.beta;
  if (o.enc_hidden) c.encoder.hidden = *o.enc_hidden;
  if (o.enc_epochs) c.encoder.max_epochs = *o.enc_epochs;
  if (o.enc_patience) c.encoder.patience = *o.enc_patience;
  if (o.enc_lr) c.encoder.learning_rate = *o.enc_lr;
  if (o.activation) c.encoder.activation = parse_activation(*o.activation);
  if (o.cls_hidden) c.classifier.hidden = *o.cls_hidden;
  if (o.cls_epochs) c.classifier.epochs = *o.cls_epochs;
  if (o.cls_lr) c.classifier.learning_rate = *o.cls_lr;
  if (o.cls_wd) c.classifier.weight_decay = *o.cls_wd;
  if (o.mode) c.classifier.mode = parse_mode(*o.mode);
  return PipelineConfig::from_json(c.to_json());
}

Inputs load_inputs(const DataOptions& d) {
  if (d.data.empty()) throw InputError("--data DIR is required");
  Inputs in;
  in.bundle = load_graph_bundle(d.data);
  if (!d.edges.empty()) {
    in.clean = in.bundle.graph;
    in.bundle.graph = SparseGraph::undirected(in.bundle.num_nodes(), read_edge_list(d.edges, in.bundle.num_nodes()));
  }
  return in;
}

fs::path out_dir(const GlobalOptions& g) {
  fs::create_directories(g.out);
  return fs::path(g.out);
}

void add_stage_options(CLI::App* cmd, Overrides& o, bool preprocess, bool views, bool encoder, bool refine,
                       bool classifier) {
  if (preprocess) {
    cmd->add_option("--metric", o.metric, "jaccard or cosine");
    cmd->add_option("--t1", o.t1, "pre-processing threshold");
  }
  if (views) {
    cmd->add_option("--p,--recover-p", o.p, "recovery probability");
    cmd->add_option("--views", o.views, "number of views");
    cmd->add_option("--aug", o.augmentation, "recovery, random or none");
  }
  if (encoder) {
    cmd->add_option("--hidden", o.enc_hidden, "encoder width");
    cmd->add_option("--lr", o.enc_lr, "encoder learning rate");
    cmd->add_option("--epochs", o.enc_epochs, "encoder max epochs");
    cmd->add_option("--patience", o.enc_patience, "early-stop patience");
    cmd->add_option("--activation", o.activation, "relu or identity");
  }
  if (refine) {
    cmd->add_option("--t2", o.t2, "pruning threshold");
    cmd->add_option("--k", o.k, "top-k insertions per node");
  }
  if (classifier) {
    cmd->add_option("--alpha", o.alpha, "degree exponent");
    cmd->add_option("--beta", o.beta, "self-loop weight");
    cmd->add_option("--cls-hidden", o.cls_hidden, "classifier width");
    cmd->add_option("--cls-lr", o.cls_lr, "classifier learning rate");
    cmd->add_option("--cls-wd", o.cls_wd, "classifier weight decay");
    cmd->add_option("--cls-epochs", o.cls_epochs, "classifier epochs");
    cmd->add_option("--mode", o.mode, "advanced or vanilla");
  }
}

void add_data_options(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data,--in", d.data, "bundle directory")->required();
  cmd->add_option("--edges", d.edges, "perturbed edge list; the bundle graph is then treated as clean");
}

json removal_json(const RemovalCounts& r) {
  return {{"total", r.total},
          {"adversarial", r.adversarial},
          {"normal", r.normal},
          {"normal_heterophilic", r.normal_heterophilic},
          {"accuracy", r.accuracy}};
}

void print_summary(const RunResult& r) {
  std::printf("%-12s n=%zu mean=%.4f std=%.4f\n", r.label.c_str(), r.runs.size(), r.mean_accuracy(), r.std_accuracy());
}

int cmd_synth(const GlobalOptions& g, const SbmSpec& base) {
  SbmSpec spec = base;
  spec.seed = load_config(g).seed;
  GraphBundle bundle = generate_sbm(spec);
  const fs::path dir = out_dir(g);
  save_graph_bundle(bundle, dir);
  std::printf("wrote %zu nodes, %zu edges to %s\n", bundle.num_nodes(), bundle.graph.num_edges(), dir.c_str());
  return 0;
}

int cmd_attack(const GlobalOptions& g, const DataOptions& d, const std::string& method, double rate,
               double add_probability) {
  const Loaded cfg = load_config(g);
  Inputs in = load_inputs(d);
  const AttackBudget budget{rate, cfg.seed};
  AttackResult result;
  if (method == "dice") {
    result = dice_attack(in.bundle.graph, in.bundle.labels, budget, add_probability);
  } else if (method == "random") {
    result = random_attack(in.bundle.graph, budget, add_probability);
  } else {
    throw InputError("unknown attack method '" + method + "' (expected dice or random)");
  }
  const fs::path dir = out_dir(g);
  write_edge_list(dir / "edges.tsv", result.graph.edge_set());
  write_edge_list(dir / "added.tsv", result.record.added);
  write_edge_list(dir / "removed.tsv", result.record.removed);
  auto pairs = [](const EdgeSet& edges) {
    json out = json::array();
    for (auto e : edges) out.push_back({e.u, e.v});
    return out;
  };
  write_json({{"added", pairs(result.record.added)}, {"removed", pairs(result.record.removed)}},
             dir / "perturbation.json");
  write_json({{"method", method},
              {"rate", rate},
              {"seed", cfg.seed},
              {"clean_edges", in.bundle.graph.num_edges()},
              {"budget", budget.changes(in.bundle.graph.num_edges())},
              {"added", result.record.added.size()},
              {"removed", result.record.removed.size()},
              {"complete", result.complete},
              {"warning", result.warning}},
             dir / "attack.json");
  if (!result.warning.empty()) std::fprintf(stderr, "warning: %s\n", result.warning.c_str());
  std::printf("added %zu, removed %zu\n", result.record.added.size(), result.record.removed.size());
  return 0;
}

int cmd_preprocess(const GlobalOptions& g, const DataOptions& d, const Overrides& o) {
  const Loaded cfg = load_config(g);
  const PipelineConfig config = apply_overrides(cfg.config, o);
  Inputs in = load_inputs(d);
  PreprocessResult pre = preprocess_input(in.bundle, config);
  ViewBundle views = build_views(pre, config, cfg.seed);
  const fs::path dir = out_dir(g);
  write_edge_list(dir / "preprocessed.tsv", pre.graph.edge_set());
  write_edge_list(dir / "removed.tsv", pre.removed);
  std::ofstream scores(dir / "scores.tsv");
  scores.precision(17);
  for (std::size_t i = 0; i < pre.scores.edges.size(); ++i) {
    scores << pre.scores.edges[i].u << '\t' << pre.scores.edges[i].v << '\t' << pre.scores.scores[i] << '\n';
  }
  json view_edges = json::array();
  for (std::size_t j = 0; j < views.views.size(); ++j) {
    write_edge_list(dir / ("view_" + std::to_string(j) + ".tsv"), views.views[j].edge_set());
    view_edges.push_back(views.views[j].num_edges());
  }
  json summary = {{"input_edges", in.bundle.graph.num_edges()},
                  {"removed", pre.removed.size()},
                  {"kept", pre.graph.num_edges()},
                  {"augmentation", to_string(config.augmentation)},
                  {"seed", cfg.seed},
                  {"view_edges", view_edges}};
  if (in.clean) summary["removal"] = removal_json(removal_report(*in.clean, in.bundle.graph, pre.removed, in.bundle.labels));
  write_json(summary, dir / "preprocess.json");
  std::printf("removed %zu of %zu edges\n", pre.removed.size(), in.bundle.graph.num_edges());
  return 0;
}

int cmd_embed(const GlobalOptions& g, const DataOptions& d, const Overrides& o) {
  const Loaded cfg = load_config(g);
  const PipelineConfig config = apply_overrides(cfg.config, o);
  Inputs in = load_inputs(d);
  PipelineArtifacts art;
  SeedRun run = run_pipeline(in.bundle, config, cfg.seed, nullptr, &art);
  const fs::path dir = out_dir(g);
  write_features(dir / "embeddings.txt", art.encoder.embeddings);
  write_json({{"seed", cfg.seed},
              {"epochs", run.stats.encoder_epochs},
              {"best_epoch", run.stats.encoder_best_epoch},
              {"best_loss", run.stats.encoder_best_loss},
              {"losses", art.encoder.losses}},
             dir / "embed.json");
  std::printf("embedded %zu nodes into %zu dims (best loss %.6f at epoch %zu)\n", art.encoder.embeddings.rows(),
              art.encoder.embeddings.cols(), run.stats.encoder_best_loss, run.stats.encoder_best_epoch);
  return 0;
}

int cmd_refine(const GlobalOptions& g, const DataOptions& d, const Overrides& o, const std::string& embeddings) {
  const PipelineConfig config = apply_overrides(load_config(g).config, o);
  Inputs in = load_inputs(d);
  DenseMatrix h = read_features(embeddings);
  if (h.rows() != in.bundle.num_nodes()) throw InputError(embeddings + ": row count does not match the graph");
  PreprocessResult pre = preprocess_input(in.bundle, config);
  RefinedGraph refined = refine_graph(pre.graph, h, config.t2, config.k);
  const fs::path dir = out_dir(g);
  write_arc_list(dir / "optimal.tsv", refined.optimal);
  write_edge_list(dir / "retained.tsv", refined.retained.edge_set());
  json summary = {{"preprocessed_edges", pre.graph.num_edges()},
                  {"retained_edges", refined.retained.num_edges()},
                  {"inserted_arcs", refined.topk.num_arcs()},
                  {"optimal_arcs", refined.optimal.num_arcs()}};
  if (in.clean) {
    const EdgeSet removed = set_difference(in.bundle.graph.edge_set(), refined.retained.edge_set());
    summary["removal"] = removal_json(removal_report(*in.clean, in.bundle.graph, removed, in.bundle.labels));
  }
  write_json(summary, dir / "refine.json");
  std::printf("retained %zu edges, %zu directed edges in the final graph\n", refined.retained.num_edges(),
              refined.optimal.num_arcs());
  return 0;
}

int cmd_train(const GlobalOptions& g, const DataOptions& d, const Overrides& o, const std::string& graph_path,
              const std::string& input_path) {
  const Loaded cfg = load_config(g);
  const PipelineConfig config = apply_overrides(cfg.config, o);
  Inputs in = load_inputs(d);
  const std::size_t n = in.bundle.num_nodes();
  SparseGraph graph = graph_path.empty() ? in.bundle.graph : SparseGraph::directed(n, read_arc_list(graph_path, n));
  DenseMatrix input = input_path.empty() ? in.bundle.features : read_features(input_path);
  if (input.rows() != n) throw InputError(input_path + ": row count does not match the graph");
  RunResult result;
  result.label = "train";
  result.config = config.to_json();
  for (auto seed : seed_range(cfg.seed, cfg.seeds)) {
    ClassifierTrainResult t = train_classifier(graph, input, in.bundle.labels, in.bundle.split, config.classifier,
                                               derive_seed(seed, 3));
    SeedRun run;
    run.seed = seed;
    run.test_accuracy = t.test_accuracy;
    run.val_accuracy = t.val_accuracy;
    run.stats.optimal_arcs = graph.num_arcs();
    if (!t.warning.empty()) run.notes.push_back(t.warning);
    result.runs.push_back(std::move(run));
  }
  write_report(result, out_dir(g) / "report.json", g.timing);
  print_summary(result);
  return 0;
}

int cmd_pipeline(const GlobalOptions& g, const DataOptions& d, const Overrides& o, std::optional<std::string> variant) {
  const Loaded cfg = load_config(g);
  const PipelineConfig config = apply_overrides(cfg.config, o);
  Inputs in = load_inputs(d);
  const Variant v = parse_variant(variant ? *variant : cfg.variant.value_or("STABLE"));
  const auto seeds = seed_range(cfg.seed, cfg.seeds);
  RunResult result = run_experiment(in.bundle, config, v, seeds, in.clean ? &*in.clean : nullptr);
  write_report(result, out_dir(g) / "report.json", g.timing);
  print_summary(result);
  return 0;
}

int cmd_ablate(const GlobalOptions& g, const DataOptions& d, const Overrides& o, const std::vector<std::string>& names) {
  const Loaded cfg = load_config(g);
  const PipelineConfig config = apply_overrides(cfg.config, o);
  Inputs in = load_inputs(d);
  std::vector<Variant> variants;
  if (names.empty()) {
    variants = all_variants();
  } else {
    for (const auto& name : names) variants.push_back(parse_variant(name));
  }
  const auto seeds = seed_range(cfg.seed, cfg.seeds);
  const fs::path dir = out_dir(g);
  json table = json::array();
  for (Variant v : variants) {
    RunResult result = run_experiment(in.bundle, config, v, seeds, in.clean ? &*in.clean : nullptr);
    print_summary(result);
    table.push_back(to_json(result, g.timing));
  }
  write_json({{"variants", std::move(table)}}, dir / "ablation.json");
  return 0;
}

int cmd_sweep(const GlobalOptions& g, const DataOptions& d, const Overrides& o, const std::string& param,
              const std::vector<double>& values) {
  const Loaded cfg = load_config(g);
  const PipelineConfig config = apply_overrides(cfg.config, o);
  Inputs in = load_inputs(d);
  const auto seeds = seed_range(cfg.seed, cfg.seeds);
  SweepTable table = sweep(in.bundle, config, parse_sweep_param(param), values, seeds, in.clean ? &*in.clean : nullptr);
  const fs::path dir = out_dir(g);
  write_json(table.to_json(), dir / "sweep.json");
  std::ofstream(dir / "sweep.csv") << table.to_csv();
  std::fputs(table.to_csv().c_str(), stdout);
  return 0;
}

int cmd_report(const std::vector<std::string>& paths) {
  for (const auto& path : paths) {
    RunResult r = read_report(path);
    std::printf("%s: ", path.c_str());
    print_summary(r);
    for (const auto& run : r.runs) {
      std::printf("  seed %llu test %.4f val %.4f edges %zu->%zu->%zu arcs %zu",
                  static_cast<unsigned long long>(run.seed), run.test_accuracy, run.val_accuracy,
                  run.stats.input_edges, run.stats.preprocessed_edges, run.stats.retained_edges,
                  run.stats.optimal_arcs);
      if (run.removal) {
        std::printf(" removed %zu (adv %zu, acc %.3f)", run.removal->total, run.removal->adversarial,
                    run.removal->accuracy);
      }
      std::printf("\n");
      for (const auto& note : run.notes) std::printf("    note: %s\n", note.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust node classification by graph refinement and contrastive embeddings"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--seed", g.seed, "base seed (default 0)");
  app.add_option("--seeds", g.seeds, "number of consecutive seeds (default 1)");
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_flag("--timing", g.timing, "include wall time in reports");

  DataOptions data;
  Overrides over;

  SbmSpec spec;
  auto* synth = app.add_subcommand("synth", "generate a stochastic block model bundle");
  synth->add_option("--nodes", spec.num_nodes)->capture_default_str();
  synth->add_option("--classes", spec.num_classes)->capture_default_str();
  synth->add_option("--p-in", spec.p_in)->capture_default_str();
  synth->add_option("--p-out", spec.p_out)->capture_default_str();
  synth->add_option("--dim", spec.feature_dim)->capture_default_str();
  synth->add_option("--on-bits", spec.on_bits)->capture_default_str();
  synth->add_option("--noise", spec.flip_noise)->capture_default_str();

  std::string method = "dice";
  double rate = 0.2, add_probability = 0.5;
  auto* attack = app.add_subcommand("attack", "perturb the bundle graph");
  add_data_options(attack, data);
  attack->add_option("--method", method, "dice or random")->capture_default_str();
  attack->add_option("--rate,--ptb-rate", rate, "fraction of edges to flip")->capture_default_str();
  attack->add_option("--add-prob", add_probability, "probability a move adds an edge")->capture_default_str();

  auto* preprocess = app.add_subcommand("preprocess", "drop edges with low feature similarity");
  add_data_options(preprocess, data);
  add_stage_options(preprocess, over, true, true, false, false, false);

  auto* embed = app.add_subcommand("embed", "train the contrastive encoder and write embeddings");
  add_data_options(embed, data);
  add_stage_options(embed, over, true, true, true, false, false);

  std::string embeddings;
  auto* refine = app.add_subcommand("refine", "prune and insert edges from embeddings");
  add_data_options(refine, data);
  refine->add_option("--embeddings", embeddings, "embedding matrix file")->required();
  add_stage_options(refine, over, true, false, false, true, false);

  std::string graph_path, input_path;
  auto* train = app.add_subcommand("train", "train the classifier on a given graph and input");
  add_data_options(train, data);
  train->add_option("--graph", graph_path, "directed edge list (default: bundle graph)");
  train->add_option("--input", input_path, "node input matrix (default: bundle features)");
  add_stage_options(train, over, false, false, false, false, true);

  std::optional<std::string> variant;
  auto* pipeline = app.add_subcommand("pipeline", "run the full method over seeds");
  add_data_options(pipeline, data);
  pipeline->add_option("--variant", variant, "STABLE, STABLE-P, STABLE-A, STABLE-Ran, STABLE-K, STABLE-GCN or GCN");
  add_stage_options(pipeline, over, true, true, true, true, true);

  std::vector<std::string> variant_names;
  auto* ablate = app.add_subcommand("ablate", "run every variant over seeds");
  add_data_options(ablate, data);
  ablate->add_option("--variants", variant_names, "subset of variants (default: all)")->delimiter(',');
  add_stage_options(ablate, over, true, true, true, true, true);

  std::string param;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "vary one hyperparameter");
  add_data_options(sweep_cmd, data);
  sweep_cmd->add_option("--param", param, "k, alpha, t1 or t2")->required();
  sweep_cmd->add_option("--values", values, "values to try")->required()->delimiter(',');
  add_stage_options(sweep_cmd, over, true, true, true, true, true);

  std::vector<std::string> reports;
  auto* report = app.add_subcommand("report", "summarize report files");
  report->add_option("reports", reports, "report.json files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*synth) return cmd_synth(g, spec);
    if (*attack) return cmd_attack(g, data, method, rate, add_probability);
    if (*preprocess) return cmd_preprocess(g, data, over);
    if (*embed) return cmd_embed(g, data, over);
    if (*refine) return cmd_refine(g, data, over, embeddings);
    if (*train) return cmd_train(g, data, over, graph_path, input_path);
    if (*pipeline) return cmd_pipeline(g, data, over, variant);
    if (*ablate) return cmd_ablate(g, data, over, variant_names);
    if (*sweep_cmd) return cmd_sweep(g, data, over, param, values);
    if (*report) return cmd_report(reports);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
