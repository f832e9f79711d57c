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

#include "stable/report.hpp"

#include <fstream>

#include "stable/errors.hpp"
#include "stable/metrics.hpp"

namespace stable {

using nlohmann::json;

namespace {

json counts_to_json(const RemovalCounts& c) {
  return {{"total", c.total},
          {"adversarial", c.adversarial},
          {"normal", c.normal},
          {"normal_heterophilic", c.normal_heterophilic},
          {"accuracy", c.accuracy}};
}

RemovalCounts counts_from_json(const json& j) {
  RemovalCounts c;
  c.total = j.at("total").get<std::size_t>();
  c.adversarial = j.at("adversarial").get<std::size_t>();
  c.normal = j.at("normal").get<std::size_t>();
  c.normal_heterophilic = j.at("normal_heterophilic").get<std::size_t>();
  c.accuracy = j.at("accuracy").get<double>();
  return c;
}

json stats_to_json(const StageStats& s) {
  return {{"input_edges", s.input_edges},
          {"preprocess_removed", s.preprocess_removed},
          {"preprocessed_edges", s.preprocessed_edges},
          {"view_edges", s.view_edges},
          {"recovered_total", s.recovered_total},
          {"pruned", s.pruned},
          {"retained_edges", s.retained_edges},
          {"inserted_arcs", s.inserted_arcs},
          {"optimal_arcs", s.optimal_arcs},
          {"encoder_epochs", s.encoder_epochs},
          {"encoder_best_epoch", s.encoder_best_epoch},
          {"encoder_best_loss", s.encoder_best_loss}};
}

StageStats stats_from_json(const json& j) {
  StageStats s;
  s.input_edges = j.at("input_edges").get<std::size_t>();
  s.preprocess_removed = j.at("preprocess_removed").get<std::size_t>();
  s.preprocessed_edges = j.at("preprocessed_edges").get<std::size_t>();
  s.view_edges = j.at("view_edges").get<std::vector<std::size_t>>();
  s.recovered_total = j.at("recovered_total").get<std::size_t>();
  s.pruned = j.at("pruned").get<std::size_t>();
  s.retained_edges = j.at("retained_edges").get<std::size_t>();
  s.inserted_arcs = j.at("inserted_arcs").get<std::size_t>();
  s.optimal_arcs = j.at("optimal_arcs").get<std::size_t>();
  s.encoder_epochs = j.at("encoder_epochs").get<std::size_t>();
  s.encoder_best_epoch = j.at("encoder_best_epoch").get<std::size_t>();
  s.encoder_best_loss = j.at("encoder_best_loss").get<double>();
  return s;
}

}  // namespace

std::vector<double> RunResult::accuracies() const {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.test_accuracy);
  return out;
}

double RunResult::mean_accuracy() const { return mean(accuracies()); }

double RunResult::std_accuracy() const { return population_std(accuracies()); }

json to_json(const RunResult& result, bool include_timing) {
  json runs = json::array();
  for (const auto& r : result.runs) {
    json entry = {{"seed", r.seed},
                  {"test_accuracy", r.test_accuracy},
                  {"val_accuracy", r.val_accuracy},
                  {"stats", stats_to_json(r.stats)},
                  {"notes", r.notes}};
    if (r.removal) entry["removal"] = counts_to_json(*r.removal);
    if (r.feature_pruning_removal) entry["feature_pruning_removal"] = counts_to_json(*r.feature_pruning_removal);
    runs.push_back(std::move(entry));
  }
  json doc = {{"label", result.label},
              {"config", result.config},
              {"runs", std::move(runs)},
              {"summary",
               {{"count", result.runs.size()},
                {"mean_accuracy", result.mean_accuracy()},
                {"std_accuracy", result.std_accuracy()},
                {"std_convention", "population"}}}};
  if (include_timing) doc["wall_seconds"] = result.wall_seconds;
  return doc;
}

RunResult run_result_from_json(const json& doc) {
  try {
    RunResult result;
    result.label = doc.at("label").get<std::string>();
    result.config = doc.at("config");
    if (doc.contains("wall_seconds")) result.wall_seconds = doc.at("wall_seconds").get<double>();
    for (const auto& entry : doc.at("runs")) {
      SeedRun r;
      r.seed = entry.at("seed").get<std::uint64_t>();
      r.test_accuracy = entry.at("test_accuracy").get<double>();
      r.val_accuracy = entry.at("val_accuracy").get<double>();
      r.stats = stats_from_json(entry.at("stats"));
      r.notes = entry.at("notes").get<std::vector<std::string>>();
      if (entry.contains("removal")) r.removal = counts_from_json(entry.at("removal"));
      if (entry.contains("feature_pruning_removal")) {
        r.feature_pruning_removal = counts_from_json(entry.at("feature_pruning_removal"));
      }
      result.runs.push_back(std::move(r));
    }
    return result;
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

void write_json(const json& doc, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw InputError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_report(const RunResult& result, const std::filesystem::path& path, bool include_timing) {
  write_json(to_json(result, include_timing), path);
}

RunResult read_report(const std::filesystem::path& path) { return run_result_from_json(read_json(path)); }

}  // namespace stable
