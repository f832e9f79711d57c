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
#include <vector>

#include "stable/graph.hpp"
#include "stable/tensor.hpp"

namespace stable {

struct DataSplit {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;

  // Throws InputError naming the offending id when lists overlap, fall
  // outside [0, num_nodes), or train is empty.
  void validate(std::size_t num_nodes) const;

  friend bool operator==(const DataSplit&, const DataSplit&) = default;
};

struct GraphBundle {
  SparseGraph graph;
  DenseMatrix features;
  LabelVector labels;
  DataSplit split;

  std::size_t num_nodes() const { return graph.num_nodes(); }
};

bool operator==(const GraphBundle& a, const GraphBundle& b);

// Edge list: one "u v" pair per line (tab or space separated), '#' starts a
// comment. Duplicate and reversed lines collapse to one undirected edge;
// self-loop lines are skipped. Ids must be < num_nodes.
EdgeSet read_edge_list(const std::filesystem::path& path, std::size_t num_nodes);
void write_edge_list(const std::filesystem::path& path, const EdgeSet& edges);

// Directed arc list with the same line format; "i\tj" means j is in row i.
std::vector<Edge> read_arc_list(const std::filesystem::path& path, std::size_t num_nodes);
void write_arc_list(const std::filesystem::path& path, const SparseGraph& graph);

// "N d" header then N rows of d reals. Values are written with 17
// significant digits so a round trip is exact.
DenseMatrix read_features(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const DenseMatrix& features);

LabelVector read_labels(const std::filesystem::path& path, std::size_t num_nodes);
void write_labels(const std::filesystem::path& path, const LabelVector& labels);

DataSplit read_split(const std::filesystem::path& path, std::size_t num_nodes);
void write_split(const std::filesystem::path& path, const DataSplit& split);

// Reads edges.tsv, features.txt, labels.tsv and split.json from dir.
GraphBundle load_graph_bundle(const std::filesystem::path& dir);
void save_graph_bundle(const GraphBundle& bundle, const std::filesystem::path& dir);

struct SbmSpec {
  std::size_t num_nodes = 300;
  int num_classes = 3;
  double p_in = 0.1;
  double p_out = 0.005;
  std::size_t feature_dim = 100;
  std::size_t on_bits = 10;
  double flip_noise = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

// Stochastic block model with binary class-template features and a
// stratified 10/10/80 split. Class c holds the contiguous id block
// [c*N/K, (c+1)*N/K).
GraphBundle generate_sbm(const SbmSpec& spec);

}  // namespace stable
