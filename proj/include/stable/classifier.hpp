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
#include <span>
#include <string>
#include <vector>

#include "stable/graph.hpp"
#include "stable/io.hpp"
#include "stable/metrics.hpp"
#include "stable/tensor.hpp"

namespace stable {

enum class ClassifierMode { kAdvanced, kVanilla };

ClassifierMode parse_mode(const std::string& name);
std::string to_string(ClassifierMode mode);

// Row-stochastic degree-reweighted aggregation plus beta on the diagonal.
// Row i holds w_ij = (d_i d_j)^alpha / Z_i over the out-neighbors j of i,
// Z_i = sum_j (d_i d_j)^alpha, with d the out-degree in g. Neighbors with
// out-degree 0 are counted as degree 1. Rows without neighbors keep only
// the beta term.
SparseMatrix advanced_operator(const SparseGraph& g, double alpha, double beta);

// The renormalized adjacency; a directed g is symmetrized first.
SparseMatrix vanilla_operator(const SparseGraph& g);

DenseMatrix advanced_propagate(const SparseGraph& g, const DenseMatrix& input, double alpha, double beta,
                               const DenseMatrix& weight, bool apply_relu);
DenseMatrix vanilla_propagate(const SparseGraph& g, const DenseMatrix& input, const DenseMatrix& weight,
                              bool apply_relu);

struct ClassifierConfig {
  std::size_t hidden = 16;
  double learning_rate = 1e-2;
  double weight_decay = 5e-4;
  std::size_t epochs = 200;
  double alpha = 0.6;
  double beta = 2.0;
  ClassifierMode mode = ClassifierMode::kAdvanced;
};

struct ClassifierModel {
  DenseMatrix w1;  // input_dim x hidden
  DenseMatrix w2;  // hidden x classes
  double alpha = 0.6;
  double beta = 2.0;
  ClassifierMode mode = ClassifierMode::kAdvanced;
};

SparseMatrix propagation_operator(const SparseGraph& g, ClassifierMode mode, double alpha, double beta);

// Two propagation layers, ReLU after the first; returns pre-softmax logits.
DenseMatrix classifier_logits(const ClassifierModel& model, const SparseMatrix& op, const DenseMatrix& input);

// Mean cross-entropy over train_rows plus weight_decay/2 * (|W1|^2 + |W2|^2).
LossAndGrad classifier_loss(const ClassifierModel& model, const SparseMatrix& op, const DenseMatrix& input,
                            const LabelVector& labels, std::span<const NodeId> train_rows, double weight_decay);

// Argmax per row; ties go to the smaller class id.
std::vector<int> argmax_rows(const DenseMatrix& logits);

std::vector<int> predict(const ClassifierModel& model, const SparseGraph& g, const DenseMatrix& input);

struct ClassifierTrainResult {
  ClassifierModel model;  // epoch with the best validation accuracy
  std::vector<int> predictions;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t best_epoch = 0;
  std::string warning;
};

ClassifierTrainResult train_classifier(const SparseGraph& g, const DenseMatrix& input, const LabelVector& labels,
                                       const DataSplit& split, const ClassifierConfig& config, std::uint64_t seed);

}  // namespace stable
