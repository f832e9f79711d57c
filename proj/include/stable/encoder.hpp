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
#include "stable/preprocess.hpp"
#include "stable/tensor.hpp"

namespace stable {

enum class Activation { kRelu, kIdentity };

Activation parse_activation(const std::string& name);
std::string to_string(Activation activation);

// One-layer GCN encoder plus a bilinear discriminator.
struct EncoderModel {
  DenseMatrix weight;         // d x h
  DenseMatrix discriminator;  // h x h
  Activation activation = Activation::kRelu;

  std::size_t hidden() const { return weight.cols(); }
};

EncoderModel init_encoder(std::size_t input_dim, std::size_t hidden, Rng& rng,
                          Activation activation = Activation::kRelu);

// act(Â X W) with Â the renormalized adjacency of g.
DenseMatrix encode(const EncoderModel& model, const DenseMatrix& features, const SparseGraph& g);

// Logistic sigmoid of the column-wise mean of the rows.
std::vector<double> readout(const DenseMatrix& embeddings);

// sigmoid(h^T W s)
double discriminate(const EncoderModel& model, std::span<const double> node, std::span<const double> summary);

// Rows of X under a uniform random permutation.
DenseMatrix shuffle_features(const DenseMatrix& features, std::uint64_t seed);

inline constexpr double kProbabilityClamp = 1e-7;

struct ContrastiveLoss {
  double loss = 0.0;
  DenseMatrix grad_weight;
  DenseMatrix grad_discriminator;
};

// Â X products the loss consumes. The encoder is linear before its
// activation, so these stay fixed while W changes.
struct PropagatedInputs {
  DenseMatrix base;      // Â^P X
  DenseMatrix shuffled;  // Â^P X~
  std::vector<DenseMatrix> views;

  static PropagatedInputs build(const SparseGraph& base_graph, std::span<const SparseGraph> views,
                                const DenseMatrix& features, const DenseMatrix& shuffled_features);
};

// Binary cross-entropy between positive pairs (h_i from the base graph,
// summary of view j) and negative pairs (h~_i from shuffled features, same
// summary), averaged over nodes and views. Probabilities are clamped to
// [kProbabilityClamp, 1 - kProbabilityClamp].
ContrastiveLoss contrastive_loss(const EncoderModel& model, const PropagatedInputs& inputs);
ContrastiveLoss contrastive_loss(const EncoderModel& model, const SparseGraph& base_graph,
                                 std::span<const SparseGraph> views, const DenseMatrix& features,
                                 const DenseMatrix& shuffled_features);

struct EncoderConfig {
  std::size_t hidden = 64;
  double learning_rate = 1e-3;
  std::size_t max_epochs = 500;
  std::size_t patience = 20;
  Activation activation = Activation::kRelu;
  bool reshuffle_each_epoch = false;
};

struct EncoderTrainResult {
  EncoderModel model;          // parameters with the lowest observed loss
  DenseMatrix embeddings;      // encode(model, X, base graph)
  std::vector<double> losses;  // loss evaluated at the start of each epoch
  std::size_t best_epoch = 0;
};

// Adam on the contrastive loss with early stopping once the loss has not
// improved for `patience` epochs. Throws NumericError on divergence.
EncoderTrainResult train_encoder(const ViewBundle& bundle, const DenseMatrix& features, const EncoderConfig& config,
                                 std::uint64_t seed);

}  // namespace stable
