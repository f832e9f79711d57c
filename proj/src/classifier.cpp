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

#include "stable/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "stable/errors.hpp"
#include "stable/rng.hpp"

namespace stable {

namespace {

enum SeedStream : std::uint64_t { kClassifierInitStream = 21 };

DenseMatrix propagate(const SparseMatrix& op, const DenseMatrix& input, const DenseMatrix& weight, bool apply_relu) {
  DenseMatrix out = matmul(spmm(op, input), weight);
  return apply_relu ? relu(out) : out;
}

}  // namespace

ClassifierMode parse_mode(const std::string& name) {
  if (name == "advanced") return ClassifierMode::kAdvanced;
  if (name == "vanilla") return ClassifierMode::kVanilla;
  throw InputError("unknown classifier mode '" + name + "' (expected advanced or vanilla)");
}

std::string to_string(ClassifierMode mode) { return mode == ClassifierMode::kAdvanced ? "advanced" : "vanilla"; }

SparseMatrix advanced_operator(const SparseGraph& g, double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InputError("advanced_operator: alpha and beta must be finite");
  const auto deg = degrees(g);
  const std::size_t n = g.num_nodes();
  std::vector<Triplet> entries;
  entries.reserve(g.num_arcs() + n);
  std::vector<double> raw;
  for (NodeId i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    raw.assign(nb.size(), 0.0);
    double z = 0.0;
    const auto di = static_cast<double>(deg[i]);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto dj = static_cast<double>(std::max<std::size_t>(deg[nb[k]], 1));
      raw[k] = std::pow(di * dj, alpha);
      z += raw[k];
    }
    if (beta != 0.0) entries.push_back({i, i, beta});
    for (std::size_t k = 0; k < nb.size(); ++k) entries.push_back({i, nb[k], raw[k] / z});
  }
  return SparseMatrix::from_triplets(n, n, std::move(entries));
}

SparseMatrix vanilla_operator(const SparseGraph& g) {
  return renormalized_adjacency(g.is_directed() ? g.symmetrized() : g);
}

DenseMatrix advanced_propagate(const SparseGraph& g, const DenseMatrix& input, double alpha, double beta,
                               const DenseMatrix& weight, bool apply_relu) {
  return propagate(advanced_operator(g, alpha, beta), input, weight, apply_relu);
}

DenseMatrix vanilla_propagate(const SparseGraph& g, const DenseMatrix& input, const DenseMatrix& weight,
                              bool apply_relu) {
  return propagate(vanilla_operator(g), input, weight, apply_relu);
}

SparseMatrix propagation_operator(const SparseGraph& g, ClassifierMode mode, double alpha, double beta) {
  return mode == ClassifierMode::kAdvanced ? advanced_operator(g, alpha, beta) : vanilla_operator(g);
}

DenseMatrix classifier_logits(const ClassifierModel& model, const SparseMatrix& op, const DenseMatrix& input) {
  const DenseMatrix hidden = propagate(op, input, model.w1, true);
  return propagate(op, hidden, model.w2, false);
}

LossAndGrad classifier_loss(const ClassifierModel& model, const SparseMatrix& op, const DenseMatrix& input,
                            const LabelVector& labels, std::span<const NodeId> train_rows, double weight_decay) {
  const DenseMatrix agg_in = spmm(op, input);
  const DenseMatrix z1 = matmul(agg_in, model.w1);
  const DenseMatrix a1 = relu(z1);
  const DenseMatrix agg_hidden = spmm(op, a1);
  const DenseMatrix logits = matmul(agg_hidden, model.w2);
  CrossEntropy ce = softmax_cross_entropy(logits, labels.labels, train_rows);

  LossAndGrad out;
  double norm = 0.0;
  for (double v : model.w1.values()) norm += v * v;
  for (double v : model.w2.values()) norm += v * v;
  out.loss = ce.loss + 0.5 * weight_decay * norm;

  DenseMatrix grad_w2 = matmul_tn(agg_hidden, ce.grad);
  add_inplace(grad_w2, model.w2, weight_decay);
  DenseMatrix grad_a1 = spmm(op.transpose(), matmul_nt(ce.grad, model.w2));
  relu_backward(grad_a1, z1);
  DenseMatrix grad_w1 = matmul_tn(agg_in, grad_a1);
  add_inplace(grad_w1, model.w1, weight_decay);
  out.grads.push_back(std::move(grad_w1));
  out.grads.push_back(std::move(grad_w2));
  return out;
}

std::vector<int> argmax_rows(const DenseMatrix& logits) {
  std::vector<int> out(logits.rows());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto row = logits.row(r);
    out[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::vector<int> predict(const ClassifierModel& model, const SparseGraph& g, const DenseMatrix& input) {
  return argmax_rows(classifier_logits(model, propagation_operator(g, model.mode, model.alpha, model.beta), input));
}

ClassifierTrainResult train_classifier(const SparseGraph& g, const DenseMatrix& input, const LabelVector& labels,
                                       const DataSplit& split, const ClassifierConfig& config, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (input.rows() != n || labels.size() != n) {
    throw InputError("train_classifier: input has " + std::to_string(input.rows()) + " rows and labels " +
                     std::to_string(labels.size()) + " entries for " + std::to_string(n) + " nodes");
  }
  split.validate(n);
  for (auto i : split.train) {
    if (!labels.known(i)) throw InputError("train_classifier: train node " + std::to_string(i) + " has no label");
  }
  if (config.hidden < 1) throw InputError("train_classifier: hidden size must be >= 1");

  Rng rng(derive_seed(seed, kClassifierInitStream));
  ClassifierModel model;
  model.w1 = glorot_init(input.cols(), config.hidden, rng);
  model.w2 = glorot_init(config.hidden, static_cast<std::size_t>(labels.num_classes), rng);
  model.alpha = config.alpha;
  model.beta = config.beta;
  model.mode = config.mode;

  const SparseMatrix op = propagation_operator(g, config.mode, config.alpha, config.beta);
  ClassifierTrainResult result;
  result.model = model;
  std::vector<DenseMatrix> params{model.w1, model.w2};
  Adam optimizer({.learning_rate = config.learning_rate}, params);
  double best_val = -1.0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    model.w1 = params[0];
    model.w2 = params[1];
    LossAndGrad lg = classifier_loss(model, op, input, labels, split.train, config.weight_decay);
    if (!std::isfinite(lg.loss)) throw NumericError("train_classifier: non-finite loss at epoch " + std::to_string(epoch));
    optimizer.step(params, lg.grads);
    model.w1 = params[0];
    model.w2 = params[1];
    if (split.val.empty()) {
      result.model = model;
      result.best_epoch = epoch;
      continue;
    }
    const double val = accuracy(argmax_rows(classifier_logits(model, op, input)), labels, split.val);
    if (val > best_val) {
      best_val = val;
      result.model = model;
      result.best_epoch = epoch;
    }
  }
  if (split.val.empty()) result.warning = "empty validation set; using the last-epoch model";

  result.predictions = argmax_rows(classifier_logits(result.model, op, input));
  result.val_accuracy = split.val.empty() ? 0.0 : accuracy(result.predictions, labels, split.val);
  if (split.test.empty()) {
    result.warning += result.warning.empty() ? "empty test set" : "; empty test set";
  } else {
    result.test_accuracy = accuracy(result.predictions, labels, split.test);
  }
  return result;
}

}  // namespace stable
