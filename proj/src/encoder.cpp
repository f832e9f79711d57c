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

#include "stable/encoder.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "stable/errors.hpp"
#include "stable/rng.hpp"

namespace stable {

namespace {

enum SeedStream : std::uint64_t { kInitStream = 11, kShuffleStream = 12, kReshuffleStream = 13 };

DenseMatrix activate(const DenseMatrix& z, Activation activation) {
  return activation == Activation::kRelu ? relu(z) : z;
}

void activate_backward(DenseMatrix& grad, const DenseMatrix& z, Activation activation) {
  if (activation == Activation::kRelu) relu_backward(grad, z);
}

std::vector<double> column_mean(const DenseMatrix& m) {
  std::vector<double> mean(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) mean[c] += row[c];
  }
  for (auto& v : mean) v /= static_cast<double>(m.rows());
  return mean;
}

void check_finite(const DenseMatrix& m, const char* what) {
  if (!m.all_finite()) throw NumericError(std::string("encoder: non-finite values in ") + what);
}

}  // namespace

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw InputError("unknown activation '" + name + "' (expected relu or identity)");
}

std::string to_string(Activation activation) { return activation == Activation::kRelu ? "relu" : "identity"; }

EncoderModel init_encoder(std::size_t input_dim, std::size_t hidden, Rng& rng, Activation activation) {
  if (hidden < 1) throw InputError("encoder: hidden size must be >= 1");
  EncoderModel model;
  model.weight = glorot_init(input_dim, hidden, rng);
  model.discriminator = glorot_init(hidden, hidden, rng);
  model.activation = activation;
  return model;
}

DenseMatrix encode(const EncoderModel& model, const DenseMatrix& features, const SparseGraph& g) {
  if (features.cols() != model.weight.rows()) {
    throw InputError("encode: features are " + features.shape_string() + " but encoder expects " +
                     std::to_string(model.weight.rows()) + " columns");
  }
  return activate(matmul(spmm(renormalized_adjacency(g), features), model.weight), model.activation);
}

std::vector<double> readout(const DenseMatrix& embeddings) {
  if (embeddings.rows() == 0) throw InputError("readout: no nodes");
  auto s = column_mean(embeddings);
  for (auto& v : s) v = sigmoid(v);
  return s;
}

double discriminate(const EncoderModel& model, std::span<const double> node, std::span<const double> summary) {
  const auto& w = model.discriminator;
  if (node.size() != w.rows() || summary.size() != w.cols()) throw InputError("discriminate: vector length mismatch");
  double logit = 0.0;
  for (std::size_t a = 0; a < w.rows(); ++a) {
    double ws = 0.0;
    auto row = w.row(a);
    for (std::size_t b = 0; b < row.size(); ++b) ws += row[b] * summary[b];
    logit += node[a] * ws;
  }
  return sigmoid(logit);
}

DenseMatrix shuffle_features(const DenseMatrix& features, std::uint64_t seed) {
  if (features.rows() < 2) throw InputError("shuffle_features: need at least 2 rows");
  std::vector<std::size_t> perm(features.rows());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  DenseMatrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < perm.size(); ++r) {
    auto src = features.row(perm[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

PropagatedInputs PropagatedInputs::build(const SparseGraph& base_graph, std::span<const SparseGraph> views,
                                         const DenseMatrix& features, const DenseMatrix& shuffled_features) {
  if (features.rows() != base_graph.num_nodes() || shuffled_features.rows() != base_graph.num_nodes()) {
    throw InputError("contrastive inputs: feature rows do not match node count");
  }
  if (views.empty()) throw InputError("contrastive inputs: need at least one view");
  PropagatedInputs in;
  const SparseMatrix base_adj = renormalized_adjacency(base_graph);
  in.base = spmm(base_adj, features);
  in.shuffled = spmm(base_adj, shuffled_features);
  for (const auto& v : views) {
    if (v.num_nodes() != base_graph.num_nodes()) throw InputError("contrastive inputs: view node count mismatch");
    in.views.push_back(spmm(renormalized_adjacency(v), features));
  }
  return in;
}

ContrastiveLoss contrastive_loss(const EncoderModel& model, const PropagatedInputs& in) {
  const std::size_t n = in.base.rows();
  const std::size_t m = in.views.size();
  const std::size_t h = model.hidden();
  const Activation act = model.activation;

  const DenseMatrix z_pos = matmul(in.base, model.weight);
  const DenseMatrix z_neg = matmul(in.shuffled, model.weight);
  const DenseMatrix h_pos = activate(z_pos, act);
  const DenseMatrix h_neg = activate(z_neg, act);

  std::vector<DenseMatrix> z_views;
  DenseMatrix summaries(m, h);
  for (std::size_t j = 0; j < m; ++j) {
    z_views.push_back(matmul(in.views[j], model.weight));
    auto s = readout(activate(z_views.back(), act));
    std::copy(s.begin(), s.end(), summaries.row(j).begin());
  }

  // Row j of `projected` is (W_omega s_j)^T, so logits are H projected^T.
  const DenseMatrix projected = matmul_nt(summaries, model.discriminator);
  const DenseMatrix logit_pos = matmul_nt(h_pos, projected);
  const DenseMatrix logit_neg = matmul_nt(h_neg, projected);

  const double scale = 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(m));
  const double lo = kProbabilityClamp;
  const double hi = 1.0 - kProbabilityClamp;
  ContrastiveLoss out;
  DenseMatrix g_pos(n, m), g_neg(n, m);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = sigmoid(logit_pos(i, j));
      if (p < lo || p > hi) {
        total += std::log(std::clamp(p, lo, hi));
      } else {
        total += std::log(p);
        g_pos(i, j) = -scale * sigmoid(-logit_pos(i, j));
      }
      const double q = sigmoid(logit_neg(i, j));
      if (q < lo || q > hi) {
        total += std::log(1.0 - std::clamp(q, lo, hi));
      } else {
        total += std::log(sigmoid(-logit_neg(i, j)));
        g_neg(i, j) = scale * q;
      }
    }
  }
  out.loss = -scale * total;

  DenseMatrix grad_pos = matmul(g_pos, projected);
  DenseMatrix grad_neg = matmul(g_neg, projected);

  out.grad_discriminator = matmul_tn(h_pos, matmul(g_pos, summaries));
  add_inplace(out.grad_discriminator, matmul_tn(h_neg, matmul(g_neg, summaries)));

  DenseMatrix grad_summary_pre = matmul_tn(g_pos, h_pos);
  add_inplace(grad_summary_pre, matmul_tn(g_neg, h_neg));
  const DenseMatrix grad_summary = matmul(grad_summary_pre, model.discriminator);

  activate_backward(grad_pos, z_pos, act);
  activate_backward(grad_neg, z_neg, act);
  out.grad_weight = matmul_tn(in.base, grad_pos);
  add_inplace(out.grad_weight, matmul_tn(in.shuffled, grad_neg));

  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    // Every node contributes equally to the mean pooled into s_j.
    std::vector<double> grad_mean(h);
    for (std::size_t c = 0; c < h; ++c) {
      const double s = summaries(j, c);
      grad_mean[c] = grad_summary(j, c) * s * (1.0 - s) * inv_n;
    }
    DenseMatrix grad_view(n, h);
    for (std::size_t i = 0; i < n; ++i) std::copy(grad_mean.begin(), grad_mean.end(), grad_view.row(i).begin());
    activate_backward(grad_view, z_views[j], act);
    add_inplace(out.grad_weight, matmul_tn(in.views[j], grad_view));
  }
  return out;
}

ContrastiveLoss contrastive_loss(const EncoderModel& model, const SparseGraph& base_graph,
                                 std::span<const SparseGraph> views, const DenseMatrix& features,
                                 const DenseMatrix& shuffled_features) {
  if (features.cols() != model.weight.rows()) throw InputError("contrastive_loss: feature dimension mismatch");
  return contrastive_loss(model, PropagatedInputs::build(base_graph, views, features, shuffled_features));
}

EncoderTrainResult train_encoder(const ViewBundle& bundle, const DenseMatrix& features, const EncoderConfig& config,
                                 std::uint64_t seed) {
  if (bundle.views.empty()) throw InputError("train_encoder: view bundle is empty");
  if (features.rows() != bundle.base.num_nodes()) throw InputError("train_encoder: feature rows do not match graph");
  if (!(config.learning_rate > 0.0)) throw InputError("train_encoder: learning rate must be positive");

  Rng init_rng(derive_seed(seed, kInitStream));
  EncoderTrainResult result;
  EncoderModel model = init_encoder(features.cols(), config.hidden, init_rng, config.activation);
  result.model = model;

  DenseMatrix shuffled = shuffle_features(features, derive_seed(seed, kShuffleStream));
  PropagatedInputs inputs = PropagatedInputs::build(bundle.base, bundle.views, features, shuffled);
  const SparseMatrix base_adj = renormalized_adjacency(bundle.base);

  std::vector<DenseMatrix> params{model.weight, model.discriminator};
  Adam optimizer({.learning_rate = config.learning_rate}, params);
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    if (config.reshuffle_each_epoch && epoch > 0) {
      shuffled = shuffle_features(features, derive_seed(derive_seed(seed, kReshuffleStream), epoch));
      inputs.shuffled = spmm(base_adj, shuffled);
    }
    model.weight = params[0];
    model.discriminator = params[1];
    ContrastiveLoss lc = contrastive_loss(model, inputs);
    if (!std::isfinite(lc.loss)) {
      throw NumericError("train_encoder: non-finite loss at epoch " + std::to_string(epoch));
    }
    result.losses.push_back(lc.loss);
    if (lc.loss < best) {
      best = lc.loss;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
    std::vector<DenseMatrix> grads{std::move(lc.grad_weight), std::move(lc.grad_discriminator)};
    optimizer.step(params, grads);
  }
  result.embeddings = encode(result.model, features, bundle.base);
  check_finite(result.embeddings, "embeddings");
  return result;
}

}  // namespace stable
