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

#include "stable/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stable/errors.hpp"

namespace stable {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

std::string mismatch(const char* op, const std::string& a, const std::string& b) {
  return std::string(op) + ": shape mismatch " + a + " vs " + b;
}

std::string sparse_shape(const SparseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " (sparse)";
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require(values_.size() == rows_ * cols_, "DenseMatrix: " + std::to_string(values_.size()) +
                                               " values for shape " + shape_string());
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::string DenseMatrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    require(t.row < rows && t.col < cols, "SparseMatrix: entry (" + std::to_string(t.row) + "," +
                                              std::to_string(t.col) + ") outside " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  std::size_t i = 0;
  while (i < entries.size()) {
    const auto r = entries[i].row;
    const auto c = entries[i].col;
    double v = 0.0;
    for (; i < entries.size() && entries[i].row == r && entries[i].col == c; ++i) v += entries[i].value;
    if (v != 0.0) {
      m.col_idx_.push_back(c);
      m.values_.push_back(v);
      ++m.row_ptr_[r + 1];
    }
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  SparseMatrix m(dense.rows(), dense.cols());
  for (std::size_t r = 0; r < dense.rows(); ++r) {
    for (std::size_t c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != 0.0) {
        m.col_idx_.push_back(static_cast<std::uint32_t>(c));
        m.values_.push_back(dense(r, c));
      }
    }
    m.row_ptr_[r + 1] = m.col_idx_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  m.col_idx_.resize(n);
  m.values_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.col_idx_[i] = static_cast<std::uint32_t>(i);
    m.row_ptr_[i + 1] = i + 1;
  }
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(c));
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) = values_[k];
  }
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (auto c : col_idx_) ++t.row_ptr_[c + 1];
  for (std::size_t r = 0; r < cols_; ++r) t.row_ptr_[r + 1] += t.row_ptr_[r];
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<std::size_t> cursor(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  // Rows visited in ascending order, so each transposed row stays sorted.
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t dst = cursor[col_idx_[k]]++;
      t.col_idx_[dst] = static_cast<std::uint32_t>(r);
      t.values_[dst] = values_[k];
    }
  }
  return t;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InputError(mismatch("spmm", sparse_shape(a), b.shape_string()));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    auto cols = a.row_cols(r);
    auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double v = vals[k];
      auto src = b.row(cols[k]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += v * src[c];
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InputError(mismatch("matmul", a.shape_string(), b.shape_string()));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = a(i, k);
      if (v == 0.0) continue;
      auto src = b.row(k);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw InputError(mismatch("matmul_tn", a.shape_string(), b.shape_string()));
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto src = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double v = a(k, i);
      if (v == 0.0) continue;
      auto dst = out.row(i);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw InputError(mismatch("matmul_nt", a.shape_string(), b.shape_string()));
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < ai.size(); ++k) s += ai[k] * bj[k];
      out(i, j) = s;
    }
  }
  return out;
}

void add_inplace(DenseMatrix& dst, const DenseMatrix& src, double scale) {
  if (dst.rows() != src.rows() || dst.cols() != src.cols()) {
    throw InputError(mismatch("add", dst.shape_string(), src.shape_string()));
  }
  auto d = dst.values();
  auto s = src.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += scale * s[i];
}

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  require(rows >= 1 && cols >= 1, "glorot_init: zero dimension " + std::to_string(rows) + "x" + std::to_string(cols));
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix m(rows, cols);
  for (auto& v : m.values()) v = rng.uniform(-bound, bound);
  return m;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

DenseMatrix relu(const DenseMatrix& x) {
  DenseMatrix out = x;
  for (auto& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

void relu_backward(DenseMatrix& grad, const DenseMatrix& z) {
  auto g = grad.values();
  auto zv = z.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(zv[i] > 0.0)) g[i] = 0.0;
  }
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto in = logits.row(r);
    auto dst = out.row(r);
    const double mx = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) {
      dst[c] = std::exp(in[c] - mx);
      total += dst[c];
    }
    for (auto& v : dst) v /= total;
  }
  return out;
}

CrossEntropy softmax_cross_entropy(const DenseMatrix& logits, std::span<const int> labels,
                                   std::span<const std::uint32_t> rows) {
  require(labels.size() == logits.rows(), "softmax_cross_entropy: " + std::to_string(labels.size()) +
                                              " labels for " + logits.shape_string() + " logits");
  require(!rows.empty(), "softmax_cross_entropy: empty row selection");
  CrossEntropy out;
  out.grad = DenseMatrix(logits.rows(), logits.cols());
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (auto r : rows) {
    auto in = logits.row(r);
    const int y = labels[r];
    require(y >= 0 && static_cast<std::size_t>(y) < logits.cols(),
            "softmax_cross_entropy: label " + std::to_string(y) + " out of range at row " + std::to_string(r));
    const double mx = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (double v : in) total += std::exp(v - mx);
    const double log_z = mx + std::log(total);
    out.loss += (log_z - in[y]) * inv;
    auto g = out.grad.row(r);
    for (std::size_t c = 0; c < in.size(); ++c) g[c] = std::exp(in[c] - log_z) * inv;
    g[y] -= inv;
  }
  return out;
}

Adam::Adam(AdamConfig config, std::span<const DenseMatrix> params) : config_(config) {
  for (const auto& p : params) {
    first_.emplace_back(p.rows(), p.cols());
    second_.emplace_back(p.rows(), p.cols());
  }
}

void Adam::step(std::span<DenseMatrix> params, std::span<const DenseMatrix> grads) {
  require(params.size() == first_.size() && grads.size() == first_.size(),
          "adam_step: expected " + std::to_string(first_.size()) + " parameters");
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (params[p].rows() != first_[p].rows() || params[p].cols() != first_[p].cols() ||
        grads[p].rows() != first_[p].rows() || grads[p].cols() != first_[p].cols()) {
      throw InputError(mismatch("adam_step", params[p].shape_string(), grads[p].shape_string()));
    }
    if (!grads[p].all_finite()) {
      throw NumericError("adam_step: non-finite gradient in parameter " + std::to_string(p) + " at step " +
                         std::to_string(steps_ + 1));
    }
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correct1 = 1.0 - std::pow(config_.beta1, t);
  const double correct2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto w = params[p].values();
    auto g = grads[p].values();
    auto m = first_[p].values();
    auto v = second_[p].values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      w[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

double grad_check(const LossFunction& loss, std::span<const DenseMatrix> params, double epsilon) {
  require(epsilon > 0.0, "grad_check: epsilon must be positive");
  std::vector<DenseMatrix> work(params.begin(), params.end());
  const LossAndGrad base = loss(work);
  if (!std::isfinite(base.loss)) throw InputError("grad_check: loss is not finite at the given parameters");
  require(base.grads.size() == work.size(), "grad_check: closure returned wrong number of gradients");
  double worst = 0.0;
  for (std::size_t p = 0; p < work.size(); ++p) {
    auto w = work[p].values();
    auto analytic = base.grads[p].values();
    require(analytic.size() == w.size(), "grad_check: gradient shape mismatch for parameter " + std::to_string(p));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + epsilon;
      const double up = loss(work).loss;
      w[i] = saved - epsilon;
      const double down = loss(work).loss;
      w[i] = saved;
      const double central = (up - down) / (2.0 * epsilon);
      const double err = std::abs(analytic[i] - central) / std::max(1.0, std::abs(central));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace stable
