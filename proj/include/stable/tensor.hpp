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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stable/rng.hpp"

namespace stable {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;
  std::string shape_string() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

// Compressed-row sparse matrix. Column indices are strictly increasing
// within a row and no explicit zeros are stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  // Duplicate coordinates are summed; entries that end up zero are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  static SparseMatrix from_dense(const DenseMatrix& dense);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  // Stored value at (r, c), or 0 when absent.
  double at(std::size_t r, std::size_t c) const;

  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

// Sparse-dense product. Accumulates each output row in ascending column
// order so the result is bitwise reproducible.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a^T b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

void add_inplace(DenseMatrix& dst, const DenseMatrix& src, double scale = 1.0);

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

// Elementwise kernels.
double sigmoid(double x);
DenseMatrix relu(const DenseMatrix& x);
// Multiplies grad in place by the ReLU derivative evaluated at pre-activation z.
void relu_backward(DenseMatrix& grad, const DenseMatrix& z);
DenseMatrix softmax_rows(const DenseMatrix& logits);

struct CrossEntropy {
  double loss = 0.0;
  DenseMatrix grad;  // d loss / d logits, zero outside the selected rows
};

// Mean softmax cross-entropy over the selected rows.
CrossEntropy softmax_cross_entropy(const DenseMatrix& logits, std::span<const int> labels,
                                   std::span<const std::uint32_t> rows);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adaptive-moment optimizer over a fixed list of parameter matrices.
class Adam {
 public:
  Adam(AdamConfig config, std::span<const DenseMatrix> params);

  // Applies one bias-corrected update. Throws NumericError on a non-finite
  // gradient and InputError on a shape mismatch.
  void step(std::span<DenseMatrix> params, std::span<const DenseMatrix> grads);

  std::int64_t steps() const { return steps_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<DenseMatrix> first_;
  std::vector<DenseMatrix> second_;
  std::int64_t steps_ = 0;
};

struct LossAndGrad {
  double loss = 0.0;
  std::vector<DenseMatrix> grads;
};

using LossFunction = std::function<LossAndGrad(std::span<const DenseMatrix>)>;

// Max over all parameter entries of |analytic - central| / max(1, |central|).
double grad_check(const LossFunction& loss, std::span<const DenseMatrix> params, double epsilon);

}  // namespace stable
