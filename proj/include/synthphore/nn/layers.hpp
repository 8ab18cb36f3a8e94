//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "synthphore/nn/tensor.hpp"

namespace synthphore::nn {

// y = x W^T + b. W is (out, in); b is (1, out) or empty.
template <class S>
struct Linear {
  Mat<S> weight;
  Mat<S> bias;

  Linear() = default;
  Linear(int in, int out, bool with_bias, Rng& rng, double gain = 1.0);

  int in() const { return static_cast<int>(weight.cols()); }
  int out() const { return static_cast<int>(weight.rows()); }

  Mat<S> forward(const Mat<S>& x) const;
  // Accumulates parameter gradients into g and returns dL/dx.
  Mat<S> backward(const Mat<S>& x, const Mat<S>& dy, Linear& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

template <class S>
struct LayerNorm {
  Mat<S> gamma;
  Mat<S> beta;

  struct Cache {
    Mat<S> xhat;
    Mat<S> inv_std;  // (rows, 1)
  };

  LayerNorm() = default;
  explicit LayerNorm(int dim);

  Mat<S> forward(const Mat<S>& x, Cache& cache) const;
  Mat<S> backward(const Cache& cache, const Mat<S>& dy, LayerNorm& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

// Multi-head scaled dot-product attention with output projection.
template <class S>
struct MultiHeadAttention {
  Linear<S> q, k, v, o;
  int heads = 1;

  struct Cache {
    Mat<S> query_in, kv_in;
    Mat<S> Q, K, V;
    std::vector<Mat<S>> attn;  // per head (rows_q, rows_kv)
    Mat<S> concat;
  };

  MultiHeadAttention() = default;
  MultiHeadAttention(int dim, int heads, Rng& rng);

  // causal: query row i attends to key rows <= i.
  Mat<S> forward(const Mat<S>& query_in, const Mat<S>& kv_in, bool causal, Cache& cache) const;
  // Returns (d query_in, d kv_in).
  std::pair<Mat<S>, Mat<S>> backward(const Cache& cache, const Mat<S>& dy, MultiHeadAttention& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

// Sinusoidal positional encoding table (positions, dim).
template <class S>
Mat<S> positional_encoding(int positions, int dim);

}  // namespace synthphore::nn
