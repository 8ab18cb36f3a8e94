//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/nn/layers.hpp"

namespace synthphore::nn {

template <class S>
Linear<S>::Linear(int in, int out, bool with_bias, Rng& rng, double gain) : weight(out, in) {
  const double bound = gain / std::sqrt(static_cast<double>(in));
  init_uniform(weight, bound, rng);
  if (with_bias) {
    bias.resize(1, out);
    init_uniform(bias, bound, rng);
  }
}

template <class S>
Mat<S> Linear<S>::forward(const Mat<S>& x) const {
  Mat<S> y = x * weight.transpose();
  if (bias.size() > 0) y.rowwise() += bias.row(0);
  return y;
}

template <class S>
Mat<S> Linear<S>::backward(const Mat<S>& x, const Mat<S>& dy, Linear& g) const {
  g.weight.noalias() += dy.transpose() * x;
  if (bias.size() > 0) g.bias.row(0) += dy.colwise().sum();
  return dy * weight;
}

template <class S>
void Linear<S>::zero() {
  weight.setZero();
  bias.setZero();
}

template <class S>
void Linear<S>::collect(const std::string& prefix, TensorList<S>& out) {
  out.emplace_back(prefix + ".weight", &weight);
  if (bias.size() > 0) out.emplace_back(prefix + ".bias", &bias);
}

template <class S>
LayerNorm<S>::LayerNorm(int dim) : gamma(Mat<S>::Ones(1, dim)), beta(Mat<S>::Zero(1, dim)) {}

template <class S>
Mat<S> LayerNorm<S>::forward(const Mat<S>& x, Cache& cache) const {
  constexpr S kEps = S(1e-5);
  const Eigen::Index n = x.cols();
  cache.xhat.resize(x.rows(), n);
  cache.inv_std.resize(x.rows(), 1);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const S mean = x.row(r).sum() / S(n);
    const auto centred = (x.row(r).array() - mean).matrix();
    const S var = centred.squaredNorm() / S(n);
    const S inv = S(1) / std::sqrt(var + kEps);
    cache.inv_std(r, 0) = inv;
    cache.xhat.row(r) = centred * inv;
  }
  Mat<S> y = cache.xhat.array().rowwise() * gamma.row(0).array();
  y.rowwise() += beta.row(0);
  return y;
}

template <class S>
Mat<S> LayerNorm<S>::backward(const Cache& cache, const Mat<S>& dy, LayerNorm& g) const {
  const Eigen::Index n = dy.cols();
  g.gamma.row(0) += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  g.beta.row(0) += dy.colwise().sum();
  Mat<S> dx(dy.rows(), n);
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const RowVec<S> dxhat = (dy.row(r).array() * gamma.row(0).array()).matrix();
    const S mean_d = dxhat.sum() / S(n);
    const S mean_dx = dxhat.dot(cache.xhat.row(r)) / S(n);
    dx.row(r) = cache.inv_std(r, 0) * (dxhat.array() - mean_d - cache.xhat.row(r).array() * mean_dx).matrix();
  }
  return dx;
}

template <class S>
void LayerNorm<S>::zero() {
  gamma.setZero();
  beta.setZero();
}

template <class S>
void LayerNorm<S>::collect(const std::string& prefix, TensorList<S>& out) {
  out.emplace_back(prefix + ".gamma", &gamma);
  out.emplace_back(prefix + ".beta", &beta);
}

template <class S>
MultiHeadAttention<S>::MultiHeadAttention(int dim, int h, Rng& rng)
    : q(dim, dim, true, rng), k(dim, dim, true, rng), v(dim, dim, true, rng), o(dim, dim, true, rng), heads(h) {}

template <class S>
Mat<S> MultiHeadAttention<S>::forward(const Mat<S>& query_in, const Mat<S>& kv_in, bool causal, Cache& c) const {
  const int dim = q.out();
  const int dk = dim / heads;
  const S scale = S(1) / std::sqrt(S(dk));
  c.query_in = query_in;
  c.kv_in = kv_in;
  c.Q = q.forward(query_in);
  c.K = k.forward(kv_in);
  c.V = v.forward(kv_in);
  c.attn.assign(static_cast<std::size_t>(heads), Mat<S>());
  c.concat.resize(query_in.rows(), dim);
  for (int h = 0; h < heads; ++h) {
    Mat<S> scores = (c.Q.middleCols(h * dk, dk) * c.K.middleCols(h * dk, dk).transpose()) * scale;
    if (causal) {
      for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < scores.cols(); ++j) scores(i, j) = -std::numeric_limits<S>::infinity();
      }
    }
    c.attn[static_cast<std::size_t>(h)] = softmax_rows(scores);
    c.concat.middleCols(h * dk, dk) = c.attn[static_cast<std::size_t>(h)] * c.V.middleCols(h * dk, dk);
  }
  return o.forward(c.concat);
}

template <class S>
std::pair<Mat<S>, Mat<S>> MultiHeadAttention<S>::backward(const Cache& c, const Mat<S>& dy,
                                                          MultiHeadAttention& g) const {
  const int dim = q.out();
  const int dk = dim / heads;
  const S scale = S(1) / std::sqrt(S(dk));
  const Mat<S> dconcat = o.backward(c.concat, dy, g.o);
  Mat<S> dQ = Mat<S>::Zero(c.Q.rows(), dim);
  Mat<S> dK = Mat<S>::Zero(c.K.rows(), dim);
  Mat<S> dV = Mat<S>::Zero(c.V.rows(), dim);
  for (int h = 0; h < heads; ++h) {
    const Mat<S>& A = c.attn[static_cast<std::size_t>(h)];
    const Mat<S> dO = dconcat.middleCols(h * dk, dk);
    dV.middleCols(h * dk, dk) = A.transpose() * dO;
    const Mat<S> dA = dO * c.V.middleCols(h * dk, dk).transpose();
    // Softmax backward per row.
    Mat<S> dS(A.rows(), A.cols());
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
      const S dot = A.row(r).dot(dA.row(r));
      dS.row(r) = (A.row(r).array() * (dA.row(r).array() - dot)).matrix();
    }
    dS *= scale;
    dQ.middleCols(h * dk, dk) = dS * c.K.middleCols(h * dk, dk);
    dK.middleCols(h * dk, dk) = dS.transpose() * c.Q.middleCols(h * dk, dk);
  }
  Mat<S> dquery = q.backward(c.query_in, dQ, g.q);
  Mat<S> dkv = k.backward(c.kv_in, dK, g.k);
  dkv += v.backward(c.kv_in, dV, g.v);
  return {std::move(dquery), std::move(dkv)};
}

template <class S>
void MultiHeadAttention<S>::zero() {
  q.zero();
  k.zero();
  v.zero();
  o.zero();
}

template <class S>
void MultiHeadAttention<S>::collect(const std::string& prefix, TensorList<S>& out) {
  q.collect(prefix + ".q", out);
  k.collect(prefix + ".k", out);
  v.collect(prefix + ".v", out);
  o.collect(prefix + ".o", out);
}

template <class S>
Mat<S> positional_encoding(int positions, int dim) {
  Mat<S> pe(positions, dim);
  for (int p = 0; p < positions; ++p) {
    for (int i = 0; i < dim; i += 2) {
      const double freq = std::pow(10000.0, -static_cast<double>(i) / dim);
      pe(p, i) = static_cast<S>(std::sin(p * freq));
      if (i + 1 < dim) pe(p, i + 1) = static_cast<S>(std::cos(p * freq));
    }
  }
  return pe;
}

template struct Linear<float>;
template struct Linear<double>;
template struct LayerNorm<float>;
template struct LayerNorm<double>;
template struct MultiHeadAttention<float>;
template struct MultiHeadAttention<double>;
template Mat<float> positional_encoding<float>(int, int);
template Mat<double> positional_encoding<double>(int, int);

}  // namespace synthphore::nn
