//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "synthphore/util/random.hpp"

namespace synthphore::nn {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

// Named parameter views used for optimisation, checkpointing and gradient checks.
template <class S>
using TensorList = std::vector<std::pair<std::string, Mat<S>*>>;
template <class S>
using ConstTensorList = std::vector<std::pair<std::string, const Mat<S>*>>;

template <class S>
inline S sigmoid(S v) {
  return S(1) / (S(1) + std::exp(-v));
}

template <class S>
inline Mat<S> silu(const Mat<S>& x) {
  return x.unaryExpr([](S v) { return v * sigmoid(v); });
}

// d silu / dx evaluated at the pre-activation.
template <class S>
inline Mat<S> silu_grad(const Mat<S>& x) {
  return x.unaryExpr([](S v) {
    const S s = sigmoid(v);
    return s * (S(1) + v * (S(1) - s));
  });
}

// Row-wise softmax; -inf entries yield exact zeros.
template <class S>
inline Mat<S> softmax_rows(const Mat<S>& x) {
  Mat<S> out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const S m = x.row(r).maxCoeff();
    S sum = 0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const S e = x(r, c) == -std::numeric_limits<S>::infinity() ? S(0) : std::exp(x(r, c) - m);
      out(r, c) = e;
      sum += e;
    }
    out.row(r) /= sum;
  }
  return out;
}

// Uniform(-bound, bound) initialisation from a deterministic stream.
template <class S>
inline void init_uniform(Mat<S>& m, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<S>(uniform(rng, -bound, bound));
}

template <class S, class T>
inline Mat<T> cast(const Mat<S>& m) {
  return m.template cast<T>();
}

}  // namespace synthphore::nn
