//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "synthphore/chem/pharmacophore.hpp"
#include "synthphore/nn/layers.hpp"

namespace synthphore::nn {

// One E(n)-equivariant layer over a fully connected point set:
//   m_ij = phi_e(h_i, h_j, |x_i - x_j|^2, 1)
//   x_i' = x_i + sum_{j != i} (x_i - x_j) phi_x(m_ij)
//   h_i' = phi_h(h_i, sum_{j != i} m_ij)
// phi_e's first linear layer is (hidden, 2*hidden + 2): columns [h_i | h_j | d2 | e].
template <class S>
struct EgnnLayer {
  Linear<S> edge1, edge2;    // phi_e
  Linear<S> coord1, coord2;  // phi_x, coord2 has one output and no bias
  Linear<S> node1, node2;    // phi_h

  struct Cache {
    Mat<S> h, x;
    Mat<S> diff;  // (pairs, 3)
    Mat<S> d2;    // (pairs, 1)
    Mat<S> pre1, a1, pre2, m, q1, a2, gate, node_in, r1, ar;
  };

  EgnnLayer() = default;
  EgnnLayer(int hidden, Rng& rng);

  int hidden() const { return edge2.out(); }

  // Throws ShapeMismatch when h and x row counts differ.
  std::pair<Mat<S>, Mat<S>> forward(const Mat<S>& h, const Mat<S>& x, Cache& cache) const;
  // Returns (dh, dx).
  std::pair<Mat<S>, Mat<S>> backward(const Cache& cache, const Mat<S>& dh_next, const Mat<S>& dx_next,
                                     EgnnLayer& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

template <class S>
struct EncoderOutput {
  Mat<S> h;  // (points, d_model), cross-attention memory
  Mat<S> x;  // (points, 3)
};

template <class S>
struct Encoder {
  Linear<S> embed;  // 6 -> hidden, no bias
  std::vector<EgnnLayer<S>> layers;
  Linear<S> out;  // hidden -> d_model

  struct Cache {
    Mat<S> features;
    std::vector<typename EgnnLayer<S>::Cache> layers;
    Mat<S> h_last;
  };

  Encoder() = default;
  Encoder(int hidden, int d_model, int n_layers, Rng& rng);

  Mat<S> embed_features(const Mat<S>& features) const { return embed.forward(features); }
  EncoderOutput<S> forward(const Mat<S>& features, const Mat<S>& coords, Cache& cache) const;
  EncoderOutput<S> forward(const Mat<S>& features, const Mat<S>& coords) const;
  // Gradient of the memory only; coordinate outputs are not consumed downstream.
  void backward(const Cache& cache, const Mat<S>& dmemory, Encoder& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

// (points, 6) one-hot features and (points, 3) coordinates. Throws ShapeMismatch on empty graphs.
template <class S>
std::pair<Mat<S>, Mat<S>> graph_tensors(const chem::PharmacophoreGraph& g);

}  // namespace synthphore::nn
