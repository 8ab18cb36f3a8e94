//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/nn/egnn.hpp"

#include "synthphore/util/error.hpp"

namespace synthphore::nn {

namespace {

constexpr double kCoordGain = 1e-3;
constexpr double kDistanceGain = 1e-2;

}  // namespace

template <class S>
EgnnLayer<S>::EgnnLayer(int hidden, Rng& rng)
    : edge1(2 * hidden + 2, hidden, true, rng),
      edge2(hidden, hidden, true, rng),
      coord1(hidden, hidden, true, rng),
      coord2(hidden, 1, false, rng, kCoordGain),
      node1(2 * hidden, hidden, true, rng),
      node2(hidden, hidden, true, rng) {
  // Squared distances enter unscaled; start their weights small.
  edge1.weight.col(2 * hidden) *= static_cast<S>(kDistanceGain);
}

template <class S>
std::pair<Mat<S>, Mat<S>> EgnnLayer<S>::forward(const Mat<S>& h, const Mat<S>& x, Cache& c) const {
  if (h.rows() != x.rows() || x.cols() != 3 || h.cols() != hidden()) {
    throw ShapeMismatch("egnn layer: h and x disagree in shape");
  }
  const Eigen::Index n = h.rows();
  const int H = hidden();
  const Eigen::Index pairs = n * (n - 1);
  c.h = h;
  c.x = x;
  const Mat<S> hA = h * edge1.weight.leftCols(H).transpose();
  const Mat<S> hB = h * edge1.weight.middleCols(H, H).transpose();
  const RowVec<S> w_d = edge1.weight.col(2 * H).transpose();
  const RowVec<S> w_e = edge1.weight.col(2 * H + 1).transpose();
  const RowVec<S> base = w_e + edge1.bias.row(0);

  c.diff.resize(pairs, 3);
  c.d2.resize(pairs, 1);
  c.pre1.resize(pairs, H);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      c.diff.row(p) = x.row(i) - x.row(j);
      c.d2(p, 0) = c.diff.row(p).squaredNorm();
      c.pre1.row(p) = hA.row(i) + hB.row(j) + c.d2(p, 0) * w_d + base;
      ++p;
    }
  }
  c.a1 = silu(c.pre1);
  c.pre2 = edge2.forward(c.a1);
  c.m = silu(c.pre2);
  c.q1 = coord1.forward(c.m);
  c.a2 = silu(c.q1);
  c.gate = coord2.forward(c.a2);

  Mat<S> x_next = x;
  Mat<S> agg = Mat<S>::Zero(n, H);
  p = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      x_next.row(i) += c.diff.row(p) * c.gate(p, 0);
      agg.row(i) += c.m.row(p);
      ++p;
    }
  }
  c.node_in.resize(n, 2 * H);
  c.node_in << h, agg;
  c.r1 = node1.forward(c.node_in);
  c.ar = silu(c.r1);
  Mat<S> h_next = node2.forward(c.ar);
  return {std::move(h_next), std::move(x_next)};
}

template <class S>
std::pair<Mat<S>, Mat<S>> EgnnLayer<S>::backward(const Cache& c, const Mat<S>& dh_next, const Mat<S>& dx_next,
                                                 EgnnLayer& g) const {
  const Eigen::Index n = c.h.rows();
  const int H = hidden();
  const Eigen::Index pairs = n * (n - 1);

  const Mat<S> dar = node2.backward(c.ar, dh_next, g.node2);
  const Mat<S> dr1 = dar.cwiseProduct(silu_grad(c.r1));
  const Mat<S> dnode_in = node1.backward(c.node_in, dr1, g.node1);
  Mat<S> dh = dnode_in.leftCols(H);
  const Mat<S> dagg = dnode_in.rightCols(H);
  Mat<S> dx = dx_next;

  Mat<S> dm(pairs, H);
  Mat<S> dgate(pairs, 1);
  Mat<S> ddiff(pairs, 3);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      dm.row(p) = dagg.row(i);
      dgate(p, 0) = dx_next.row(i).dot(c.diff.row(p));
      ddiff.row(p) = dx_next.row(i) * c.gate(p, 0);
      ++p;
    }
  }
  if (pairs > 0) {
    const Mat<S> da2 = coord2.backward(c.a2, dgate, g.coord2);
    const Mat<S> dq1 = da2.cwiseProduct(silu_grad(c.q1));
    dm += coord1.backward(c.m, dq1, g.coord1);
    const Mat<S> dpre2 = dm.cwiseProduct(silu_grad(c.pre2));
    const Mat<S> da1 = edge2.backward(c.a1, dpre2, g.edge2);
    const Mat<S> dpre1 = da1.cwiseProduct(silu_grad(c.pre1));

    const RowVec<S> colsum = dpre1.colwise().sum();
    g.edge1.bias.row(0) += colsum;
    g.edge1.weight.col(2 * H + 1) += colsum.transpose();
    g.edge1.weight.col(2 * H) += dpre1.transpose() * c.d2;
    const Mat<S> dd2 = dpre1 * edge1.weight.col(2 * H);

    Mat<S> dhA = Mat<S>::Zero(n, H);
    Mat<S> dhB = Mat<S>::Zero(n, H);
    p = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        dhA.row(i) += dpre1.row(p);
        dhB.row(j) += dpre1.row(p);
        const RowVec<S> dd = ddiff.row(p) + S(2) * dd2(p, 0) * c.diff.row(p);
        dx.row(i) += dd;
        dx.row(j) -= dd;
        ++p;
      }
    }
    g.edge1.weight.leftCols(H) += dhA.transpose() * c.h;
    g.edge1.weight.middleCols(H, H) += dhB.transpose() * c.h;
    dh += dhA * edge1.weight.leftCols(H) + dhB * edge1.weight.middleCols(H, H);
  }
  return {std::move(dh), std::move(dx)};
}

template <class S>
void EgnnLayer<S>::zero() {
  edge1.zero();
  edge2.zero();
  coord1.zero();
  coord2.zero();
  node1.zero();
  node2.zero();
}

template <class S>
void EgnnLayer<S>::collect(const std::string& prefix, TensorList<S>& out) {
  edge1.collect(prefix + ".phi_e.0", out);
  edge2.collect(prefix + ".phi_e.1", out);
  coord1.collect(prefix + ".phi_x.0", out);
  coord2.collect(prefix + ".phi_x.1", out);
  node1.collect(prefix + ".phi_h.0", out);
  node2.collect(prefix + ".phi_h.1", out);
}

template <class S>
Encoder<S>::Encoder(int hidden, int d_model, int n_layers, Rng& rng)
    : embed(chem::kFeatureClasses, hidden, false, rng), out(hidden, d_model, true, rng) {
  for (int l = 0; l < n_layers; ++l) layers.emplace_back(hidden, rng);
}

template <class S>
EncoderOutput<S> Encoder<S>::forward(const Mat<S>& features, const Mat<S>& coords, Cache& cache) const {
  if (features.rows() == 0) throw ShapeMismatch("encoder input has no points");
  if (features.rows() != coords.rows()) throw ShapeMismatch("features and coordinates disagree");
  cache.features = features;
  cache.layers.assign(layers.size(), {});
  Mat<S> h = embed.forward(features);
  Mat<S> x = coords;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto [hn, xn] = layers[l].forward(h, x, cache.layers[l]);
    h = std::move(hn);
    x = std::move(xn);
  }
  cache.h_last = h;
  return {out.forward(h), std::move(x)};
}

template <class S>
EncoderOutput<S> Encoder<S>::forward(const Mat<S>& features, const Mat<S>& coords) const {
  Cache cache;
  return forward(features, coords, cache);
}

template <class S>
void Encoder<S>::backward(const Cache& cache, const Mat<S>& dmemory, Encoder& g) const {
  Mat<S> dh = out.backward(cache.h_last, dmemory, g.out);
  Mat<S> dx = Mat<S>::Zero(cache.features.rows(), 3);
  for (std::size_t l = layers.size(); l-- > 0;) {
    auto [dh_prev, dx_prev] = layers[l].backward(cache.layers[l], dh, dx, g.layers[l]);
    dh = std::move(dh_prev);
    dx = std::move(dx_prev);
  }
  embed.backward(cache.features, dh, g.embed);
}

template <class S>
void Encoder<S>::zero() {
  embed.zero();
  for (auto& l : layers) l.zero();
  out.zero();
}

template <class S>
void Encoder<S>::collect(const std::string& prefix, TensorList<S>& list) {
  embed.collect(prefix + ".embed", list);
  for (std::size_t l = 0; l < layers.size(); ++l) layers[l].collect(prefix + ".layers." + std::to_string(l), list);
  out.collect(prefix + ".out", list);
}

template <class S>
std::pair<Mat<S>, Mat<S>> graph_tensors(const chem::PharmacophoreGraph& g) {
  if (g.points.empty()) throw ShapeMismatch("pharmacophore graph has no points");
  const auto n = static_cast<Eigen::Index>(g.points.size());
  Mat<S> f = Mat<S>::Zero(n, chem::kFeatureClasses);
  Mat<S> x(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = g.points[static_cast<std::size_t>(i)];
    f(i, static_cast<int>(p.cls)) = S(1);
    for (int k = 0; k < 3; ++k) x(i, k) = static_cast<S>(p.xyz[static_cast<std::size_t>(k)]);
  }
  return {std::move(f), std::move(x)};
}

template struct EgnnLayer<float>;
template struct EgnnLayer<double>;
template struct Encoder<float>;
template struct Encoder<double>;
template std::pair<Mat<float>, Mat<float>> graph_tensors<float>(const chem::PharmacophoreGraph&);
template std::pair<Mat<double>, Mat<double>> graph_tensors<double>(const chem::PharmacophoreGraph&);

}  // namespace synthphore::nn
