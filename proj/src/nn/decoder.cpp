//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/nn/decoder.hpp"

#include "synthphore/util/error.hpp"

namespace synthphore::nn {

SparseFp sparse_bits(const chem::BitFingerprint& fp) {
  const auto bits = fp.on_bits();
  return SparseFp(bits.begin(), bits.end());
}

template <class S>
SparseAffine<S>::SparseAffine(int bits, int dim, Rng& rng) : table(bits, dim), bias(1, dim) {
  // Scaled for a typical on-bit count rather than the full width.
  const double bound = 1.0 / std::sqrt(64.0);
  init_uniform(table, bound, rng);
  init_uniform(bias, bound, rng);
}

template <class S>
Mat<S> SparseAffine<S>::forward(const std::vector<SparseFp>& rows) const {
  Mat<S> y(static_cast<Eigen::Index>(rows.size()), table.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RowVec<S> acc = bias.row(0);
    for (int b : rows[r]) acc += table.row(b);
    y.row(static_cast<Eigen::Index>(r)) = acc;
  }
  return y;
}

template <class S>
void SparseAffine<S>::backward(const std::vector<SparseFp>& rows, const Mat<S>& dy, SparseAffine& g) const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = dy.row(static_cast<Eigen::Index>(r));
    g.bias.row(0) += row;
    for (int b : rows[r]) g.table.row(b) += row;
  }
}

template <class S>
void SparseAffine<S>::zero() {
  table.setZero();
  bias.setZero();
}

template <class S>
void SparseAffine<S>::collect(const std::string& prefix, TensorList<S>& out) {
  out.emplace_back(prefix + ".weight", &table);
  out.emplace_back(prefix + ".bias", &bias);
}

template <class S>
DecoderLayer<S>::DecoderLayer(int dim, int heads, int ff, Rng& rng)
    : ln1(dim),
      ln2(dim),
      ln3(dim),
      self_attn(dim, heads, rng),
      cross_attn(dim, heads, rng),
      ff1(dim, ff, true, rng),
      ff2(ff, dim, true, rng) {}

template <class S>
Mat<S> DecoderLayer<S>::forward(const Mat<S>& x, const Mat<S>& memory, Cache& c) const {
  const Mat<S> a = ln1.forward(x, c.n1);
  Mat<S> x1 = x + self_attn.forward(a, a, true, c.sa);
  const Mat<S> b = ln2.forward(x1, c.n2);
  Mat<S> x2 = x1 + cross_attn.forward(b, memory, false, c.ca);
  c.u = ln3.forward(x2, c.n3);
  c.f1 = ff1.forward(c.u);
  return x2 + ff2.forward(silu(c.f1));
}

template <class S>
Mat<S> DecoderLayer<S>::backward(const Cache& c, const Mat<S>& dy, Mat<S>& dmemory, DecoderLayer& g) const {
  // x3 = x2 + ff2(silu(ff1(ln3(x2))))
  const Mat<S> dact = ff2.backward(silu(c.f1), dy, g.ff2);
  const Mat<S> df1 = dact.cwiseProduct(silu_grad(c.f1));
  const Mat<S> du = ff1.backward(c.u, df1, g.ff1);
  Mat<S> dx2 = dy + ln3.backward(c.n3, du, g.ln3);
  // x2 = x1 + cross(ln2(x1), memory)
  auto [db, dmem] = cross_attn.backward(c.ca, dx2, g.cross_attn);
  dmemory += dmem;
  Mat<S> dx1 = dx2 + ln2.backward(c.n2, db, g.ln2);
  // x1 = x + self(ln1(x))
  auto [dq, dkv] = self_attn.backward(c.sa, dx1, g.self_attn);
  const Mat<S> da = dq + dkv;
  return dx1 + ln1.backward(c.n1, da, g.ln1);
}

template <class S>
void DecoderLayer<S>::zero() {
  ln1.zero();
  ln2.zero();
  ln3.zero();
  self_attn.zero();
  cross_attn.zero();
  ff1.zero();
  ff2.zero();
}

template <class S>
void DecoderLayer<S>::collect(const std::string& prefix, TensorList<S>& out) {
  ln1.collect(prefix + ".ln1", out);
  self_attn.collect(prefix + ".self_attn", out);
  ln2.collect(prefix + ".ln2", out);
  cross_attn.collect(prefix + ".cross_attn", out);
  ln3.collect(prefix + ".ln3", out);
  ff1.collect(prefix + ".ff.0", out);
  ff2.collect(prefix + ".ff.1", out);
}

template <class S>
Decoder<S>::Decoder(int bits, int dim, int heads, int ff, int n_layers, int reactions, int max_positions, Rng& rng)
    : token_in(bits, dim, rng),
      token_out(dim, dim, true, rng),
      start_embed(1, dim),
      end_embed(1, dim),
      pe(positional_encoding<S>(max_positions, dim)),
      final_norm(dim),
      block_proj(bits, dim, rng),
      rxn_head(2 * dim, reactions, true, rng) {
  if (dim % heads != 0) throw ShapeMismatch("d_model must be divisible by the head count");
  init_uniform(start_embed, 1.0, rng);
  init_uniform(end_embed, 1.0, rng);
  for (int l = 0; l < n_layers; ++l) layers.emplace_back(dim, heads, ff, rng);
}

template <class S>
Mat<S> Decoder<S>::embed_sequence(const TokenSequence& seq) const {
  const auto T = static_cast<Eigen::Index>(seq.length());
  if (T > pe.rows()) throw ShapeMismatch("token sequence longer than the positional table");
  Mat<S> x(T, dim());
  x.row(0) = start_embed.row(0);
  if (!seq.fps.empty()) x.bottomRows(T - 1) = token_out.forward(silu(token_in.forward(seq.fps)));
  return x + pe.topRows(T);
}

template <class S>
Mat<S> Decoder<S>::forward(const TokenSequence& seq, const Mat<S>& memory, Cache& cache) const {
  if (memory.rows() == 0) throw ShapeMismatch("decoder memory is empty");
  if (memory.cols() != dim()) throw ShapeMismatch("memory width differs from d_model");
  const auto T = static_cast<Eigen::Index>(seq.length());
  if (T > pe.rows()) throw ShapeMismatch("token sequence longer than the positional table");
  cache.fps = seq.fps;
  Mat<S> x(T, dim());
  x.row(0) = start_embed.row(0);
  if (!seq.fps.empty()) {
    cache.t1 = token_in.forward(seq.fps);
    x.bottomRows(T - 1) = token_out.forward(silu(cache.t1));
  }
  x += pe.topRows(T);
  cache.layers.assign(layers.size(), {});
  for (std::size_t l = 0; l < layers.size(); ++l) x = layers[l].forward(x, memory, cache.layers[l]);
  return final_norm.forward(x, cache.final);
}

template <class S>
Mat<S> Decoder<S>::forward(const TokenSequence& seq, const Mat<S>& memory) const {
  Cache cache;
  return forward(seq, memory, cache);
}

template <class S>
Mat<S> Decoder<S>::backward(const Cache& c, const Mat<S>& dz, Decoder& g) const {
  Mat<S> dx = final_norm.backward(c.final, dz, g.final_norm);
  Mat<S> dmemory;
  for (std::size_t l = layers.size(); l-- > 0;) {
    if (dmemory.size() == 0) dmemory = Mat<S>::Zero(c.layers[l].ca.kv_in.rows(), dim());
    dx = layers[l].backward(c.layers[l], dx, dmemory, g.layers[l]);
  }
  g.start_embed.row(0) += dx.row(0);
  const Eigen::Index T = dx.rows();
  if (T > 1) {
    const Mat<S> dtok = dx.bottomRows(T - 1);
    const Mat<S> da = token_out.backward(silu(c.t1), dtok, g.token_out);
    token_in.backward(c.fps, da.cwiseProduct(silu_grad(c.t1)), g.token_in);
  }
  return dmemory;
}

template <class S>
Mat<S> Decoder<S>::reaction_logits(const Mat<S>& z, const Mat<S>& zprime) const {
  Mat<S> in(z.rows(), 2 * dim());
  in << z, zprime;
  return rxn_head.forward(in);
}

template <class S>
void Decoder<S>::zero() {
  token_in.zero();
  token_out.zero();
  start_embed.setZero();
  end_embed.setZero();
  for (auto& l : layers) l.zero();
  final_norm.zero();
  block_proj.zero();
  rxn_head.zero();
}

template <class S>
void Decoder<S>::collect(const std::string& prefix, TensorList<S>& out) {
  token_in.collect(prefix + ".token_mlp.0", out);
  token_out.collect(prefix + ".token_mlp.1", out);
  out.emplace_back(prefix + ".start_embed", &start_embed);
  out.emplace_back(prefix + ".end_embed", &end_embed);
  for (std::size_t l = 0; l < layers.size(); ++l) layers[l].collect(prefix + ".layers." + std::to_string(l), out);
  final_norm.collect(prefix + ".final_norm", out);
  block_proj.collect(prefix + ".block_proj", out);
  rxn_head.collect(prefix + ".rxn_head", out);
}

template <class S>
RetrievalIndex<S> build_index(const Decoder<S>& dec, const std::vector<SparseFp>& block_fps,
                              const std::vector<int>& block_ids) {
  if (block_fps.size() != block_ids.size()) throw ShapeMismatch("fingerprint and id counts differ");
  RetrievalIndex<S> index;
  const auto n = static_cast<Eigen::Index>(block_fps.size());
  index.zprime.resize(n + 1, dec.dim());
  if (n > 0) index.zprime.topRows(n) = dec.project_blocks(block_fps);
  index.zprime.row(n) = dec.end_embed.row(0);
  index.ids = block_ids;
  index.ids.push_back(kEndBlock);
  index.norms.resize(index.ids.size());
  for (Eigen::Index r = 0; r <= n; ++r) index.norms[static_cast<std::size_t>(r)] = index.zprime.row(r).norm();
  return index;
}

template <class S>
std::vector<S> index_cosines(const RowVec<S>& z, const RetrievalIndex<S>& index) {
  const S zn = z.norm();
  const Mat<S> dots = index.zprime * z.transpose();
  std::vector<S> out(index.size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    const S denom = zn * index.norms[r];
    out[r] = denom > S(0) ? dots(static_cast<Eigen::Index>(r), 0) / denom : S(0);
  }
  return out;
}

template <class S>
int select_block(const RowVec<S>& z, const RetrievalIndex<S>& index) {
  if (index.size() == 0) throw ShapeMismatch("retrieval index is empty");
  if (!(z.norm() > S(0))) throw ZeroVector("cannot rank blocks for a zero vector");
  const auto cos = index_cosines(z, index);
  std::size_t best = 0;
  for (std::size_t r = 1; r < cos.size(); ++r) {
    if (cos[r] > cos[best] || (cos[r] == cos[best] && index.ids[r] < index.ids[best])) best = r;
  }
  return index.ids[best];
}

template <class S>
std::vector<double> predict_reaction(const Decoder<S>& dec, const RowVec<S>& z, const RowVec<S>& zprime) {
  const Mat<S> logits = dec.reaction_logits(z, zprime);
  const Mat<S> probs = softmax_rows(logits);
  std::vector<double> out(static_cast<std::size_t>(probs.cols()));
  for (Eigen::Index k = 0; k < probs.cols(); ++k) out[static_cast<std::size_t>(k)] = static_cast<double>(probs(0, k));
  return out;
}

template struct SparseAffine<float>;
template struct SparseAffine<double>;
template struct DecoderLayer<float>;
template struct DecoderLayer<double>;
template struct Decoder<float>;
template struct Decoder<double>;
template RetrievalIndex<float> build_index(const Decoder<float>&, const std::vector<SparseFp>&, const std::vector<int>&);
template RetrievalIndex<double> build_index(const Decoder<double>&, const std::vector<SparseFp>&, const std::vector<int>&);
template std::vector<float> index_cosines(const RowVec<float>&, const RetrievalIndex<float>&);
template std::vector<double> index_cosines(const RowVec<double>&, const RetrievalIndex<double>&);
template int select_block(const RowVec<float>&, const RetrievalIndex<float>&);
template int select_block(const RowVec<double>&, const RetrievalIndex<double>&);
template std::vector<double> predict_reaction(const Decoder<float>&, const RowVec<float>&, const RowVec<float>&);
template std::vector<double> predict_reaction(const Decoder<double>&, const RowVec<double>&, const RowVec<double>&);

}  // namespace synthphore::nn
