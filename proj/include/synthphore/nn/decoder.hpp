//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "synthphore/chem/fingerprint.hpp"
#include "synthphore/nn/layers.hpp"

namespace synthphore::nn {

// On-bit indices of a fingerprint, ascending.
using SparseFp = std::vector<int>;

SparseFp sparse_bits(const chem::BitFingerprint& fp);

// Token 0 is the implicit START; fingerprints follow in order.
struct TokenSequence {
  std::vector<SparseFp> fps;

  std::size_t length() const { return fps.size() + 1; }
};

// Affine map of a binary vector stored as a (bits, dim) table: y = sum of the
// rows selected by the on-bits, plus bias.
template <class S>
struct SparseAffine {
  Mat<S> table;
  Mat<S> bias;

  SparseAffine() = default;
  SparseAffine(int bits, int dim, Rng& rng);

  Mat<S> forward(const std::vector<SparseFp>& rows) const;
  void backward(const std::vector<SparseFp>& rows, const Mat<S>& dy, SparseAffine& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

template <class S>
struct DecoderLayer {
  LayerNorm<S> ln1, ln2, ln3;
  MultiHeadAttention<S> self_attn, cross_attn;
  Linear<S> ff1, ff2;

  struct Cache {
    typename LayerNorm<S>::Cache n1, n2, n3;
    typename MultiHeadAttention<S>::Cache sa, ca;
    Mat<S> u, f1;
  };

  DecoderLayer() = default;
  DecoderLayer(int dim, int heads, int ff, Rng& rng);

  Mat<S> forward(const Mat<S>& x, const Mat<S>& memory, Cache& cache) const;
  // Returns dx and accumulates into dmemory.
  Mat<S> backward(const Cache& cache, const Mat<S>& dy, Mat<S>& dmemory, DecoderLayer& g) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

template <class S>
struct Decoder {
  SparseAffine<S> token_in;  // first layer of the token MLP
  Linear<S> token_out;       // second layer
  Mat<S> start_embed;        // (1, dim)
  Mat<S> end_embed;          // (1, dim), the END row of the retrieval index
  Mat<S> pe;                 // fixed sinusoidal table
  std::vector<DecoderLayer<S>> layers;
  LayerNorm<S> final_norm;
  SparseAffine<S> block_proj;  // Z' = W fp + b
  Linear<S> rxn_head;          // (2 dim) -> reactions, index 0 = NONE

  struct Cache {
    std::vector<SparseFp> fps;
    Mat<S> t1;
    std::vector<typename DecoderLayer<S>::Cache> layers;
    typename LayerNorm<S>::Cache final;
  };

  Decoder() = default;
  Decoder(int bits, int dim, int heads, int ff, int n_layers, int reactions, int max_positions, Rng& rng);

  int dim() const { return static_cast<int>(start_embed.cols()); }
  int reactions() const { return rxn_head.out(); }

  // START embedding or token MLP output, plus positional encoding.
  Mat<S> embed_sequence(const TokenSequence& seq) const;
  Mat<S> forward(const TokenSequence& seq, const Mat<S>& memory, Cache& cache) const;
  Mat<S> forward(const TokenSequence& seq, const Mat<S>& memory) const;
  // Returns dL/dmemory.
  Mat<S> backward(const Cache& cache, const Mat<S>& dz, Decoder& g) const;

  Mat<S> project_blocks(const std::vector<SparseFp>& fps) const { return block_proj.forward(fps); }
  RowVec<S> project_block(const SparseFp& fp) const { return block_proj.forward({fp}).row(0); }
  // Logits over the reaction vocabulary for rows concat(z, zprime).
  Mat<S> reaction_logits(const Mat<S>& z, const Mat<S>& zprime) const;

  void zero();
  void collect(const std::string& prefix, TensorList<S>& out);
};

inline constexpr int kEndBlock = -1;

// One Z' row per catalog block plus the END row (id kEndBlock, last).
template <class S>
struct RetrievalIndex {
  Mat<S> zprime;
  std::vector<int> ids;
  std::vector<S> norms;

  std::size_t size() const { return ids.size(); }
};

template <class S>
RetrievalIndex<S> build_index(const Decoder<S>& dec, const std::vector<SparseFp>& block_fps,
                              const std::vector<int>& block_ids);

// Cosine of z against every index row (zero rows give 0).
template <class S>
std::vector<S> index_cosines(const RowVec<S>& z, const RetrievalIndex<S>& index);

// Argmax cosine; ties go to the smallest id. Throws ZeroVector.
template <class S>
int select_block(const RowVec<S>& z, const RetrievalIndex<S>& index);

// Softmax over reaction logits for concat(z, zprime).
template <class S>
std::vector<double> predict_reaction(const Decoder<S>& dec, const RowVec<S>& z, const RowVec<S>& zprime);

}  // namespace synthphore::nn
