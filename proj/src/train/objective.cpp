//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/train/objective.hpp"

#include "synthphore/util/error.hpp"

namespace synthphore::train {

Example make_example(const synth::TrainingTriple& triple, const synth::Catalog& catalog, int fp_radius) {
  const auto& tree = triple.tree;
  if (tree.root) throw ShapeMismatch("rooted trees are not training targets");
  if (tree.steps.empty() || tree.products.size() != tree.steps.size()) throw ShapeMismatch("malformed tree");
  Example ex;
  ex.graph = triple.graph;
  for (std::size_t k = 0; k < tree.steps.size(); ++k) {
    const auto& step = tree.steps[k];
    if (!step.block) throw ShapeMismatch("steps without a block cannot be supervised");
    const auto& block = catalog.by_id(*step.block);
    ex.block_ids.push_back(block.id);
    ex.block_fps.push_back(fp_radius == synth::kBlockFingerprintRadius
                               ? nn::sparse_bits(block.fp)
                               : nn::sparse_bits(chem::morgan_fp(block.mol, fp_radius)));
    ex.reactions.push_back(k == 0 ? synth::kNoReaction : step.reaction);
    ex.tokens.fps.push_back(nn::sparse_bits(chem::morgan_fp(chem::canonicalize(tree.products[k]), fp_radius)));
  }
  return ex;
}

std::vector<Example> make_examples(const std::vector<synth::TrainingTriple>& triples, const synth::Catalog& catalog,
                                   int fp_radius) {
  std::vector<Example> out;
  out.reserve(triples.size());
  for (const auto& t : triples) out.push_back(make_example(t, catalog, fp_radius));
  return out;
}

std::size_t Batch::block_steps() const {
  std::size_t n = 0;
  for (const auto* e : examples) n += e->block_ids.size() + 1;
  return n;
}

std::size_t Batch::reaction_steps() const {
  std::size_t n = 0;
  for (const auto* e : examples) n += e->reactions.size();
  return n;
}

namespace {

template <class S>
S cosine(const nn::RowVec<S>& a, const nn::RowVec<S>& b) {
  const S na = a.norm();
  const S nb = b.norm();
  if (!(na > S(0)) || !(nb > S(0))) throw ZeroVector("zero vector in block loss");
  return a.dot(b) / (na * nb);
}

// d cos(a, b) / d a
template <class S>
nn::RowVec<S> cosine_grad(const nn::RowVec<S>& a, const nn::RowVec<S>& b) {
  const S na = a.norm();
  const S nb = b.norm();
  const S c = a.dot(b) / (na * nb);
  return b / (na * nb) - c * a / (na * na);
}

}  // namespace

double block_loss(const Mat<double>& pred, const Mat<double>& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) throw ShapeMismatch("block loss shapes differ");
  if (pred.rows() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index r = 0; r < pred.rows(); ++r) sum += 1.0 - cosine<double>(pred.row(r), target.row(r));
  return sum / static_cast<double>(pred.rows());
}

double rxn_loss(const Mat<double>& logits, const std::vector<int>& targets) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size()) throw ShapeMismatch("reaction loss shapes differ");
  if (targets.empty()) return 0.0;
  double sum = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double m = logits.row(r).maxCoeff();
    const double lse = m + std::log((logits.row(r).array() - m).exp().sum());
    sum += lse - logits(r, targets[static_cast<std::size_t>(r)]);
  }
  return sum / static_cast<double>(targets.size());
}

template <class S>
LossReport total_loss(const nn::Model<S>& model, const Batch& batch, std::type_identity_t<nn::Model<S>>* grads,
                      const LossOptions& options) {
  const auto n_block = static_cast<double>(batch.block_steps());
  const auto n_rxn = static_cast<double>(batch.reaction_steps());
  const auto& dec = model.decoder;
  double lb = 0.0, lr = 0.0;
  for (const Example* ex : batch.examples) {
    const auto L = static_cast<Eigen::Index>(ex->block_ids.size());
    const auto [features, coords] = nn::graph_tensors<S>(ex->graph);
    typename nn::Encoder<S>::Cache enc_cache;
    const auto enc = model.encoder.forward(features, coords, enc_cache);
    typename nn::Decoder<S>::Cache dec_cache;
    const Mat<S> Z = dec.forward(ex->tokens, enc.h, dec_cache);  // (L + 1, d)

    Mat<S> targets(L + 1, dec.dim());
    targets.topRows(L) = dec.project_blocks(ex->block_fps);
    targets.row(L) = dec.end_embed.row(0);

    Mat<S> dZ = Mat<S>::Zero(L + 1, dec.dim());
    Mat<S> dT = Mat<S>::Zero(L + 1, dec.dim());
    for (Eigen::Index p = 0; p <= L; ++p) {
      const nn::RowVec<S> z = Z.row(p);
      const nn::RowVec<S> t = targets.row(p);
      lb += (1.0 - static_cast<double>(cosine<S>(z, t))) / n_block;
      if (grads) {
        dZ.row(p) -= cosine_grad<S>(z, t) / static_cast<S>(n_block);
        if (!options.detach_block_targets) dT.row(p) -= cosine_grad<S>(t, z) / static_cast<S>(n_block);
      }
    }

    const Mat<S> zp = targets.topRows(L);
    const Mat<S> logits = dec.reaction_logits(Z.topRows(L), zp);
    const Mat<S> probs = nn::softmax_rows(logits);
    Mat<S> dlogits = probs;
    for (Eigen::Index p = 0; p < L; ++p) {
      const int target = ex->reactions[static_cast<std::size_t>(p)];
      const S m = logits.row(p).maxCoeff();
      const double lse = static_cast<double>(m) + std::log(static_cast<double>((logits.row(p).array() - m).exp().sum()));
      lr += (lse - static_cast<double>(logits(p, target))) / n_rxn;
      dlogits(p, target) -= S(1);
    }
    if (!grads) continue;
    dlogits /= static_cast<S>(n_rxn);
    Mat<S> in(L, 2 * dec.dim());
    in << Z.topRows(L), zp;
    const Mat<S> din = dec.rxn_head.backward(in, dlogits, grads->decoder.rxn_head);
    dZ.topRows(L) += din.leftCols(dec.dim());
    dT.topRows(L) += din.rightCols(dec.dim());
    dec.block_proj.backward(ex->block_fps, dT.topRows(L), grads->decoder.block_proj);
    grads->decoder.end_embed.row(0) += dT.row(L);

    const Mat<S> dmemory = dec.backward(dec_cache, dZ, grads->decoder);
    model.encoder.backward(enc_cache, dmemory, grads->encoder);
  }
  return {lb, lr};
}

template <class S>
Accuracy evaluate(const nn::Model<S>& model, const std::vector<Example>& examples, const synth::Catalog& catalog) {
  std::vector<SparseFp> fps;
  std::vector<int> ids;
  for (const auto& b : catalog.blocks()) {
    fps.push_back(nn::sparse_bits(b.fp));
    ids.push_back(b.id);
  }
  const auto index = nn::build_index(model.decoder, fps, ids);
  std::size_t block_total = 0, block_hit = 0, rxn_total = 0, rxn_hit = 0;
  for (const auto& ex : examples) {
    const auto L = static_cast<Eigen::Index>(ex.block_ids.size());
    const auto [features, coords] = nn::graph_tensors<S>(ex.graph);
    const auto enc = model.encoder.forward(features, coords);
    const Mat<S> Z = model.decoder.forward(ex.tokens, enc.h);
    for (Eigen::Index p = 0; p <= L; ++p) {
      const int want = p < L ? ex.block_ids[static_cast<std::size_t>(p)] : nn::kEndBlock;
      block_hit += nn::select_block<S>(Z.row(p), index) == want;
      ++block_total;
    }
    if (L > 1) {
      const Mat<S> logits = model.decoder.reaction_logits(Z.topRows(L), model.decoder.project_blocks(ex.block_fps));
      for (Eigen::Index p = 1; p < L; ++p) {
        Eigen::Index best;
        logits.row(p).maxCoeff(&best);
        rxn_hit += static_cast<int>(best) == ex.reactions[static_cast<std::size_t>(p)];
        ++rxn_total;
      }
    }
  }
  Accuracy acc;
  acc.block = block_total ? static_cast<double>(block_hit) / static_cast<double>(block_total) : 1.0;
  acc.reaction = rxn_total ? static_cast<double>(rxn_hit) / static_cast<double>(rxn_total) : 1.0;
  return acc;
}

template LossReport total_loss(const nn::Model<float>&, const Batch&, nn::Model<float>*, const LossOptions&);
template LossReport total_loss(const nn::Model<double>&, const Batch&, nn::Model<double>*, const LossOptions&);
template Accuracy evaluate(const nn::Model<float>&, const std::vector<Example>&, const synth::Catalog&);
template Accuracy evaluate(const nn::Model<double>&, const std::vector<Example>&, const synth::Catalog&);

}  // namespace synthphore::train
