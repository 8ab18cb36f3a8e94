//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <type_traits>
#include <vector>

#include "synthphore/nn/model.hpp"
#include "synthphore/synth/dataset.hpp"

namespace synthphore::train {

using nn::Mat;
using nn::SparseFp;

// Teacher-forced view of one triple. Position k < L (L = tree depth) reads
// START (k = 0) or fp(product k-1) and targets (block k, reaction k); position
// L targets END and has no reaction target.
struct Example {
  chem::PharmacophoreGraph graph;
  nn::TokenSequence tokens;
  std::vector<int> block_ids;       // length L
  std::vector<SparseFp> block_fps;  // length L
  std::vector<int> reactions;       // length L, NONE (0) at position 0
};

// Throws UnknownBlock; ShapeMismatch for unimolecular steps (no block to retrieve)
// or rooted trees.
Example make_example(const synth::TrainingTriple& triple, const synth::Catalog& catalog, int fp_radius = 3);
std::vector<Example> make_examples(const std::vector<synth::TrainingTriple>& triples, const synth::Catalog& catalog,
                                   int fp_radius = 3);

// A ragged batch: each example keeps its own length, so padded positions
// never exist and contribute nothing.
struct Batch {
  std::vector<const Example*> examples;

  std::size_t block_steps() const;
  std::size_t reaction_steps() const;
};

// Mean over rows of 1 - cos(pred_r, target_r). Throws ZeroVector.
double block_loss(const Mat<double>& pred, const Mat<double>& target);
// Mean cross-entropy of rows of logits against class targets.
double rxn_loss(const Mat<double>& logits, const std::vector<int>& targets);

struct LossOptions {
  // Treat Z' targets in the block loss as constants.
  bool detach_block_targets = true;
};

struct LossReport {
  double block = 0.0;  // L_B
  double rxn = 0.0;    // L_rxn
  double total() const { return block + rxn; }
};

// L = L_B + L_rxn over the batch. When grads is non-null, accumulates dL/dparams.
template <class S>
LossReport total_loss(const nn::Model<S>& model, const Batch& batch, std::type_identity_t<nn::Model<S>>* grads,
                      const LossOptions& options = {});

struct Accuracy {
  double block = 0.0;     // top-1 retrieval over all positions incl. END
  double reaction = 0.0;  // argmax over positions >= 1 (1.0 when there are none)
};

// Teacher-forced accuracies against a freshly built retrieval index.
template <class S>
Accuracy evaluate(const nn::Model<S>& model, const std::vector<Example>& examples, const synth::Catalog& catalog);

}  // namespace synthphore::train
