//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "synthphore/train/checkpoint.hpp"

namespace synthphore::apps {

struct GenerationConfig {
  int max_steps = 4;
  bool mask_inapplicable = true;
  // Sampling for n-sample workflows: softmax(cos / temperature) over the top_k blocks.
  int top_k = 16;
  double temperature = 1.0;
};

// Trained model bound to its catalog and template set.
class Generator {
 public:
  // Throws CatalogMismatch.
  Generator(train::Checkpoint checkpoint, const synth::Catalog& catalog, const synth::TemplateSet& templates);

  const synth::Catalog& catalog() const { return catalog_; }
  const synth::TemplateSet& templates() const { return templates_; }
  const nn::Model<float>& model() const { return ckpt_.model; }
  const nn::RetrievalIndex<float>& index() const { return index_; }

  // Argmax decoding. Throws DeadEnd when step 0 is END.
  synth::SyntheticTree generate(const chem::PharmacophoreGraph& graph, const GenerationConfig& config) const;

  // n analog routes rooted at the seed molecule; decoding is primed with
  // [START, fp(seed)] and the memory is the seed's own pharmacophore graph.
  // Throws DeadEnd when no template applies to the seed with any candidate block.
  std::vector<synth::SyntheticTree> hit_expand(const chem::Molecule& seed, int n, const GenerationConfig& config,
                                               std::uint64_t seed_value) const;

  // k catalog block ids ranked by Z' cosine (self excluded, ties by id). Throws UnknownBlock.
  std::vector<int> nearest_blocks(int block_id, int k) const;
  double zprime_cosine(int block_a, int block_b) const;

 private:
  struct StepChoice {
    int reaction;
    int order;
    chem::Molecule product;
  };

  nn::Mat<float> memory_for(const chem::PharmacophoreGraph& graph) const;
  // Candidate index rows for the next block, best first; sampled head when rng is set.
  std::vector<std::size_t> rank_blocks(const nn::RowVec<float>& z, const GenerationConfig& config, Rng* rng,
                                       bool allow_end) const;
  std::optional<StepChoice> choose_reaction(const nn::RowVec<float>& z, std::size_t block_row,
                                            const chem::Molecule& current, const GenerationConfig& config) const;
  // Continues decoding from a primed token sequence.
  void decode_from(synth::SyntheticTree& tree, nn::TokenSequence& tokens, chem::Molecule current,
                   const nn::Mat<float>& memory, const GenerationConfig& config, Rng* rng) const;

  train::Checkpoint ckpt_;
  const synth::Catalog& catalog_;
  const synth::TemplateSet& templates_;
  nn::RetrievalIndex<float> index_;
};

}  // namespace synthphore::apps

namespace synthphore::apps {

// Same blocks, reactions, root and final product; reactant order is not compared.
bool same_route(const synth::SyntheticTree& a, const synth::SyntheticTree& b);

}  // namespace synthphore::apps
