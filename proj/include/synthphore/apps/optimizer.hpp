//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "synthphore/apps/generator.hpp"

namespace synthphore::apps {

// Higher is better.
struct Scorer {
  std::string name;
  std::function<double(const chem::Molecule&)> fn;
};

// "neg_logp", "logp", "qed", "neg_mw". Throws ParseError.
Scorer builtin_scorer(const std::string& name);

struct GaConfig {
  int cycles = 3;
  int population = 30;  // children per cycle
  int topk_parents = 10;
  int neighbor_k = 8;
  std::uint64_t seed = 0;
};

struct Candidate {
  int id = 0;
  synth::SyntheticTree tree;
  double score = 0.0;
};

struct LineageEvent {
  int cycle;
  int parent_id;
  int child_id;
  int mutated_step;
  int old_block;
  int new_block;
  int reaction;  // at the mutated step after re-derivation; NONE is written as null
  double score;
};

struct GaResult {
  std::vector<Candidate> elites;  // best first
  std::vector<LineageEvent> lineage;
  std::vector<double> best_per_cycle;  // index 0 is the seed population
};

// Block-swap mutation in Z' neighbourhoods with elitist top-k selection.
// Throws ExtinctPopulation when there are no valid seeds or a cycle leaves nothing.
GaResult optimize(const Generator& gen, const std::vector<synth::SyntheticTree>& seeds, const Scorer& scorer,
                  const GaConfig& config);

// Applies one block swap to a tree and re-derives reactions downstream.
// Returns nullopt when the altered route admits no applicable reaction.
std::optional<synth::SyntheticTree> mutate_tree(const synth::SyntheticTree& tree, std::size_t step, int new_block,
                                                const synth::Catalog& catalog, const synth::TemplateSet& templates,
                                                Rng& rng);

void write_lineage_jsonl(std::ostream& os, const std::vector<LineageEvent>& events);

}  // namespace synthphore::apps
