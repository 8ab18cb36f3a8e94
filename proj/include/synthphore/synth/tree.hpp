//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthphore/synth/catalog.hpp"
#include "synthphore/util/random.hpp"

namespace synthphore::synth {

// One linear-chain step. Step 0 carries a block (or nothing when the tree is
// rooted at an external molecule) and the no-reaction token. Later steps carry
// a template and, for bimolecular templates, the added block.
struct TreeStep {
  std::optional<int> block;
  int reaction = kNoReaction;
  // 0: (current product, block); 1: (block, current product).
  int order = 0;

  bool operator==(const TreeStep&) const = default;
};

struct SyntheticTree {
  std::vector<TreeStep> steps;
  std::vector<std::string> products;
  std::string final;
  // External starting molecule when step 0 has no block.
  std::optional<std::string> root;

  std::size_t depth() const { return steps.size(); }
  bool operator==(const SyntheticTree&) const = default;
};

// True iff every reactant matches its pattern in order. Throws ArityMismatch.
bool applicable(const ReactionTemplate& tpl, const std::vector<chem::Molecule>& reactants);
// Smallest canonical product. Throws ArityMismatch, NoProduct.
chem::Molecule apply(const ReactionTemplate& tpl, const std::vector<chem::Molecule>& reactants);

// Applies one step to the current product. Throws ArityMismatch, NoProduct, UnknownBlock.
chem::Molecule apply_step(const TreeStep& step, const chem::Molecule& current, const Catalog& catalog,
                          const TemplateSet& templates);

struct SamplerOptions {
  int max_depth = 4;
  int retries_per_step = 50;
  // Products above this heavy-atom count are rejected as draws.
  int max_heavy_atoms = 60;
};

// Precomputed per-(template, reactant slot) lists of catalog indices whose
// block matches that slot.
class CompatibilityIndex {
 public:
  CompatibilityIndex(const Catalog& catalog, const TemplateSet& templates);
  const std::vector<std::size_t>& blocks(std::size_t template_index, int slot) const;

 private:
  std::vector<std::array<std::vector<std::size_t>, 2>> lists_;
};

// Throws SamplingExhausted only when step 0 itself cannot be formed (never for
// a non-empty catalog); later exhaustion truncates the tree.
SyntheticTree sample_tree(const Catalog& catalog, const TemplateSet& templates, const CompatibilityIndex& index,
                          const SamplerOptions& options, Rng& rng);
SyntheticTree sample_tree(const Catalog& catalog, const TemplateSet& templates, int max_depth, Rng& rng);

// Extends an existing chain by one random step. Returns false when no
// applicable step is found within the retry budget.
bool extend_tree(SyntheticTree& tree, const Catalog& catalog, const TemplateSet& templates,
                 const CompatibilityIndex& index, const SamplerOptions& options, Rng& rng);

// Recomputes every product. Throws ReplayMismatch, NoProduct, UnknownBlock, ArityMismatch.
chem::Molecule replay(const SyntheticTree& tree, const Catalog& catalog, const TemplateSet& templates);
// Recomputes products and final from steps (and root) without comparing.
SyntheticTree rebuild(std::vector<TreeStep> steps, const std::optional<std::string>& root, const Catalog& catalog,
                      const TemplateSet& templates);

nlohmann::json tree_to_json(const SyntheticTree& tree);
// Throws ParseError on malformed objects.
SyntheticTree tree_from_json(const nlohmann::json& j);

}  // namespace synthphore::synth
