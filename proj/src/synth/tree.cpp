//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/synth/tree.hpp"

#include "synthphore/util/error.hpp"

namespace synthphore::synth {

namespace {

std::vector<const chem::MolGraph*> graphs(const std::vector<chem::Molecule>& mols) {
  std::vector<const chem::MolGraph*> out;
  out.reserve(mols.size());
  for (const auto& m : mols) out.push_back(m.handle.get());
  return out;
}

void check_arity(const ReactionTemplate& tpl, std::size_t n) {
  if (static_cast<int>(n) != tpl.arity) {
    throw ArityMismatch("template " + std::to_string(tpl.id) + " expects " + std::to_string(tpl.arity) +
                        " reactants, got " + std::to_string(n));
  }
}

std::vector<chem::Molecule> ordered(const chem::Molecule& current, const chem::Molecule& block, int order) {
  if (order == 0) return {current, block};
  return {block, current};
}

}  // namespace

bool applicable(const ReactionTemplate& tpl, const std::vector<chem::Molecule>& reactants) {
  check_arity(tpl, reactants.size());
  return tpl.rxn.matches(graphs(reactants));
}

chem::Molecule apply(const ReactionTemplate& tpl, const std::vector<chem::Molecule>& reactants) {
  check_arity(tpl, reactants.size());
  const auto products = tpl.rxn.run(graphs(reactants));
  if (products.empty()) throw NoProduct("template " + std::to_string(tpl.id) + " produced no product");
  return chem::canonicalize(products.front());
}

chem::Molecule apply_step(const TreeStep& step, const chem::Molecule& current, const Catalog& catalog,
                          const TemplateSet& templates) {
  const ReactionTemplate& tpl = templates.by_id(step.reaction);
  if (tpl.arity == 1) {
    if (step.block) throw ArityMismatch("unimolecular step carries a block");
    return synth::apply(tpl, {current});
  }
  if (!step.block) throw ArityMismatch("bimolecular step without a block");
  return synth::apply(tpl, ordered(current, catalog.by_id(*step.block).mol, step.order));
}

CompatibilityIndex::CompatibilityIndex(const Catalog& catalog, const TemplateSet& templates) {
  lists_.resize(templates.size());
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& rxn = templates[t].rxn;
    for (std::size_t slot = 0; slot < rxn.arity(); ++slot) {
      for (std::size_t b = 0; b < catalog.size(); ++b) {
        if (rxn.reactant(slot).has_match(catalog[b].mol.graph())) lists_[t][slot].push_back(b);
      }
    }
  }
}

const std::vector<std::size_t>& CompatibilityIndex::blocks(std::size_t template_index, int slot) const {
  return lists_.at(template_index).at(static_cast<std::size_t>(slot));
}

bool extend_tree(SyntheticTree& tree, const Catalog& catalog, const TemplateSet& templates,
                 const CompatibilityIndex& index, const SamplerOptions& options, Rng& rng) {
  const chem::Molecule current = chem::canonicalize(tree.final);
  // (template index, slot taken by the current product) pairs that can fire.
  std::vector<std::pair<std::size_t, int>> options_list;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const ReactionTemplate& tpl = templates[t];
    if (tpl.arity == 1) {
      if (tpl.rxn.reactant(0).has_match(current.graph())) options_list.emplace_back(t, 0);
      continue;
    }
    // Product-first order is preferred; the swapped order is the fallback.
    for (int o = 0; o < 2; ++o) {
      if (tpl.rxn.reactant(static_cast<std::size_t>(o)).has_match(current.graph()) && !index.blocks(t, 1 - o).empty()) {
        options_list.emplace_back(t, o);
        break;
      }
    }
  }
  if (options_list.empty()) return false;
  for (int attempt = 0; attempt < options.retries_per_step; ++attempt) {
    const auto [t, order] = options_list[uniform_index(rng, options_list.size())];
    const ReactionTemplate& tpl = templates[t];
    TreeStep step;
    step.reaction = tpl.id;
    std::vector<chem::Molecule> reactants;
    if (tpl.arity == 1) {
      reactants = {current};
    } else {
      const auto& candidates = index.blocks(t, 1 - order);
      const BuildingBlock& block = catalog[candidates[uniform_index(rng, candidates.size())]];
      step.block = block.id;
      step.order = order;
      reactants = ordered(current, block.mol, order);
    }
    chem::Molecule product;
    try {
      product = synth::apply(tpl, reactants);
    } catch (const NoProduct&) {
      continue;
    } catch (const ParseError&) {
      continue;
    }
    if (static_cast<int>(product.graph().atom_count()) > options.max_heavy_atoms) continue;
    if (product.smiles == current.smiles) continue;
    tree.steps.push_back(step);
    tree.products.push_back(product.smiles);
    tree.final = product.smiles;
    return true;
  }
  return false;
}

SyntheticTree sample_tree(const Catalog& catalog, const TemplateSet& templates, const CompatibilityIndex& index,
                          const SamplerOptions& options, Rng& rng) {
  if (options.max_depth < 1) throw SamplingExhausted("max_depth must be at least 1");
  if (catalog.size() == 0) throw EmptyCatalog("cannot sample from an empty catalog");
  const int depth = 1 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(options.max_depth)));
  const BuildingBlock& first = catalog[uniform_index(rng, catalog.size())];
  SyntheticTree tree;
  tree.steps.push_back({first.id, kNoReaction, 0});
  tree.products.push_back(first.mol.smiles);
  tree.final = first.mol.smiles;
  while (static_cast<int>(tree.depth()) < depth) {
    if (!extend_tree(tree, catalog, templates, index, options, rng)) break;
  }
  return tree;
}

SyntheticTree sample_tree(const Catalog& catalog, const TemplateSet& templates, int max_depth, Rng& rng) {
  const CompatibilityIndex index(catalog, templates);
  SamplerOptions options;
  options.max_depth = max_depth;
  return sample_tree(catalog, templates, index, options, rng);
}

SyntheticTree rebuild(std::vector<TreeStep> steps, const std::optional<std::string>& root, const Catalog& catalog,
                      const TemplateSet& templates) {
  if (steps.empty()) throw ReplayMismatch("tree has no steps");
  SyntheticTree tree;
  tree.root = root;
  const TreeStep& first = steps.front();
  if (first.reaction != kNoReaction) throw ReplayMismatch("step 0 must not carry a reaction");
  chem::Molecule current;
  if (first.block) {
    if (root) throw ReplayMismatch("rooted tree must not have a step-0 block");
    current = catalog.by_id(*first.block).mol;
  } else {
    if (!root) throw ReplayMismatch("step 0 has neither block nor root");
    current = chem::canonicalize(*root);
  }
  tree.products.push_back(current.smiles);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].reaction == kNoReaction) throw ReplayMismatch("step " + std::to_string(i) + " has no reaction");
    current = apply_step(steps[i], current, catalog, templates);
    tree.products.push_back(current.smiles);
  }
  tree.final = current.smiles;
  tree.steps = std::move(steps);
  return tree;
}

chem::Molecule replay(const SyntheticTree& tree, const Catalog& catalog, const TemplateSet& templates) {
  const SyntheticTree again = rebuild(tree.steps, tree.root, catalog, templates);
  if (again.products.size() != tree.products.size()) throw ReplayMismatch("product count differs");
  for (std::size_t i = 0; i < again.products.size(); ++i) {
    if (again.products[i] != tree.products[i]) {
      throw ReplayMismatch("step " + std::to_string(i) + ": stored " + tree.products[i] + ", replayed " +
                           again.products[i]);
    }
  }
  if (again.final != tree.final) throw ReplayMismatch("final product differs");
  return chem::canonicalize(again.final);
}

nlohmann::json tree_to_json(const SyntheticTree& tree) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : tree.steps) {
    nlohmann::json step;
    step["block"] = s.block ? nlohmann::json(*s.block) : nlohmann::json(nullptr);
    step["reaction"] = s.reaction == kNoReaction ? nlohmann::json(nullptr) : nlohmann::json(s.reaction);
    step["order"] = s.order;
    steps.push_back(std::move(step));
  }
  nlohmann::json j;
  j["steps"] = std::move(steps);
  j["products"] = tree.products;
  j["final"] = tree.final;
  if (tree.root) j["root"] = *tree.root;
  return j;
}

SyntheticTree tree_from_json(const nlohmann::json& j) {
  try {
    SyntheticTree tree;
    for (const auto& s : j.at("steps")) {
      TreeStep step;
      if (!s.at("block").is_null()) step.block = s.at("block").get<int>();
      if (!s.at("reaction").is_null()) step.reaction = s.at("reaction").get<int>();
      step.order = s.value("order", 0);
      if (step.order != 0 && step.order != 1) throw ParseError("order must be 0 or 1");
      tree.steps.push_back(step);
    }
    tree.products = j.at("products").get<std::vector<std::string>>();
    tree.final = j.at("final").get<std::string>();
    if (j.contains("root") && !j.at("root").is_null()) tree.root = j.at("root").get<std::string>();
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed tree object: ") + e.what());
  }
}

}  // namespace synthphore::synth
