//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/apps/optimizer.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <json.hpp>

#include "synthphore/util/error.hpp"

namespace synthphore::apps {

Scorer builtin_scorer(const std::string& name) {
  if (name == "neg_logp") return {name, [](const chem::Molecule& m) { return -chem::properties(m).logp; }};
  if (name == "logp") return {name, [](const chem::Molecule& m) { return chem::properties(m).logp; }};
  if (name == "qed") return {name, [](const chem::Molecule& m) { return chem::properties(m).qed; }};
  if (name == "neg_mw") return {name, [](const chem::Molecule& m) { return -chem::properties(m).mw; }};
  throw ParseError("unknown scorer: " + name);
}

namespace {

struct Option {
  int reaction;
  int order;
  chem::Molecule product;
};

std::vector<Option> options_for(const chem::Molecule& current, const chem::Molecule& block,
                                const synth::TemplateSet& templates) {
  std::vector<Option> out;
  for (const auto& tpl : templates.templates()) {
    if (tpl.arity != 2) continue;
    for (int o = 0; o < 2; ++o) {
      const std::vector<chem::Molecule> r =
          o == 0 ? std::vector<chem::Molecule>{current, block} : std::vector<chem::Molecule>{block, current};
      try {
        if (synth::applicable(tpl, r)) out.push_back({tpl.id, o, synth::apply(tpl, r)});
      } catch (const NoProduct&) {
      }
    }
  }
  return out;
}

}  // namespace

std::optional<synth::SyntheticTree> mutate_tree(const synth::SyntheticTree& tree, std::size_t step, int new_block,
                                                const synth::Catalog& catalog, const synth::TemplateSet& templates,
                                                Rng& rng) {
  if (step >= tree.steps.size() || !tree.steps[step].block) return std::nullopt;
  synth::SyntheticTree out;
  out.root = tree.root;
  chem::Molecule current;
  for (std::size_t i = 0; i < tree.steps.size(); ++i) {
    synth::TreeStep s = tree.steps[i];
    if (i == step) s.block = new_block;
    if (i == 0) {
      current = s.block ? catalog.by_id(*s.block).mol : chem::canonicalize(*tree.root);
      out.steps.push_back(s);
      out.products.push_back(current.smiles);
      continue;
    }
    const chem::Molecule& block = catalog.by_id(*s.block).mol;
    if (i < step) {
      current = synth::apply_step(s, current, catalog, templates);
    } else {
      // Mutated step resamples; later steps keep their reaction when it still applies.
      const auto opts = options_for(current, block, templates);
      if (opts.empty()) return std::nullopt;
      const Option* keep = nullptr;
      if (i > step) {
        for (const auto& o : opts) {
          if (o.reaction == s.reaction && o.order == s.order) keep = &o;
        }
      }
      const Option& pick = keep ? *keep : opts[uniform_index(rng, opts.size())];
      s.reaction = pick.reaction;
      s.order = pick.order;
      current = pick.product;
    }
    if (current.graph().atom_count() > 60) return std::nullopt;
    out.steps.push_back(s);
    out.products.push_back(current.smiles);
  }
  out.final = current.smiles;
  return out;
}

GaResult optimize(const Generator& gen, const std::vector<synth::SyntheticTree>& seeds, const Scorer& scorer,
                  const GaConfig& config) {
  const auto& catalog = gen.catalog();
  const auto& templates = gen.templates();
  if (config.cycles < 1 || config.population < 1 || config.topk_parents < 1 || config.neighbor_k < 1) {
    throw InvalidArgument("GA config values must be positive");
  }
  GaResult result;
  std::vector<Candidate> pool;
  int next_id = 0;
  for (const auto& t : seeds) {
    try {
      synth::replay(t, catalog, templates);
    } catch (const Error&) {
      continue;
    }
    pool.push_back({next_id++, t, scorer.fn(chem::canonicalize(t.final))});
  }
  if (pool.empty()) throw ExtinctPopulation("no valid seed trees");
  const auto rank = [](std::vector<Candidate>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
  };
  rank(pool);
  if (static_cast<int>(pool.size()) > config.topk_parents) pool.resize(static_cast<std::size_t>(config.topk_parents));
  result.best_per_cycle.push_back(pool.front().score);

  std::map<int, std::vector<int>> neighbors;
  const auto neighbors_of = [&](int block) -> const std::vector<int>& {
    auto it = neighbors.find(block);
    if (it == neighbors.end()) it = neighbors.emplace(block, gen.nearest_blocks(block, config.neighbor_k)).first;
    return it->second;
  };

  for (int cycle = 1; cycle <= config.cycles; ++cycle) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(cycle)));
    std::vector<Candidate> children;
    for (int c = 0; c < config.population; ++c) {
      const Candidate& parent = pool[static_cast<std::size_t>(c) % pool.size()];
      std::vector<std::size_t> mutable_steps;
      for (std::size_t s = 0; s < parent.tree.steps.size(); ++s) {
        if (parent.tree.steps[s].block) mutable_steps.push_back(s);
      }
      if (mutable_steps.empty()) continue;
      const std::size_t step = mutable_steps[uniform_index(rng, mutable_steps.size())];
      const int old_block = *parent.tree.steps[step].block;
      const auto& nbrs = neighbors_of(old_block);
      if (nbrs.empty()) continue;
      const int new_block = nbrs[uniform_index(rng, nbrs.size())];
      auto child = mutate_tree(parent.tree, step, new_block, catalog, templates, rng);
      if (!child) continue;
      const double score = scorer.fn(chem::canonicalize(child->final));
      const int id = next_id++;
      result.lineage.push_back({cycle, parent.id, id, static_cast<int>(step), old_block, new_block,
                                child->steps[step].reaction, score});
      children.push_back({id, std::move(*child), score});
    }
    // Elites stay ahead of children on ties, so a flat landscape keeps them.
    pool.insert(pool.end(), children.begin(), children.end());
    rank(pool);
    if (pool.empty()) throw ExtinctPopulation("population went extinct");
    if (static_cast<int>(pool.size()) > config.topk_parents) pool.resize(static_cast<std::size_t>(config.topk_parents));
    result.best_per_cycle.push_back(pool.front().score);
  }
  result.elites = std::move(pool);
  return result;
}

void write_lineage_jsonl(std::ostream& os, const std::vector<LineageEvent>& events) {
  for (const auto& e : events) {
    nlohmann::json j = {{"cycle", e.cycle},       {"parent_id", e.parent_id}, {"child_id", e.child_id},
                        {"mutated_step", e.mutated_step}, {"old_block", e.old_block}, {"new_block", e.new_block},
                        {"reaction", nullptr}, {"score", e.score}};
    if (e.reaction != synth::kNoReaction) j["reaction"] = e.reaction;
    os << j.dump() << '\n';
  }
}

}  // namespace synthphore::apps
