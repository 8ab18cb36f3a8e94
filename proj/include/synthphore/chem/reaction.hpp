//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "synthphore/chem/molgraph.hpp"
#include "synthphore/chem/smarts.hpp"

namespace synthphore::chem {

// A reaction SMARTS "r1.r2>>p" with one pattern per reactant and a single
// product pattern. Mapped atoms carry over from the reactants; unmapped
// reactant-pattern atoms are deleted; unmapped product atoms are created.
class ReactionSmarts {
 public:
  // Throws SmartsError.
  static ReactionSmarts parse(std::string_view text);

  std::size_t arity() const { return reactants_.size(); }
  const SmartsPattern& reactant(std::size_t i) const { return reactants_[i]; }
  const SmartsPattern& product() const { return product_; }
  const std::string& text() const { return text_; }

  // True when reactant i contains the i-th pattern. Throws ArityMismatch.
  bool matches(const std::vector<const MolGraph*>& reactants) const;

  // Canonical SMILES of every distinct sanitizable product, sorted ascending.
  // Throws ArityMismatch.
  std::vector<std::string> run(const std::vector<const MolGraph*>& reactants, std::size_t max_combinations = 256) const;

 private:
  MolGraph build(const std::vector<const MolGraph*>& reactants, const std::vector<const Match*>& matches) const;

  std::string text_;
  std::vector<SmartsPattern> reactants_;
  SmartsPattern product_;
  // Per product atom: (reactant index, query atom) of its mapped source, or (-1, -1).
  std::vector<std::pair<int, int>> sources_;
};

}  // namespace synthphore::chem
