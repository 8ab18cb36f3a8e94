//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

// Parses SMILES into a kekulized, perceived graph. Stereo marks are accepted
// and discarded. Throws ParseError (KekulizeError for impossible aromatic
// systems, ParseError for valence violations).
MolGraph parse_smiles(std::string_view smiles);

// Canonical atom ranks (0 = first). Invariant under atom renumbering for
// graphs whose symmetry classes are automorphism orbits.
std::vector<int> canonical_ranks(const MolGraph& g);

// Canonical SMILES. Empty graph gives an empty string.
std::string write_smiles(const MolGraph& g);

// SMILES whose traversal follows an arbitrary atom priority (lower first).
// Used to produce non-canonical but equivalent spellings.
std::string write_smiles(const MolGraph& g, const std::vector<int>& priority);

}  // namespace synthphore::chem
