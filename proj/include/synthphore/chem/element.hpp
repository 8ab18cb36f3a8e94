//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string_view>

namespace synthphore::chem {

struct ElementInfo {
  int number;
  std::string_view symbol;
  double mass;            // average atomic mass, g/mol
  double covalent_radius; // angstrom
};

// Returns nullptr for unknown atomic numbers.
const ElementInfo* element_info(int atomic_number);
// Returns 0 when the symbol is not an element (case-sensitive, e.g. "Cl").
int element_from_symbol(std::string_view symbol);

// Allowed total valences for an uncharged atom, smallest first. Empty span
// means the element has no fixed valence (metals etc.).
std::span<const int> default_valences(int atomic_number);

// Valence list shifted by formal charge using the isoelectronic rule
// (N+ behaves like C, O- like F, C- like N).
int charge_adjusted_valence(int atomic_number, int charge, int minimum_needed);

// Member of the SMILES organic subset (may be written without brackets).
bool in_organic_subset(int atomic_number);

double hydrogen_mass();

}  // namespace synthphore::chem
