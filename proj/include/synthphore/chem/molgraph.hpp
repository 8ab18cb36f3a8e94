//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace synthphore::chem {

// Heavy-atom graph. Hydrogens are carried as per-atom counts; bonds always
// hold a Kekulé order (1, 2 or 3) and aromaticity is a perceived flag on top.
struct Atom {
  int element = 6;
  int charge = 0;
  int hydrogens = 0;
  int isotope = 0;
  bool aromatic = false;
  int map = 0;  // reaction atom-map number, 0 when unmapped
};

struct Bond {
  int begin = 0;
  int end = 0;
  int order = 1;
  bool aromatic = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Smallest-set-of-smallest-rings view of a graph.
struct RingInfo {
  std::vector<std::vector<int>> atom_rings;  // ordered around each ring
  std::vector<std::vector<int>> bond_rings;
  std::vector<int> atom_ring_count;
  std::vector<int> bond_ring_count;
  std::vector<int> atom_min_ring;  // 0 when acyclic

  bool atom_in_ring(int a) const { return atom_ring_count[static_cast<std::size_t>(a)] > 0; }
  bool bond_in_ring(int b) const { return bond_ring_count[static_cast<std::size_t>(b)] > 0; }
};

class MolGraph {
 public:
  int add_atom(const Atom& atom);
  int add_bond(int a, int b, int order, bool aromatic = false);

  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t bond_count() const { return bonds_.size(); }
  bool empty() const { return atoms_.empty(); }

  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  Atom& atom(int i) { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  Bond& bond(int i) { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }

  std::span<const Neighbor> neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(i)].size()); }
  int bond_between(int a, int b) const;
  int bond_order_sum(int i) const;
  // Total valence including hydrogens.
  int valence(int i) const { return bond_order_sum(i) + atom(i).hydrogens; }

  // Recomputes rings and aromaticity. Must be called after structural edits
  // and before any query that depends on ring or aromatic state.
  void perceive();
  const RingInfo& rings() const { return rings_; }

  // Returns the subgraph of atoms where keep[i] is true. Hydrogens are added
  // to surviving atoms for every removed bond so valences are preserved.
  MolGraph subgraph(const std::vector<bool>& keep) const;

  // Connected-component label per atom and the number of components.
  std::vector<int> components(int* count) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  RingInfo rings_;
};

RingInfo find_sssr(const MolGraph& g);
void perceive_aromaticity(MolGraph& g, const RingInfo& rings);

// Assigns Kekulé orders to bonds flagged aromatic by the parser. Throws
// KekulizeError when no assignment exists. `bracket_h` marks atoms whose
// hydrogen count was given explicitly.
void kekulize(MolGraph& g, const std::vector<bool>& explicit_h);

// Hydrogen count the SMILES parser would infer for an unbracketed atom.
int implicit_hydrogens(const MolGraph& g, int atom);

// Checks valences and hydrogen counts; throws SanitizeError.
void check_valences(const MolGraph& g);

}  // namespace synthphore::chem
