//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

class SmartsPattern;

struct AtomExpr {
  enum class Kind {
    True,
    And,
    Or,
    Not,
    Element,  // value = Z; flag: 0 any, 1 aliphatic, 2 aromatic
    Aromatic,
    Aliphatic,
    Degree,
    TotalConnections,
    TotalH,
    Valence,
    Charge,
    RingCount,  // value < 0: any ring
    RingSize,   // value < 0: any ring
    RingConnectivity,
    Isotope,
    Recursive,
  };
  Kind kind = Kind::True;
  int value = 0;
  int flag = 0;
  std::vector<AtomExpr> children;
  std::shared_ptr<const SmartsPattern> recursive;
};

struct BondExpr {
  enum class Kind { Default, Any, Single, Double, Triple, Aromatic, Ring, And, Or, Not };
  Kind kind = Kind::Default;
  std::vector<BondExpr> children;
};

// What a query atom states unambiguously; used when a pattern serves as a
// reaction product template.
struct AtomSpec {
  int element = -1;
  int aromatic = -1;  // -1 unspecified
  std::optional<int> charge;
  std::optional<int> hydrogens;
  int map = 0;
};

struct QueryAtom {
  AtomExpr expr;
  AtomSpec spec;
};

struct QueryBond {
  int begin;
  int end;
  BondExpr expr;
  int order_spec;  // 0 unspecified, 1..3 explicit order, 4 aromatic, -1 any
};

using Match = std::vector<int>;  // query atom index -> target atom index

class SmartsPattern {
 public:
  // Throws SmartsError.
  static SmartsPattern parse(std::string_view smarts);

  std::size_t atom_count() const { return atoms_.size(); }
  const QueryAtom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const std::vector<QueryBond>& bonds() const { return bonds_; }
  const std::string& text() const { return text_; }

  // All embeddings, optionally de-duplicated by target atom set.
  std::vector<Match> matches(const MolGraph& g, bool uniquify = true, std::size_t max_matches = 1000) const;
  bool has_match(const MolGraph& g) const;
  // Embedding with query atom 0 pinned to `atom`.
  bool matches_at(const MolGraph& g, int atom) const;

 private:
  friend class SmartsParser;
  friend class Matcher;
  std::string text_;
  std::vector<QueryAtom> atoms_;
  std::vector<QueryBond> bonds_;
  std::vector<std::vector<int>> atom_bonds_;  // bonds touching each atom
};

}  // namespace synthphore::chem
