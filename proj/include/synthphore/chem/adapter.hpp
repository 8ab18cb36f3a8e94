//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "synthphore/chem/conformer.hpp"
#include "synthphore/chem/fingerprint.hpp"
#include "synthphore/chem/molgraph.hpp"
#include "synthphore/chem/pharmacophore.hpp"

namespace synthphore::chem {

// Canonical SMILES plus a shared, immutable graph. An empty smiles denotes the
// empty molecule (e.g. the scaffold of an acyclic input).
struct Molecule {
  std::string smiles;
  std::shared_ptr<const MolGraph> handle;

  const MolGraph& graph() const { return *handle; }
  bool empty() const { return smiles.empty(); }
  bool operator==(const Molecule& o) const { return smiles == o.smiles; }
};

struct Conformer {
  std::vector<Vec3> coords;
  Molecule parent;
  std::uint64_t seed = 0;

  std::string to_sdf() const;
};

struct PropertyRecord {
  double mw;
  double logp;
  double qed;
};

// Throws ParseError on invalid input.
Molecule canonicalize(std::string_view smiles);
Molecule from_graph(const MolGraph& g);

BitFingerprint morgan_fp(const Molecule& mol, int radius = 2, int nbits = kFingerprintBits);
Molecule murcko_scaffold(const Molecule& mol);
// Throws EmbedFailure.
Conformer gen_conformer(const Molecule& mol, std::uint64_t seed);
// Throws EmptyPharmacophore.
PharmacophoreGraph extract_pharmacophores(const Conformer& conf);
PropertyRecord properties(const Molecule& mol);

}  // namespace synthphore::chem
