//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/adapter.hpp"

#include "synthphore/chem/descriptors.hpp"
#include "synthphore/chem/scaffold.hpp"
#include "synthphore/chem/smiles.hpp"

namespace synthphore::chem {

Molecule canonicalize(std::string_view smiles) {
  MolGraph g = parse_smiles(smiles);
  const std::string canon = write_smiles(g);
  // Re-parse so the handle's atom order is that of the canonical string.
  auto handle = std::make_shared<const MolGraph>(parse_smiles(canon));
  return Molecule{canon, std::move(handle)};
}

Molecule from_graph(const MolGraph& g) {
  if (g.atom_count() == 0) return Molecule{"", std::make_shared<const MolGraph>()};
  return canonicalize(write_smiles(g));
}

BitFingerprint morgan_fp(const Molecule& mol, int radius, int nbits) {
  return morgan_fingerprint(mol.graph(), radius, nbits);
}

Molecule murcko_scaffold(const Molecule& mol) { return from_graph(murcko_scaffold(mol.graph())); }

Conformer gen_conformer(const Molecule& mol, std::uint64_t seed) {
  return Conformer{embed_molecule(mol.graph(), seed), mol, seed};
}

PharmacophoreGraph extract_pharmacophores(const Conformer& conf) {
  return extract_pharmacophores(conf.parent.graph(), conf.coords);
}

PropertyRecord properties(const Molecule& mol) {
  const MolGraph& g = mol.graph();
  return PropertyRecord{molecular_weight(g), crippen_logp(g), qed(g)};
}

std::string Conformer::to_sdf() const { return chem::to_sdf(parent.graph(), coords, parent.smiles); }

}  // namespace synthphore::chem
