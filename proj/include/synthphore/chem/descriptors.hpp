//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

// Average molecular weight including hydrogens (g/mol).
double molecular_weight(const MolGraph& g);
// Wildman-Crippen atom-contribution logP.
double crippen_logp(const MolGraph& g);
// Ertl topological polar surface area over N and O (square angstrom).
double tpsa(const MolGraph& g);
int hbond_donors(const MolGraph& g);
// Acceptor count as used by the drug-likeness estimate (sum of pattern matches).
int hbond_acceptors(const MolGraph& g);
// Strict definition: excludes amide C-N, terminal groups, CX3 rotors and triple bonds.
int rotatable_bonds(const MolGraph& g);
int aromatic_rings(const MolGraph& g);
// Number of structural-alert patterns present.
int structural_alerts(const MolGraph& g);

struct QedInputs {
  double mw;
  double logp;
  int hba;
  int hbd;
  double psa;
  int rotb;
  int arom;
  int alerts;
};

QedInputs qed_inputs(const MolGraph& g);
// Weighted geometric mean of desirability functions (mean weights), in [0, 1].
double qed(const QedInputs& in);
double qed(const MolGraph& g);

}  // namespace synthphore::chem
