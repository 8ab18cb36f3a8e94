//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/smiles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "synthphore/util/error.hpp"
#include "synthphore/util/random.hpp"

namespace synthphore::chem {
namespace {

std::string canon(const std::string& smi) { return write_smiles(parse_smiles(smi)); }

TEST(SmilesTest, ParsesSimpleChains) {
  auto g = parse_smiles("CCO");
  ASSERT_EQ(g.atom_count(), 3u);
  EXPECT_EQ(g.atom(0).hydrogens, 3);
  EXPECT_EQ(g.atom(1).hydrogens, 2);
  EXPECT_EQ(g.atom(2).hydrogens, 1);
}

TEST(SmilesTest, AromaticBenzeneIsKekulizedAndPerceived) {
  auto g = parse_smiles("c1ccccc1");
  int doubles = 0;
  for (const auto& b : g.bonds()) {
    doubles += b.order == 2;
    EXPECT_TRUE(b.aromatic);
  }
  EXPECT_EQ(doubles, 3);
  for (const auto& a : g.atoms()) EXPECT_EQ(a.hydrogens, 1);
  EXPECT_EQ(canon("C1=CC=CC=C1"), "c1ccccc1");
}

TEST(SmilesTest, PyrroleKeepsBracketHydrogen) {
  const std::string c = canon("c1cc[nH]c1");
  EXPECT_NE(c.find("[nH]"), std::string::npos);
  EXPECT_EQ(canon(c), c);
}

TEST(SmilesTest, BiphenylLinkIsSingle) {
  auto g = parse_smiles("c1ccccc1c1ccccc1");
  int aromatic = 0;
  for (const auto& b : g.bonds()) aromatic += b.aromatic;
  EXPECT_EQ(aromatic, 12);
  EXPECT_NE(canon("c1ccccc1c1ccccc1").find('-'), std::string::npos);
}

TEST(SmilesTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_smiles("C((("), ParseError);
  EXPECT_THROW(parse_smiles("C1CC"), ParseError);
  EXPECT_THROW(parse_smiles(""), ParseError);
  EXPECT_THROW(parse_smiles("C)C"), ParseError);
  EXPECT_THROW(parse_smiles("[Xx]"), ParseError);
  EXPECT_THROW(parse_smiles("c1cccc1"), ParseError);
  EXPECT_THROW(parse_smiles("C(C)(C)(C)(C)C"), ParseError);
}

TEST(SmilesTest, ChargesAndBrackets) {
  EXPECT_EQ(canon("C[N+](C)(C)C"), "C[N+](C)(C)C");
  EXPECT_EQ(canon("CC(=O)[O-]"), canon("[O-]C(C)=O"));
  auto g = parse_smiles("[NH4+]");
  EXPECT_EQ(g.atom(0).hydrogens, 4);
}

TEST(SmilesTest, RingsArePerceived) {
  auto g = parse_smiles("C1CC2CCCCC2CC1");
  EXPECT_EQ(g.rings().atom_rings.size(), 2u);
  auto cubane = parse_smiles("C12C3C4C1C5C2C3C45");
  EXPECT_EQ(cubane.rings().atom_rings.size(), 5u);
}

const std::vector<std::string> kCorpus = {
    "CCO", "OCC", "c1ccccc1", "Cc1ccccc1", "CC(=O)Nc1ccc(O)cc1", "c1ccc2ccccc2c1", "c1ccc2[nH]ccc2c1",
    "O=c1cccc[nH]1", "CN1CCN(CC1)c1ccc(cc1)C(=O)O", "Brc1ccc(cc1)C(=O)O", "OB(O)c1ccccc1", "C#Cc1ccccc1",
    "O=C(O)C1CCCN1", "c1ccncc1", "c1cscn1", "c1ccoc1", "CC(C)(C)OC(=O)N", "N#CCC(=O)O", "FC(F)(F)c1ccccc1",
    "c1ccc(-c2ccccc2)cc1", "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "O=S(=O)(Cl)c1ccccc1", "C1CC1C(=O)O", "C=CC=O",
    "CC1=CC(=O)CC1", "c1ccc2c(c1)cccc2", "N=C=O", "S=C=Nc1ccccc1", "[N-]=[N+]=NCc1ccccc1",
    "O=C(O)c1cc(Br)cnc1", "Clc1ncccn1", "C1=CC=CC=CC=C1"};

TEST(SmilesTest, CanonicalFormIsIdempotent) {
  for (const auto& smi : kCorpus) {
    const std::string once = canon(smi);
    EXPECT_EQ(canon(once), once) << smi;
  }
}

// Property: any traversal order of the same graph canonicalizes identically.
TEST(SmilesTest, CanonicalFormIsTraversalInvariant) {
  Rng rng(20261017);
  for (const auto& smi : kCorpus) {
    auto g = parse_smiles(smi);
    const std::string reference = write_smiles(g);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> priority(g.atom_count());
      std::iota(priority.begin(), priority.end(), 0);
      for (std::size_t i = priority.size(); i > 1; --i) std::swap(priority[i - 1], priority[uniform_index(rng, i)]);
      const std::string spelled = write_smiles(g, priority);
      EXPECT_EQ(canon(spelled), reference) << smi << " spelled " << spelled;
    }
  }
}

}  // namespace
}  // namespace synthphore::chem
