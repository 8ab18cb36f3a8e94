//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <string>

#include "synthphore/chem/smarts.hpp"
#include "synthphore/chem/smiles.hpp"
#include "synthphore/util/error.hpp"

namespace sc = synthphore::chem;

namespace {

struct Case {
  const char* smiles;
  const char* smarts;
  std::size_t count;
};

// Unique-match counts frozen from an independent toolkit.
const Case kCases[] = {
    {"CC(=O)O", "[CX3](=O)[OX2H1]", 1},
    {"c1ccccc1O", "[OX2H][c]", 1},
    {"CCN", "[NX3;H2,H1;!$(NC=O)]", 1},
    {"CC(=O)NC", "[NX3;H2,H1;!$(NC=O)]", 0},
    {"c1ccccc1", "c:c", 6},
    {"c1ccccc1", "[R1]", 6},
    {"C1CC2CCC1C2", "[R2]", 3},
    {"C1CCC1", "[r4]", 4},
    {"CCO", "[#6]~[#8]", 1},
    {"OCCO", "[OH]", 2},
    {"C=CC=C", "C=C", 2},
    {"Oc1ccc(Cl)cc1", "[Cl,Br,I]", 1},
    {"CC(C)(C)C", "[CD4]", 1},
    {"CC(C)(C)C", "[CH3]", 4},
    {"C[N+](C)(C)C", "[N+]", 1},
    {"CC(=O)[O-]", "[O-]", 1},
    {"c1ccncc1", "[n;R1]", 1},
    {"CCCC", "*~*~*", 2},
    {"c1ccc2ccccc2c1", "[x3]", 2},
    {"CCO.CCN", "[#6].[#7]", 4},
    {"C1CCCCC1", "[!R]", 0},
    {"NCC(=O)O", "[$([NH2]),$(C=O)]", 2},
};

}  // namespace

TEST(SmartsTest, MatchCountsAgreeWithReference) {
  for (const auto& c : kCases) {
    const auto mol = sc::parse_smiles(c.smiles);
    const auto pat = sc::SmartsPattern::parse(c.smarts);
    EXPECT_EQ(pat.matches(mol).size(), c.count) << c.smiles << " / " << c.smarts;
  }
}

TEST(SmartsTest, KekuleDoubleDoesNotMatchAromatic) {
  const auto mol = sc::parse_smiles("c1ccccc1");
  EXPECT_FALSE(sc::SmartsPattern::parse("C=C").has_match(mol));
  EXPECT_FALSE(sc::SmartsPattern::parse("[#6]=[#6]").has_match(mol));
  EXPECT_TRUE(sc::SmartsPattern::parse("[#6]:[#6]").has_match(mol));
}

TEST(SmartsTest, PinnedRoot) {
  const auto mol = sc::parse_smiles("NCC(=O)O");
  const auto pat = sc::SmartsPattern::parse("[NH2]CC=O");
  EXPECT_TRUE(pat.matches_at(mol, 0));
  EXPECT_FALSE(pat.matches_at(mol, 1));
}

TEST(SmartsTest, AtomMapsAndSpecs) {
  const auto pat = sc::SmartsPattern::parse("[C:1](=[O:2])[OH1:3]");
  ASSERT_EQ(pat.atom_count(), 3u);
  EXPECT_EQ(pat.atom(0).spec.map, 1);
  EXPECT_EQ(pat.atom(0).spec.element, 6);
  EXPECT_EQ(pat.atom(2).spec.hydrogens.value_or(-1), 1);
  EXPECT_EQ(pat.bonds()[0].order_spec, 2);
}

TEST(SmartsTest, MalformedPatternsThrow) {
  for (const char* bad : {"", "[C", "C(", "C1CC", "[Xq]", "C)", "$(C"}) {
    EXPECT_THROW(sc::SmartsPattern::parse(bad), synthphore::SmartsError) << bad;
  }
}
