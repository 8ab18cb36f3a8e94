//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>

#include "synthphore/chem/adapter.hpp"
#include "synthphore/util/error.hpp"

using namespace synthphore;
using namespace synthphore::chem;

namespace {

double dist(const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); }

double max_pair_distance(const std::vector<Vec3>& c) {
  double best = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) best = std::max(best, dist(c[i], c[j]));
  }
  return best;
}

int count_class(const PharmacophoreGraph& g, FeatureClass c) {
  int n = 0;
  for (const auto& p : g.points) n += p.cls == c;
  return n;
}

}  // namespace

TEST(Conformer, FixedSeedIsDeterministic) {
  const Molecule m = canonicalize("CCO");
  const Conformer a = gen_conformer(m, 7);
  const Conformer b = gen_conformer(m, 7);
  ASSERT_EQ(a.coords.size(), 3u);
  EXPECT_EQ(a.coords, b.coords);
}

TEST(Conformer, BenzeneParaDistance) {
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    const Conformer c = gen_conformer(canonicalize("c1ccccc1"), seed);
    EXPECT_NEAR(max_pair_distance(c.coords), 2.8, 0.2) << "seed " << seed;
  }
}

TEST(Conformer, BondLengthsAreChemical) {
  const Molecule m = canonicalize("CC(=O)Nc1ccc(O)cc1");
  const Conformer c = gen_conformer(m, 11);
  for (const Bond& b : m.graph().bonds()) {
    const double d = dist(c.coords[static_cast<std::size_t>(b.begin)], c.coords[static_cast<std::size_t>(b.end)]);
    EXPECT_GT(d, 1.1);
    EXPECT_LT(d, 1.65);
  }
}

TEST(Conformer, NonBondedAtomsAreSeparated) {
  const Molecule m = canonicalize("CCCCCCCCCC");
  const Conformer c = gen_conformer(m, 5);
  for (std::size_t i = 0; i < c.coords.size(); ++i) {
    for (std::size_t j = i + 2; j < c.coords.size(); ++j) EXPECT_GT(dist(c.coords[i], c.coords[j]), 2.2);
  }
}

TEST(Conformer, CorpusEmbedsWithFiniteCoordinates) {
  for (const char* s : {"C1CC1", "C1CCC1", "c1ccc2ccccc2c1", "O=C(O)c1ccccc1", "C#N", "C1CCC2(CC1)CCCC2",
                        "c1ccc(-c2ccncc2)cc1", "CN1CCN(CC1)C(=O)c1ccco1"}) {
    const Conformer c = gen_conformer(canonicalize(s), 3);
    for (const auto& p : c.coords) {
      for (double v : p) EXPECT_TRUE(std::isfinite(v)) << s;
    }
  }
}

TEST(Conformer, SdfBlockHasCounts) {
  const Conformer c = gen_conformer(canonicalize("CC(=O)[O-]"), 1);
  const std::string sdf = c.to_sdf();
  EXPECT_NE(sdf.find("  4  3  0"), std::string::npos);
  EXPECT_NE(sdf.find("M  CHG"), std::string::npos);
  EXPECT_NE(sdf.find("$$$$"), std::string::npos);
}

TEST(Pharmacophore, BenzeneSingleAromaticCentroid) {
  const Conformer c = gen_conformer(canonicalize("c1ccccc1"), 4);
  const PharmacophoreGraph g = extract_pharmacophores(c);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.points[0].cls, FeatureClass::AR);
  Vec3 mean{0, 0, 0};
  for (const auto& p : c.coords) {
    for (int k = 0; k < 3; ++k) mean[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)] / 6.0;
  }
  EXPECT_NEAR(dist(mean, g.points[0].xyz), 0.0, 1e-12);
}

TEST(Pharmacophore, MethanolDonorAndAcceptorOnOxygen) {
  const Conformer c = gen_conformer(canonicalize("CO"), 2);
  const PharmacophoreGraph g = extract_pharmacophores(c);
  const int oxygen = c.parent.graph().atom(0).element == 8 ? 0 : 1;
  int donors = 0, acceptors = 0;
  for (const auto& p : g.points) {
    if (dist(p.xyz, c.coords[static_cast<std::size_t>(oxygen)]) > 1e-12) continue;
    donors += p.cls == FeatureClass::HBD;
    acceptors += p.cls == FeatureClass::HBA;
  }
  EXPECT_GE(donors, 1);
  EXPECT_GE(acceptors, 1);
}

TEST(Pharmacophore, MethaneIsEmpty) {
  const Conformer c = gen_conformer(canonicalize("C"), 1);
  EXPECT_THROW(extract_pharmacophores(c), EmptyPharmacophore);
}

TEST(Pharmacophore, IonizableGroups) {
  const Molecule acid = canonicalize("CC(=O)O");
  const Molecule amine = canonicalize("CCN");
  const Molecule amide = canonicalize("CC(N)=O");
  EXPECT_EQ(find_feature_sites(acid.graph()).sites[static_cast<int>(FeatureClass::NIF)].size(), 1u);
  EXPECT_EQ(find_feature_sites(amine.graph()).sites[static_cast<int>(FeatureClass::PIF)].size(), 1u);
  EXPECT_TRUE(find_feature_sites(amide.graph()).sites[static_cast<int>(FeatureClass::PIF)].empty());
}

TEST(Pharmacophore, ClassesWithinSixAndNames) {
  const Conformer c = gen_conformer(canonicalize("NCCc1ccc(O)c(O)c1"), 8);
  const PharmacophoreGraph g = extract_pharmacophores(c);
  EXPECT_GE(count_class(g, FeatureClass::AR), 1);
  for (const auto& p : g.points) {
    const int k = static_cast<int>(p.cls);
    EXPECT_GE(k, 0);
    EXPECT_LT(k, kFeatureClasses);
    EXPECT_EQ(feature_from_name(feature_name(p.cls)), p.cls);
  }
  EXPECT_THROW(feature_from_name("XYZ"), ParseError);
}

TEST(Adapter, CanonicalizeAndProperties) {
  EXPECT_EQ(canonicalize("OCC").smiles, "CCO");
  EXPECT_EQ(canonicalize(canonicalize("OCC").smiles).smiles, "CCO");
  EXPECT_THROW(canonicalize("C((("), ParseError);
  EXPECT_NEAR(properties(canonicalize("O")).mw, 18.015, 0.01);
  EXPECT_GT(properties(canonicalize("c1ccccc1")).logp, 0.0);
  EXPECT_TRUE(murcko_scaffold(canonicalize("CCCCCC")).empty());
  EXPECT_EQ(murcko_scaffold(canonicalize("Cc1ccccc1")).smiles, "c1ccccc1");
}

TEST(Adapter, FingerprintFacade) {
  const Molecule benzene = canonicalize("c1ccccc1");
  EXPECT_EQ(morgan_fp(benzene, 2), morgan_fp(benzene, 2));
  EXPECT_FALSE(morgan_fp(benzene, 2) == morgan_fp(canonicalize("C"), 2));
}
