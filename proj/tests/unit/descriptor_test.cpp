//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "synthphore/chem/descriptors.hpp"
#include "synthphore/chem/fingerprint.hpp"
#include "synthphore/chem/scaffold.hpp"
#include "synthphore/chem/smiles.hpp"

namespace sc = synthphore::chem;

namespace {

struct OracleRow {
  std::string smiles;
  double mw, logp, tpsa;
  int hbd, hba, rotb, arom, alerts;
  double qed;
  int fp2, fp3;
  std::string scaffold;
};

// Values frozen from an independent reference toolkit.
std::vector<OracleRow> load_oracle() {
  std::ifstream in(std::string(SYNTHPHORE_DATA_DIR) + "/fixtures/chem_oracle.tsv");
  std::vector<OracleRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() < 13) f.resize(13);
    rows.push_back({f[0], std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stoi(f[4]), std::stoi(f[5]),
                    std::stoi(f[6]), std::stoi(f[7]), std::stoi(f[8]), std::stod(f[9]), std::stoi(f[10]),
                    std::stoi(f[11]), f[12]});
  }
  return rows;
}

class OracleTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { rows_ = new std::vector<OracleRow>(load_oracle()); }
  static void TearDownTestSuite() { delete rows_; }
  static std::vector<OracleRow>* rows_;
};
std::vector<OracleRow>* OracleTest::rows_ = nullptr;

}  // namespace

TEST_F(OracleTest, CorpusIsLoaded) { EXPECT_GT(rows_->size(), 500u); }

TEST_F(OracleTest, MolecularWeight) {
  for (const auto& r : *rows_) EXPECT_NEAR(sc::molecular_weight(sc::parse_smiles(r.smiles)), r.mw, 2e-3) << r.smiles;
}

TEST_F(OracleTest, CrippenLogP) {
  for (const auto& r : *rows_) EXPECT_NEAR(sc::crippen_logp(sc::parse_smiles(r.smiles)), r.logp, 1e-6) << r.smiles;
}

TEST_F(OracleTest, PolarSurfaceArea) {
  for (const auto& r : *rows_) EXPECT_NEAR(sc::tpsa(sc::parse_smiles(r.smiles)), r.tpsa, 1e-4) << r.smiles;
}

TEST_F(OracleTest, CountDescriptors) {
  for (const auto& r : *rows_) {
    const auto g = sc::parse_smiles(r.smiles);
    EXPECT_EQ(sc::hbond_donors(g), r.hbd) << r.smiles;
    EXPECT_EQ(sc::hbond_acceptors(g), r.hba) << r.smiles;
    EXPECT_EQ(sc::rotatable_bonds(g), r.rotb) << r.smiles;
    EXPECT_EQ(sc::aromatic_rings(g), r.arom) << r.smiles;
    EXPECT_EQ(sc::structural_alerts(g), r.alerts) << r.smiles;
  }
}

TEST_F(OracleTest, Qed) {
  for (const auto& r : *rows_) {
    const double q = sc::qed(sc::parse_smiles(r.smiles));
    EXPECT_NEAR(q, r.qed, 1e-4) << r.smiles;
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST_F(OracleTest, MorganEnvironmentCounts) {
  for (const auto& r : *rows_) {
    const auto g = sc::parse_smiles(r.smiles);
    EXPECT_EQ(sc::morgan_identifiers(g, 2).size(), static_cast<std::size_t>(r.fp2)) << r.smiles;
    EXPECT_EQ(sc::morgan_identifiers(g, 3).size(), static_cast<std::size_t>(r.fp3)) << r.smiles;
  }
}

TEST_F(OracleTest, MurckoScaffold) {
  for (const auto& r : *rows_) {
    const auto scaffold = sc::murcko_scaffold(sc::parse_smiles(r.smiles));
    const std::string expected = r.scaffold.empty() ? "" : sc::write_smiles(sc::parse_smiles(r.scaffold));
    EXPECT_EQ(scaffold.empty() ? "" : sc::write_smiles(scaffold), expected) << r.smiles;
  }
}
