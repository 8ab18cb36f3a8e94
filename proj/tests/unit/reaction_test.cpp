//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "synthphore/chem/reaction.hpp"
#include "synthphore/chem/smiles.hpp"
#include "synthphore/util/error.hpp"

namespace sc = synthphore::chem;

namespace {

std::vector<std::vector<std::string>> read_tsv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (!line.empty() && line.back() == '\t') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

std::map<std::string, sc::ReactionSmarts> load_templates() {
  std::map<std::string, sc::ReactionSmarts> out;
  for (const auto& row : read_tsv(std::string(SYNTHPHORE_DATA_DIR) + "/templates.tsv")) {
    out.emplace(row[0], sc::ReactionSmarts::parse(row[2]));
  }
  return out;
}

std::string canon(const std::string& s) { return sc::write_smiles(sc::parse_smiles(s)); }

}  // namespace

TEST(ReactionTest, ProductsAgreeWithReferenceToolkit) {
  const auto templates = load_templates();
  ASSERT_EQ(templates.size(), 20u);
  const auto rows = read_tsv(std::string(SYNTHPHORE_DATA_DIR) + "/fixtures/reaction_oracle.tsv");
  ASSERT_GT(rows.size(), 100u);
  for (const auto& row : rows) {
    const auto& rxn = templates.at(row[0]);
    const auto a = sc::parse_smiles(row[1]);
    const auto b = sc::parse_smiles(row[2]);
    std::set<std::string> expected;
    if (row.size() > 3) {
      std::stringstream ss(row[3]);
      std::string p;
      while (ss >> p) expected.insert(canon(p));
    }
    const auto got = rxn.run({&a, &b});
    EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), expected)
        << "template " << row[0] << ": " << row[1] << " + " << row[2];
    EXPECT_EQ(rxn.matches({&a, &b}), !expected.empty()) << row[0] << ": " << row[1] << " + " << row[2];
  }
}

TEST(ReactionTest, AmideCouplingGolden) {
  const auto templates = load_templates();
  const auto acid = sc::parse_smiles("CC(=O)O");
  const auto amine = sc::parse_smiles("CN");
  const auto products = templates.at("1").run({&acid, &amine});
  ASSERT_EQ(products.size(), 1u);
  EXPECT_EQ(products[0], canon("CNC(C)=O"));
  EXPECT_EQ(templates.at("1").run({&acid, &amine}), products);
}

TEST(ReactionTest, ArityIsChecked) {
  const auto templates = load_templates();
  const auto m = sc::parse_smiles("C");
  EXPECT_THROW(templates.at("1").matches({&m}), synthphore::ArityMismatch);
  EXPECT_THROW(templates.at("1").run({&m, &m, &m}), synthphore::ArityMismatch);
  EXPECT_FALSE(templates.at("1").matches({&m, &m}));
  EXPECT_TRUE(templates.at("1").run({&m, &m}).empty());
}

TEST(ReactionTest, MalformedReactionThrows) {
  EXPECT_THROW(sc::ReactionSmarts::parse("[C:1]"), synthphore::SmartsError);
  EXPECT_THROW(sc::ReactionSmarts::parse("[C:1].[C:1]>>[C:1]"), synthphore::SmartsError);
  EXPECT_THROW(sc::ReactionSmarts::parse("[C:1]>>[C:1]*"), synthphore::SmartsError);
}
