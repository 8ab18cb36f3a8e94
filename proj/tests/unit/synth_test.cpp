//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "synthphore/synth/dataset.hpp"
#include "synthphore/util/error.hpp"

using namespace synthphore;
using namespace synthphore::synth;

namespace {

const Catalog& desk_catalog() {
  static const Catalog c = load_catalog(default_catalog_path());
  return c;
}

const TemplateSet& desk_templates() {
  static const TemplateSet t = load_templates(default_templates_path());
  return t;
}

Catalog catalog_from(const std::string& text) {
  std::istringstream in(text);
  return read_catalog(in);
}

TemplateSet templates_from(const std::string& text) {
  std::istringstream in(text);
  return read_templates(in);
}

const ReactionTemplate& amide() { return desk_templates().by_id(1); }

}  // namespace

TEST(Catalog, LoadsDeskCatalog) {
  EXPECT_EQ(desk_catalog().size(), 301u);
  EXPECT_EQ(desk_templates().size(), 20u);
  for (const auto& b : desk_catalog().blocks()) {
    EXPECT_EQ(b.fp, chem::morgan_fp(b.mol, 3));
    EXPECT_EQ(b.fp.nbits(), 4096);
  }
}

TEST(Catalog, CountsLines) {
  std::string text;
  for (int i = 0; i < 100; ++i) text += std::to_string(i) + "\t" + std::string(static_cast<std::size_t>(i + 1), 'C') + "\n";
  EXPECT_EQ(catalog_from(text).size(), 100u);
}

TEST(Catalog, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(catalog_from("0\tCCO\n1\tOCC\n"), DuplicateEntry);
  EXPECT_THROW(catalog_from("0\tCCO\n0\tCCC\n"), DuplicateEntry);
  EXPECT_THROW(catalog_from(""), EmptyCatalog);
  EXPECT_THROW(catalog_from("# header only\n"), EmptyCatalog);
}

TEST(Catalog, ParseErrorCarriesLineNumber) {
  try {
    catalog_from("0\tCCO\n1\tC(((\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(catalog_from("x\tCCO\n"), ParseError);
  EXPECT_THROW(catalog_from("0 CCO\n"), ParseError);
  EXPECT_THROW(desk_catalog().by_id(100000), UnknownBlock);
}

TEST(Templates, RejectsMalformedLines) {
  EXPECT_THROW(templates_from("1\t1\t[C:1]>>[C:1]\n1\t1\t[N:1]>>[N:1]\n"), DuplicateEntry);
  EXPECT_THROW(templates_from("1\t2\t[C:1]>>[C:1]\n"), ParseError);
  EXPECT_THROW(templates_from("1\t3\t[C:1]>>[C:1]\n"), ParseError);
  EXPECT_THROW(templates_from("0\t1\t[C:1]>>[C:1]\n"), ParseError);
  EXPECT_THROW(templates_from("1\t1\t[C:1>>[C:1]\n"), ParseError);
}

TEST(Apply, AmideCoupling) {
  const auto acid = chem::canonicalize("CC(=O)O");
  const auto amine = chem::canonicalize("CN");
  EXPECT_TRUE(applicable(amide(), {acid, amine}));
  EXPECT_FALSE(applicable(amide(), {chem::canonicalize("C"), chem::canonicalize("C")}));
  const auto product = apply(amide(), {acid, amine});
  EXPECT_EQ(product.smiles, chem::canonicalize("CNC(C)=O").smiles);
  EXPECT_EQ(apply(amide(), {acid, amine}), product);
  EXPECT_THROW(apply(amide(), {amine, acid}), NoProduct);
}

TEST(Apply, ArityChecks) {
  const TemplateSet uni = templates_from("1\t1\t[C:1](=O)[OH]>>[C:1](=O)OC\n");
  const auto acid = chem::canonicalize("CC(=O)O");
  EXPECT_THROW(applicable(uni[0], {acid, acid}), ArityMismatch);
  EXPECT_THROW(apply(amide(), {acid}), ArityMismatch);
  EXPECT_EQ(apply(uni[0], {acid}).smiles, chem::canonicalize("COC(C)=O").smiles);
}

TEST(SampleTree, DepthOneIsABlock) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const SyntheticTree t = sample_tree(desk_catalog(), desk_templates(), 1, rng);
    ASSERT_EQ(t.depth(), 1u);
    EXPECT_EQ(t.steps[0].reaction, kNoReaction);
    EXPECT_EQ(t.final, desk_catalog().by_id(*t.steps[0].block).mol.smiles);
  }
}

TEST(SampleTree, FixedSeedIsReproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sample_tree(desk_catalog(), desk_templates(), 4, a), sample_tree(desk_catalog(), desk_templates(), 4, b));
  }
}

TEST(SampleTree, ThousandSamplesReplay) {
  const CompatibilityIndex index(desk_catalog(), desk_templates());
  SamplerOptions options;
  options.max_depth = 4;
  Rng rng(2024);
  std::set<std::size_t> depths;
  std::set<int> reactions;
  int replayed = 0;
  for (int i = 0; i < 1000; ++i) {
    const SyntheticTree t = sample_tree(desk_catalog(), desk_templates(), index, options, rng);
    ASSERT_GE(t.depth(), 1u);
    ASSERT_LE(t.depth(), 4u);
    depths.insert(t.depth());
    for (const auto& s : t.steps) reactions.insert(s.reaction);
    EXPECT_EQ(replay(t, desk_catalog(), desk_templates()).smiles, t.final);
    ++replayed;
  }
  EXPECT_EQ(replayed, 1000);
  EXPECT_EQ(depths.size(), 4u);
  EXPECT_GE(reactions.size(), 15u);
}

TEST(SampleTree, UnimolecularSteps) {
  const Catalog cat = catalog_from("0\tCC(=O)O\n1\tCCC(=O)O\n");
  const TemplateSet uni = templates_from("5\t1\t[C:1](=O)[OH]>>[C:1](=O)OC\n");
  Rng rng(1);
  SamplerOptions options;
  options.max_depth = 4;
  const CompatibilityIndex index(cat, uni);
  for (int i = 0; i < 10; ++i) {
    const SyntheticTree t = sample_tree(cat, uni, index, options, rng);
    EXPECT_LE(t.depth(), 2u);
    if (t.depth() == 2) {
      EXPECT_FALSE(t.steps[1].block.has_value());
      EXPECT_NO_THROW(replay(t, cat, uni));
    }
  }
}

TEST(Replay, DetectsCorruption) {
  Rng rng(9);
  SyntheticTree t;
  do {
    t = sample_tree(desk_catalog(), desk_templates(), 4, rng);
  } while (t.depth() < 2);
  SyntheticTree bad = t;
  bad.steps[1].reaction = bad.steps[1].reaction % 20 + 1;
  EXPECT_THROW(replay(bad, desk_catalog(), desk_templates()), Error);
  SyntheticTree wrong = t;
  wrong.products.back() = "CCO";
  wrong.final = "CCO";
  EXPECT_THROW(replay(wrong, desk_catalog(), desk_templates()), ReplayMismatch);
  SyntheticTree missing = t;
  missing.steps[0].block = 99999;
  EXPECT_THROW(replay(missing, desk_catalog(), desk_templates()), UnknownBlock);
}

TEST(Replay, RootedTree) {
  std::vector<TreeStep> steps{{std::nullopt, kNoReaction, 0}, {desk_catalog().by_id(0).id, 1, 1}};
  // Block 0 is benzoic acid; the root is an amine in slot 1 of amide coupling.
  steps[1].order = 1;
  const SyntheticTree t = rebuild(steps, std::string("NCc1ccccc1"), desk_catalog(), desk_templates());
  EXPECT_EQ(t.final, chem::canonicalize("O=C(NCc1ccccc1)c1ccccc1").smiles);
  EXPECT_NO_THROW(replay(t, desk_catalog(), desk_templates()));
  EXPECT_EQ(tree_from_json(tree_to_json(t)), t);
}

TEST(TreeJson, RoundTripAndShape) {
  Rng rng(5);
  const SyntheticTree t = sample_tree(desk_catalog(), desk_templates(), 4, rng);
  const auto j = tree_to_json(t);
  EXPECT_TRUE(j.at("steps")[0].at("reaction").is_null());
  EXPECT_TRUE(j.contains("products"));
  EXPECT_EQ(j.at("final"), t.final);
  EXPECT_EQ(tree_from_json(j), t);
  EXPECT_THROW(tree_from_json(nlohmann::json::parse(R"({"steps":1})")), ParseError);
}

TEST(Dataset, TenTriplesDeterministic) {
  DatasetOptions options;
  options.n = 10;
  options.seed = 77;
  const auto a = make_dataset(desk_catalog(), desk_templates(), options);
  const auto b = make_dataset(desk_catalog(), desk_templates(), options);
  ASSERT_EQ(a.size(), 10u);
  std::ostringstream sa, sb;
  write_jsonl(sa, a);
  write_jsonl(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  for (const auto& t : a) {
    EXPECT_GT(t.graph.size(), 0u);
    EXPECT_NO_THROW(replay(t.tree, desk_catalog(), desk_templates()));
    const auto again = rederive_graph(t);
    ASSERT_EQ(again.size(), t.graph.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      EXPECT_EQ(again.points[i].cls, t.graph.points[i].cls);
      EXPECT_EQ(again.points[i].xyz, t.graph.points[i].xyz);
    }
  }
  std::istringstream in(sa.str());
  const auto back = read_jsonl(in);
  ASSERT_EQ(back.size(), a.size());
  EXPECT_EQ(back[3].tree, a[3].tree);
  EXPECT_EQ(back[3].conformer_seed, a[3].conformer_seed);
  EXPECT_DOUBLE_EQ(back[3].graph.points[0].xyz[1], a[3].graph.points[0].xyz[1]);
}

TEST(Dataset, MalformedJsonlReportsLine) {
  std::istringstream in("{\"steps\":[]}\nnot json\n");
  EXPECT_THROW(read_jsonl(in), ParseError);
}
