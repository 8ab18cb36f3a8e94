//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "synthphore/apps/optimizer.hpp"
#include "synthphore/eval/docking.hpp"
#include "synthphore/eval/reports.hpp"
#include "synthphore/kernels/kernels.hpp"
#include "synthphore/util/error.hpp"
#include "test_support.hpp"

namespace synthphore {
namespace {

using kernels::Exec;

template <class T>
std::vector<T> random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(uniform(rng, -1.0, 1.0));
  return v;
}

TEST(Kernels, ParallelMatchesSerialBitwise) {
  const std::size_t m = 37, n = 29, k = 41;
  const auto a = random_vec<float>(m * k, 1);
  const auto b = random_vec<float>(k * n, 2);
  std::vector<float> c1(m * n), c2(m * n);
  kernels::gemm(a.data(), b.data(), c1.data(), m, n, k, Exec::Serial);
  kernels::gemm(a.data(), b.data(), c2.data(), m, n, k, Exec::Parallel);
  EXPECT_EQ(c1, c2);
  for (std::size_t i = 0; i < m; i += 7) {
    for (std::size_t j = 0; j < n; j += 5) {
      double ref = 0;
      for (std::size_t t = 0; t < k; ++t) ref += static_cast<double>(a[i * k + t]) * b[t * n + j];
      EXPECT_NEAR(c1[i * n + j], ref, 1e-4);
    }
  }

  const auto x = random_vec<double>(50 * 3, 3);
  std::vector<double> d1(2500), d2(2500);
  kernels::pairwise_sqdist(x.data(), 50, 3, d1.data(), Exec::Serial);
  kernels::pairwise_sqdist(x.data(), 50, 3, d2.data(), Exec::Parallel);
  EXPECT_EQ(d1, d2);
  EXPECT_EQ(d1[0], 0.0);
  const double dx = x[3] - x[0], dy = x[4] - x[1], dz = x[5] - x[2];
  EXPECT_NEAR(d1[1], dx * dx + dy * dy + dz * dz, 1e-14);

  const auto rows = random_vec<float>(100 * 16, 4);
  std::vector<float> s1(100), s2(100);
  kernels::cosine_scan(rows.data(), rows.data(), 100, 16, s1.data(), Exec::Serial);
  kernels::cosine_scan(rows.data(), rows.data(), 100, 16, s2.data(), Exec::Parallel);
  EXPECT_EQ(s1, s2);
  EXPECT_NEAR(s1[0], 1.0f, 1e-6f);

  const auto& cat = testing::desk_catalog();
  const auto q = chem::morgan_fp(cat[0].mol);
  const std::size_t words = q.words().size();
  std::vector<std::uint64_t> packed;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto fp = chem::morgan_fp(cat[i].mol);
    packed.insert(packed.end(), fp.words().begin(), fp.words().end());
  }
  std::vector<double> t1(20), t2(20);
  kernels::tanimoto_batch(q.words().data(), packed.data(), 20, words, t1.data(), Exec::Serial);
  kernels::tanimoto_batch(q.words().data(), packed.data(), 20, words, t2.data(), Exec::Parallel);
  EXPECT_EQ(t1, t2);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_DOUBLE_EQ(t1[i], chem::tanimoto(q, chem::morgan_fp(cat[i].mol)));
}

TEST(Reports, PercentilesInterpolateLinearly) {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(i);
  EXPECT_DOUBLE_EQ(eval::percentile(v, 0.05), 0.5);
  EXPECT_DOUBLE_EQ(eval::percentile(v, 0.95), 9.5);
  EXPECT_DOUBLE_EQ(eval::percentile({2.5, 2.5, 2.5}, 0.05), 2.5);
  EXPECT_DOUBLE_EQ(eval::percentile({2.5, 2.5, 2.5}, 0.95), 2.5);
  EXPECT_THROW(eval::percentile({}, 0.5), InvalidArgument);
}

TEST(Reports, PropertyTableOfConstantSet) {
  const auto m = chem::canonicalize("CCO");
  const auto t = eval::property_table({m, m, m});
  EXPECT_EQ(t.count, 3u);
  EXPECT_DOUBLE_EQ(t.logp_p5, t.logp_p95);
  EXPECT_DOUBLE_EQ(t.logp_p5, chem::properties(m).logp);
  std::ostringstream os;
  eval::write_property_table(os, {{"set", t}});
  EXPECT_NE(os.str().find("LogP 5%"), std::string::npos);
}

TEST(Reports, SimilarityReport) {
  const auto ref = chem::canonicalize("c1ccccc1CC(=O)O");
  const auto self = eval::similarity_report({ref}, ref);
  EXPECT_DOUBLE_EQ(self.tanimoto_agg.mean, 1.0);
  EXPECT_DOUBLE_EQ(self.murcko_agg.mean, 1.0);
  const auto acyclic = eval::similarity_report({chem::canonicalize("CCCCO")}, ref);
  EXPECT_DOUBLE_EQ(acyclic.murcko_tanimoto[0], 0.0);
  const auto both_empty = eval::similarity_report({chem::canonicalize("CCCCO")}, chem::canonicalize("CCN"));
  EXPECT_DOUBLE_EQ(both_empty.murcko_tanimoto[0], 1.0);

  const std::vector<chem::Molecule> set = {chem::canonicalize("c1ccccc1C(=O)N"), chem::canonicalize("c1ccncc1CC"),
                                           chem::canonicalize("OC(=O)CCC")};
  const auto r = eval::similarity_report(set, ref);
  double sum = 0, lo = 1, hi = 0;
  for (const auto& m : set) {
    const double t = chem::tanimoto(chem::morgan_fp(m), chem::morgan_fp(ref));
    sum += t;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  EXPECT_DOUBLE_EQ(r.tanimoto_agg.mean, sum / 3);
  EXPECT_DOUBLE_EQ(r.tanimoto_agg.min, lo);
  EXPECT_DOUBLE_EQ(r.tanimoto_agg.max, hi);
  for (double v : r.murcko_tanimoto) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Reports, RandomBaselineIsReplayableAndSeeded) {
  const auto& cat = testing::desk_catalog();
  const auto& tpl = testing::desk_templates();
  const auto a = eval::random_baseline(cat, tpl, 5, 42);
  const auto b = eval::random_baseline(cat, tpl, 5, 42);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(synth::replay(a[i], cat, tpl).smiles, a[i].final);
    EXPECT_EQ(a[i].final, b[i].final);
  }
}

std::string fixture(const char* name) {
  std::ifstream in(std::filesystem::path(SYNTHPHORE_DATA_DIR) / "fixtures" / name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Docking, ParsesAffinityTable) {
  const auto scores = eval::parse_affinity_table(fixture("docking_output.txt"));
  const std::vector<double> expected = {-8.4, -8.1, -7.9, -7.6, -7.2, -7.0, -6.8, -6.7, -6.5};
  EXPECT_EQ(scores, expected);
  EXPECT_THROW(eval::parse_affinity_table("no table here"), ToolFailure);
}

TEST(Docking, MissingBinaryAndEmptyJob) {
  eval::DockingJob job;
  EXPECT_TRUE(eval::dock(job).empty());
  job.ligands = {chem::canonicalize("CCO")};
  job.executable = "synthphore-no-such-docking-tool";
  EXPECT_THROW(eval::dock(job), ExternalToolMissing);
}

TEST(Docking, RunsExternalProgramThroughWorkerPool) {
  const auto dir = std::filesystem::temp_directory_path() / "synthphore_dock_test";
  std::filesystem::create_directories(dir);
  const auto exe = dir / "fake_dock.sh";
  {
    std::ofstream s(exe);
    s << "#!/bin/sh\ncat '" << (std::filesystem::path(SYNTHPHORE_DATA_DIR) / "fixtures" / "docking_output.txt").string()
      << "'\n";
  }
  std::filesystem::permissions(exe, std::filesystem::perms::owner_all | std::filesystem::perms::group_exec |
                                        std::filesystem::perms::others_exec);
  eval::DockingJob job;
  job.executable = exe.string();
  job.receptor = dir / "receptor.pdbqt";
  job.work_dir = dir / "work";
  job.ligands = {chem::canonicalize("CCO"), chem::canonicalize("c1ccccc1O"), chem::canonicalize("CC(=O)N")};
  const auto results = eval::dock(job);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) EXPECT_DOUBLE_EQ(r.best_score, -8.4);
  EXPECT_NE(eval::to_pdbqt(chem::gen_conformer(job.ligands[1], 0)).find(" A"), std::string::npos);
  const auto argv = eval::docking_command(job, exe, "l.pdbqt", "o.pdbqt", {1, 2, 3});
  EXPECT_NE(std::find(argv.begin(), argv.end(), "--size_x"), argv.end());
}

// Apps on an untrained model: only structural contracts hold.
class AppsTest : public ::testing::Test {
 protected:
  static const apps::Generator& gen() {
    static const apps::Generator g(
        train::Checkpoint{train::kCheckpointVersion, train::TrainConfig{}, testing::desk_catalog().digest(),
                          testing::desk_templates().digest(), nn::Model<float>(testing::tiny_config(), 21)},
        testing::desk_catalog(), testing::desk_templates());
    return g;
  }
};

TEST_F(AppsTest, CatalogMismatchIsRejected) {
  train::Checkpoint ckpt{train::kCheckpointVersion, train::TrainConfig{}, 1, 2, nn::Model<float>(testing::tiny_config(), 1)};
  EXPECT_THROW(apps::Generator(ckpt, testing::desk_catalog(), testing::desk_templates()), CatalogMismatch);
}

TEST_F(AppsTest, GeneratedRoutesReplay) {
  const auto& cat = testing::desk_catalog();
  const auto& tpl = testing::desk_templates();
  int made = 0;
  for (int i = 0; i < 10; ++i) {
    const auto mol = cat[static_cast<std::size_t>(i * 13)].mol;
    chem::PharmacophoreGraph graph;
    try {
      graph = chem::extract_pharmacophores(chem::gen_conformer(mol, 1));
    } catch (const EmptyPharmacophore&) {
      continue;
    }
    apps::GenerationConfig cfg;
    try {
      const auto tree = gen().generate(graph, cfg);
      EXPECT_EQ(synth::replay(tree, cat, tpl).smiles, tree.final);
      EXPECT_LE(static_cast<int>(tree.steps.size()), cfg.max_steps);
      cfg.max_steps = 1;
      const auto one = gen().generate(graph, cfg);
      ASSERT_EQ(one.steps.size(), 1u);
      EXPECT_EQ(one.steps[0].reaction, synth::kNoReaction);
      ++made;
    } catch (const DeadEnd&) {
    }
  }
  EXPECT_GT(made, 0);
}

TEST_F(AppsTest, NearestBlocksContract) {
  EXPECT_TRUE(gen().nearest_blocks(0, 0).empty());
  const auto n = gen().nearest_blocks(0, 5);
  ASSERT_EQ(n.size(), 5u);
  EXPECT_EQ(std::count(n.begin(), n.end(), 0), 0);
  for (std::size_t i = 1; i < n.size(); ++i) EXPECT_GE(gen().zprime_cosine(0, n[i - 1]), gen().zprime_cosine(0, n[i]));
  EXPECT_THROW(gen().nearest_blocks(100000, 3), UnknownBlock);
}

TEST_F(AppsTest, HitExpansionKeepsSeedAsRoot) {
  const auto& cat = testing::desk_catalog();
  const auto seed = chem::canonicalize("NCc1ccccc1");
  EXPECT_TRUE(gen().hit_expand(seed, 0, {}, 1).empty());
  const auto trees = gen().hit_expand(seed, 4, {}, 1);
  ASSERT_EQ(trees.size(), 4u);
  for (const auto& t : trees) {
    ASSERT_TRUE(t.root.has_value());
    EXPECT_EQ(*t.root, seed.smiles);
    EXPECT_FALSE(t.steps[0].block.has_value());
    EXPECT_GE(t.steps.size(), 2u);
    EXPECT_EQ(synth::replay(t, cat, testing::desk_templates()).smiles, t.final);
  }
}

TEST_F(AppsTest, OptimizerElitismAndLineage) {
  const auto& cat = testing::desk_catalog();
  const auto& tpl = testing::desk_templates();
  std::vector<synth::SyntheticTree> seeds = eval::random_baseline(cat, tpl, 6, 5, 3);
  apps::GaConfig ga;
  ga.population = 12;
  ga.topk_parents = 6;
  ga.neighbor_k = 4;
  ga.seed = 2;

  const apps::Scorer flat{"flat", [](const chem::Molecule&) { return 1.0; }};
  const auto r0 = apps::optimize(gen(), seeds, flat, ga);
  ASSERT_EQ(r0.elites.size(), 6u);
  for (std::size_t i = 0; i < r0.elites.size(); ++i) EXPECT_EQ(r0.elites[i].id, static_cast<int>(i));

  const auto r = apps::optimize(gen(), seeds, apps::builtin_scorer("neg_logp"), ga);
  ASSERT_EQ(r.best_per_cycle.size(), 4u);
  for (std::size_t c = 1; c < r.best_per_cycle.size(); ++c) EXPECT_GE(r.best_per_cycle[c], r.best_per_cycle[c - 1]);
  for (const auto& e : r.elites) EXPECT_EQ(synth::replay(e.tree, cat, tpl).smiles, e.tree.final);
  std::ostringstream os;
  apps::write_lineage_jsonl(os, r.lineage);
  if (!r.lineage.empty()) {
    const auto j = nlohmann::json::parse(os.str().substr(0, os.str().find('\n')));
    for (const char* key : {"cycle", "parent_id", "child_id", "mutated_step", "old_block", "new_block", "reaction", "score"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
  }
  EXPECT_THROW(apps::optimize(gen(), {}, flat, ga), ExtinctPopulation);
  EXPECT_THROW(apps::builtin_scorer("nope"), ParseError);
}

}  // namespace
}  // namespace synthphore
