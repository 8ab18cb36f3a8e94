//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Command-line front end. Exit codes: 0 success, 1 runtime error, 2 usage
// error, 3 external tool error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "synthphore/apps/optimizer.hpp"
#include "synthphore/eval/docking.hpp"
#include "synthphore/eval/reports.hpp"
#include "synthphore/train/trainer.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::synth {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DatasetOptions, n, max_depth, min_depth, max_attempts)
}  // namespace synthphore::synth

namespace synthphore::apps {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GenerationConfig, max_steps, mask_inapplicable, top_k, temperature)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GaConfig, cycles, population, topk_parents, neighbor_k)
}  // namespace synthphore::apps

namespace {

using namespace synthphore;
using nlohmann::json;

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;
constexpr int kToolError = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string config;
  std::string catalog;
  std::string templates;
  std::string checkpoint;
  bool json = false;
};

// Config sections are applied before flag parsing so explicit flags win.
json load_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) path = argv[i + 1];
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  return json::parse(in);
}

template <class T>
void merge_section(const json& config, const char* key, T& value) {
  if (!config.contains(key)) return;
  json j = value;
  j.merge_patch(config.at(key));
  value = j.get<T>();
}

synth::Catalog catalog_of(const Globals& g) {
  return synth::load_catalog(g.catalog.empty() ? synth::default_catalog_path() : std::filesystem::path(g.catalog));
}

synth::TemplateSet templates_of(const Globals& g) {
  return synth::load_templates(g.templates.empty() ? synth::default_templates_path()
                                                    : std::filesystem::path(g.templates));
}

train::Checkpoint checkpoint_of(const Globals& g) {
  if (g.checkpoint.empty()) throw InvalidArgument("--checkpoint is required");
  return train::load_checkpoint(g.checkpoint);
}

// Output stream: a file when a path is given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ParseError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

// One tree JSON object per line; accepts bare trees and dataset triples.
std::vector<synth::SyntheticTree> read_trees(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<synth::SyntheticTree> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      out.push_back(synth::tree_from_json(j.contains("tree") ? j.at("tree") : j));
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

// SMILES per line, or JSON lines carrying a "final" field.
std::vector<chem::Molecule> read_molecules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<chem::Molecule> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '{') {
      const json j = json::parse(line);
      const json& t = j.contains("tree") ? j.at("tree") : j;
      out.push_back(chem::canonicalize(t.at("final").get<std::string>()));
    } else {
      out.push_back(chem::canonicalize(line.substr(0, line.find_first_of(" \t"))));
    }
  }
  return out;
}

std::array<double, 3> parse_center(const std::string& s) {
  std::array<double, 3> c{};
  std::stringstream ss(s);
  std::string part;
  for (auto& v : c) {
    if (!std::getline(ss, part, ',')) throw InvalidArgument("--center expects x,y,z");
    v = std::stod(part);
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  json config;
  synth::DatasetOptions dopt;
  apps::GenerationConfig gcfg;
  apps::GaConfig ga;
  train::TrainConfig tc;
  nn::ModelConfig mc;
  try {
    config = load_config(argc, argv);
    merge_section(config, "dataset", dopt);
    merge_section(config, "generation", gcfg);
    merge_section(config, "ga", ga);
    merge_section(config, "train", tc);
    merge_section(config, "model", mc);
  } catch (const std::exception& e) {
    std::cerr << "usage error: bad config: " << e.what() << '\n';
    return kUsageError;
  }

  CLI::App app{"Pharmacophore-conditioned synthesizable molecule generation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--config", g.config, "JSON config with model/train/generation/ga/dataset sections");
  app.add_option("--catalog", g.catalog, "Building-block catalog TSV");
  app.add_option("--templates", g.templates, "Reaction template TSV");
  app.add_option("--checkpoint", g.checkpoint, "Model checkpoint");
  app.add_flag("--json", g.json, "Machine-readable JSON summary on stdout");

  // datagen
  auto* datagen = app.add_subcommand("datagen", "Sample (pharmacophore graph, synthetic tree) triples");
  std::string data_out;
  datagen->add_option("--n", dopt.n, "Number of triples")->capture_default_str();
  datagen->add_option("--max-depth", dopt.max_depth, "Maximum reaction depth")->capture_default_str();
  datagen->add_option("--min-depth", dopt.min_depth, "Minimum reaction depth")->capture_default_str();
  datagen->add_option("--out", data_out, "JSONL output (default stdout)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train on a JSONL dataset and write a checkpoint");
  std::string train_data;
  std::string metrics_path;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> batch_size;
  std::optional<double> stop_accuracy;
  train_cmd->add_option("--data", train_data, "Dataset JSONL")->required();
  train_cmd->add_option("--epochs", epochs, "Epoch budget");
  train_cmd->add_option("--lr", lr, "Adam learning rate");
  train_cmd->add_option("--batch-size", batch_size, "Examples per step");
  train_cmd->add_option("--stop-accuracy", stop_accuracy, "Stop once both accuracies reach this value");
  train_cmd->add_option("--metrics", metrics_path, "Per-epoch metrics CSV");

  // generate
  auto* generate = app.add_subcommand("generate", "Decode synthetic routes from pharmacophores");
  std::string gen_data;
  std::string gen_smiles;
  std::string gen_out;
  generate->add_option("--data", gen_data, "Dataset JSONL; decodes every stored graph and reports recovery");
  generate->add_option("--smiles", gen_smiles, "Reference ligand; its pharmacophores condition decoding");
  generate->add_option("--max-steps", gcfg.max_steps, "Maximum building blocks")->capture_default_str();
  generate->add_option("--out", gen_out, "JSONL output (default stdout)");

  // expand
  auto* expand = app.add_subcommand("expand", "Hit expansion around a seed molecule");
  std::string seed_smiles;
  int n_analogs = 10;
  std::string expand_out;
  expand->add_option("--smiles", seed_smiles, "Seed molecule")->required();
  expand->add_option("--n", n_analogs, "Number of analogs")->capture_default_str();
  expand->add_option("--top-k", gcfg.top_k, "Sampling pool size")->capture_default_str();
  expand->add_option("--temperature", gcfg.temperature, "Sampling temperature")->capture_default_str();
  expand->add_option("--out", expand_out, "JSONL output (default stdout)");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Genetic optimization of synthetic routes");
  std::string seeds_path;
  std::string scorer_name = "neg_logp";
  std::string lineage_path;
  std::string opt_out;
  optimize->add_option("--seeds", seeds_path, "Seed routes JSONL")->required();
  optimize->add_option("--scorer", scorer_name, "neg_logp, logp, qed or neg_mw")->capture_default_str();
  optimize->add_option("--cycles", ga.cycles)->capture_default_str();
  optimize->add_option("--population", ga.population, "Children per cycle")->capture_default_str();
  optimize->add_option("--topk", ga.topk_parents, "Elites kept per cycle")->capture_default_str();
  optimize->add_option("--neighbor-k", ga.neighbor_k, "Mutation pool size")->capture_default_str();
  optimize->add_option("--lineage", lineage_path, "Lineage JSONL");
  optimize->add_option("--out", opt_out, "Ranked elites JSONL (default stdout)");

  // neighbors
  auto* neighbors = app.add_subcommand("neighbors", "Nearest building blocks in embedding space");
  int block_id = 0;
  int k_neighbors = 5;
  neighbors->add_option("--block", block_id, "Catalog block id")->required();
  neighbors->add_option("--k", k_neighbors)->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Similarity and property reports");
  std::string eval_input;
  std::string eval_reference;
  int baseline_n = 0;
  std::string eval_csv;
  eval_cmd->add_option("--input", eval_input, "Molecules: SMILES lines or route JSONL");
  eval_cmd->add_option("--reference", eval_reference, "Reference SMILES for the similarity report");
  eval_cmd->add_option("--baseline", baseline_n, "Also report n random-baseline molecules");
  eval_cmd->add_option("--csv", eval_csv, "Property table CSV");

  // dock
  auto* dock = app.add_subcommand("dock", "Score ligands with an external docking program");
  eval::DockingJob job;
  std::string ligands_path;
  std::string center;
  std::string receptor;
  dock->add_option("--receptor", receptor, "Prepared receptor PDBQT")->required();
  dock->add_option("--ligands", ligands_path, "Molecules: SMILES lines or route JSONL")->required();
  dock->add_option("--exe", job.executable, "SMINA-compatible executable")->capture_default_str();
  dock->add_option("--workers", job.workers, "Concurrent docking processes")->capture_default_str();
  dock->add_option("--num-modes", job.num_modes, "Poses per ligand (at most 10)")->capture_default_str();
  dock->add_option("--center", center, "Box centre x,y,z (default: ligand centroid)");
  dock->add_option("--work-dir", job.work_dir, "Directory for ligand, pose and log files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    json summary = json::object();

    if (datagen->parsed()) {
      dopt.seed = g.seed;
      synth::DatasetStats stats;
      const auto triples = synth::make_dataset(catalog_of(g), templates_of(g), dopt, &stats);
      Output out(data_out);
      synth::write_jsonl(out.get(), triples);
      summary = {{"triples", triples.size()}, {"embed_failures", stats.embed_failures},
                 {"empty_pharmacophores", stats.empty_pharmacophores}};
    } else if (train_cmd->parsed()) {
      if (g.checkpoint.empty()) throw InvalidArgument("--checkpoint is required");
      const auto catalog = catalog_of(g);
      const auto templates = templates_of(g);
      if (!config.contains("model") || !config["model"].contains("reactions")) mc.reactions = templates.max_id() + 1;
      tc.seed = g.seed;
      if (epochs) tc.epochs = *epochs;
      if (lr) tc.lr = *lr;
      if (batch_size) tc.batch_size = *batch_size;
      if (stop_accuracy) tc.stop_accuracy = *stop_accuracy;
      const auto examples = train::make_examples(synth::read_jsonl(std::filesystem::path(train_data)), catalog,
                                                 mc.fp_radius);
      auto result = train::train(examples, catalog, tc, mc, [&](const train::EpochMetrics& m) {
        if (!g.json) {
          std::cerr << "epoch " << m.epoch << " L_B " << m.block_loss << " L_rxn " << m.rxn_loss << " block_acc "
                    << m.block_acc << " rxn_acc " << m.rxn_acc << '\n';
        }
      });
      train::Checkpoint ckpt{train::kCheckpointVersion, tc, catalog.digest(), templates.digest(),
                             std::move(result.model)};
      train::save_checkpoint(ckpt, g.checkpoint);
      if (!metrics_path.empty()) {
        Output out(metrics_path);
        train::write_metrics_csv(out.get(), result.metrics);
      }
      const auto& last = result.metrics.back();
      summary = {{"epochs", last.epoch}, {"block_loss", last.block_loss}, {"rxn_loss", last.rxn_loss},
                 {"block_acc", last.block_acc}, {"rxn_acc", last.rxn_acc}};
    } else if (generate->parsed()) {
      const auto catalog = catalog_of(g);
      const auto templates = templates_of(g);
      const apps::Generator gen(checkpoint_of(g), catalog, templates);
      Output out(gen_out);
      if (!gen_data.empty()) {
        const auto triples = synth::read_jsonl(std::filesystem::path(gen_data));
        std::size_t recovered = 0;
        std::size_t dead_ends = 0;
        for (const auto& t : triples) {
          json line;
          try {
            const auto tree = gen.generate(t.graph, gcfg);
            const bool same = apps::same_route(tree, t.tree);
            recovered += same;
            line = {{"tree", synth::tree_to_json(tree)}, {"recovered", same}};
          } catch (const DeadEnd& e) {
            ++dead_ends;
            line = {{"error", e.what()}};
          }
          out.get() << line.dump() << '\n';
        }
        summary = {{"graphs", triples.size()}, {"recovered", recovered}, {"dead_ends", dead_ends},
                   {"recovery", triples.empty() ? 0.0 : static_cast<double>(recovered) / triples.size()}};
      } else if (!gen_smiles.empty()) {
        const auto mol = chem::canonicalize(gen_smiles);
        const auto graph = chem::extract_pharmacophores(chem::gen_conformer(mol, g.seed));
        const auto tree = gen.generate(graph, gcfg);
        out.get() << json{{"tree", synth::tree_to_json(tree)}}.dump() << '\n';
        summary = {{"final", tree.final}, {"steps", tree.steps.size()}};
      } else {
        throw InvalidArgument("generate needs --data or --smiles");
      }
    } else if (expand->parsed()) {
      const auto catalog = catalog_of(g);
      const auto templates = templates_of(g);
      const apps::Generator gen(checkpoint_of(g), catalog, templates);
      const auto seed = chem::canonicalize(seed_smiles);
      const auto trees = gen.hit_expand(seed, n_analogs, gcfg, g.seed);
      Output out(expand_out);
      std::vector<chem::Molecule> analogs;
      for (const auto& t : trees) {
        analogs.push_back(chem::canonicalize(t.final));
        out.get() << json{{"tree", synth::tree_to_json(t)},
                          {"tanimoto", eval::morgan_similarity(analogs.back(), seed)}}.dump()
                  << '\n';
      }
      summary = {{"analogs", trees.size()}};
      if (!analogs.empty()) summary["similarity"] = eval::to_json(eval::similarity_report(analogs, seed));
    } else if (optimize->parsed()) {
      const auto catalog = catalog_of(g);
      const auto templates = templates_of(g);
      const apps::Generator gen(checkpoint_of(g), catalog, templates);
      ga.seed = g.seed;
      const auto result = apps::optimize(gen, read_trees(seeds_path), apps::builtin_scorer(scorer_name), ga);
      Output out(opt_out);
      for (std::size_t r = 0; r < result.elites.size(); ++r) {
        const auto& c = result.elites[r];
        out.get() << json{{"rank", r + 1}, {"id", c.id}, {"score", c.score}, {"tree", synth::tree_to_json(c.tree)}}
                         .dump()
                  << '\n';
      }
      if (!lineage_path.empty()) {
        Output lineage(lineage_path);
        apps::write_lineage_jsonl(lineage.get(), result.lineage);
      }
      summary = {{"best_per_cycle", result.best_per_cycle}, {"children", result.lineage.size()}};
    } else if (neighbors->parsed()) {
      const auto catalog = catalog_of(g);
      const auto templates = templates_of(g);
      const apps::Generator gen(checkpoint_of(g), catalog, templates);
      json rows = json::array();
      for (int id : gen.nearest_blocks(block_id, k_neighbors)) {
        rows.push_back({{"id", id},
                        {"smiles", catalog.by_id(id).mol.smiles},
                        {"cosine", gen.zprime_cosine(block_id, id)},
                        {"tanimoto", eval::morgan_similarity(catalog.by_id(id).mol, catalog.by_id(block_id).mol)}});
      }
      summary = {{"block", block_id}, {"neighbors", rows}};
      if (!g.json) {
        for (const auto& r : rows) {
          std::cout << r["id"] << '\t' << r["smiles"].get<std::string>() << '\t' << r["cosine"] << '\n';
        }
      }
    } else if (eval_cmd->parsed()) {
      std::vector<std::pair<std::string, eval::PropertyTable>> rows;
      std::vector<chem::Molecule> input;
      if (!eval_input.empty()) {
        input = read_molecules(eval_input);
        rows.emplace_back("input", eval::property_table(input));
        summary["input"] = eval::to_json(rows.back().second);
      }
      std::vector<chem::Molecule> baseline;
      if (baseline_n > 0) {
        baseline = eval::finals(eval::random_baseline(catalog_of(g), templates_of(g), baseline_n, g.seed));
        rows.emplace_back("baseline", eval::property_table(baseline));
        summary["baseline"] = eval::to_json(rows.back().second);
      }
      if (rows.empty()) throw InvalidArgument("eval needs --input or --baseline");
      if (!eval_reference.empty()) {
        const auto ref = chem::canonicalize(eval_reference);
        if (!input.empty()) summary["input_similarity"] = eval::to_json(eval::similarity_report(input, ref));
        if (!baseline.empty()) summary["baseline_similarity"] = eval::to_json(eval::similarity_report(baseline, ref));
      }
      if (!eval_csv.empty()) {
        Output csv(eval_csv);
        eval::write_property_csv(csv.get(), rows);
      }
      if (!g.json) {
        eval::write_property_table(std::cout, rows);
        for (const char* key : {"input_similarity", "baseline_similarity"}) {
          if (!summary.contains(key)) continue;
          std::cout << key << ": tanimoto mean " << summary[key]["tanimoto_summary"]["mean"] << ", murcko mean "
                    << summary[key]["murcko_summary"]["mean"] << '\n';
        }
      }
    } else if (dock->parsed()) {
      job.receptor = receptor;
      job.ligands = read_molecules(ligands_path);
      job.seed = g.seed;
      if (!center.empty()) job.center = parse_center(center);
      json rows = json::array();
      for (const auto& r : eval::dock(job)) {
        rows.push_back({{"smiles", r.smiles}, {"best_score", r.best_score}, {"modes", r.mode_scores}});
        if (!g.json) std::cout << r.smiles << '\t' << r.best_score << '\n';
      }
      summary = {{"results", rows}};
    }

    if (g.json) std::cout << summary.dump() << '\n';
    return 0;
  } catch (const ExternalToolMissing& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kToolError;
  } catch (const ToolFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kToolError;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
