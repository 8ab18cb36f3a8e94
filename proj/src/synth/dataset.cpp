//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/synth/dataset.hpp"

#include <atomic>
#include <fstream>
#include <optional>

#include "synthphore/util/error.hpp"

namespace synthphore::synth {

std::vector<TrainingTriple> make_dataset(const Catalog& catalog, const TemplateSet& templates,
                                         const DatasetOptions& options, DatasetStats* stats) {
  const CompatibilityIndex index(catalog, templates);
  SamplerOptions sampler;
  sampler.max_depth = options.max_depth;
  std::vector<std::optional<TrainingTriple>> slots(options.n);
  std::atomic<std::size_t> embed_failures{0}, empty{0}, shallow{0};
  const auto n = static_cast<long>(options.n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(i)));
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
      SyntheticTree tree = sample_tree(catalog, templates, index, sampler, rng);
      if (static_cast<int>(tree.depth()) < options.min_depth) {
        ++shallow;
        continue;
      }
      const std::uint64_t conformer_seed = rng();
      try {
        const chem::Conformer conf = chem::gen_conformer(chem::canonicalize(tree.final), conformer_seed);
        slots[static_cast<std::size_t>(i)] = TrainingTriple{chem::extract_pharmacophores(conf), std::move(tree), conformer_seed};
        break;
      } catch (const EmbedFailure&) {
        ++embed_failures;
      } catch (const EmptyPharmacophore&) {
        ++empty;
      }
    }
  }
  std::vector<TrainingTriple> out;
  out.reserve(options.n);
  for (auto& s : slots) {
    if (!s) throw SamplingExhausted("could not fill a dataset slot within the attempt budget");
    out.push_back(std::move(*s));
  }
  if (stats) *stats = {embed_failures.load(), empty.load(), shallow.load()};
  return out;
}

chem::PharmacophoreGraph rederive_graph(const TrainingTriple& triple) {
  return chem::extract_pharmacophores(chem::gen_conformer(chem::canonicalize(triple.tree.final), triple.conformer_seed));
}

nlohmann::json graph_to_json(const chem::PharmacophoreGraph& g) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : g.points) {
    points.push_back({{"class", std::string(chem::feature_name(p.cls))}, {"xyz", {p.xyz[0], p.xyz[1], p.xyz[2]}}});
  }
  return points;
}

chem::PharmacophoreGraph graph_from_json(const nlohmann::json& j) {
  try {
    chem::PharmacophoreGraph g;
    for (const auto& p : j) {
      const auto xyz = p.at("xyz").get<std::vector<double>>();
      if (xyz.size() != 3) throw ParseError("xyz must have three components");
      g.points.push_back({chem::feature_from_name(p.at("class").get<std::string>()), {xyz[0], xyz[1], xyz[2]}});
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed pharmacophore points: ") + e.what());
  }
}

nlohmann::json triple_to_json(const TrainingTriple& t) {
  nlohmann::json j = tree_to_json(t.tree);
  j["points"] = graph_to_json(t.graph);
  j["conformer_seed"] = t.conformer_seed;
  return j;
}

TrainingTriple triple_from_json(const nlohmann::json& j) {
  TrainingTriple t;
  t.tree = tree_from_json(j);
  try {
    t.graph = graph_from_json(j.at("points"));
    t.conformer_seed = j.at("conformer_seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed triple: ") + e.what());
  }
  return t;
}

void write_jsonl(std::ostream& out, const std::vector<TrainingTriple>& triples) {
  for (const auto& t : triples) out << triple_to_json(t).dump() << '\n';
}

void write_jsonl(const std::filesystem::path& path, const std::vector<TrainingTriple>& triples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_jsonl(out, triples);
}

std::vector<TrainingTriple> read_jsonl(std::istream& in) {
  std::vector<TrainingTriple> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(triple_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrainingTriple> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_jsonl(in);
}

}  // namespace synthphore::synth
