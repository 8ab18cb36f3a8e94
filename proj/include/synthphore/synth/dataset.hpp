//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "synthphore/chem/pharmacophore.hpp"
#include "synthphore/synth/tree.hpp"

namespace synthphore::synth {

struct TrainingTriple {
  chem::PharmacophoreGraph graph;
  SyntheticTree tree;
  std::uint64_t conformer_seed = 0;
};

struct DatasetOptions {
  std::size_t n = 10;
  int max_depth = 4;
  std::uint64_t seed = 0;
  // Minimum tree depth accepted (1 keeps single-block trees).
  int min_depth = 1;
  // Attempts per slot before giving up on that slot.
  int max_attempts = 1000;
};

struct DatasetStats {
  std::size_t embed_failures = 0;
  std::size_t empty_pharmacophores = 0;
  std::size_t shallow_trees = 0;
};

// Exactly options.n triples in slot order. Slot i draws from its own stream so
// output is independent of thread count. Throws SamplingExhausted when a slot
// cannot be filled within max_attempts.
std::vector<TrainingTriple> make_dataset(const Catalog& catalog, const TemplateSet& templates,
                                         const DatasetOptions& options, DatasetStats* stats = nullptr);

// Recomputes the graph from tree.final and conformer_seed.
chem::PharmacophoreGraph rederive_graph(const TrainingTriple& triple);

nlohmann::json graph_to_json(const chem::PharmacophoreGraph& g);
chem::PharmacophoreGraph graph_from_json(const nlohmann::json& j);
nlohmann::json triple_to_json(const TrainingTriple& t);
TrainingTriple triple_from_json(const nlohmann::json& j);

void write_jsonl(std::ostream& out, const std::vector<TrainingTriple>& triples);
void write_jsonl(const std::filesystem::path& path, const std::vector<TrainingTriple>& triples);
// Throws ParseError with the line number.
std::vector<TrainingTriple> read_jsonl(std::istream& in);
std::vector<TrainingTriple> read_jsonl(const std::filesystem::path& path);

}  // namespace synthphore::synth
