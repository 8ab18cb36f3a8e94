//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "synthphore/synth/tree.hpp"

namespace synthphore::eval {

// n random replay-valid routes; their finals form the baseline molecule set.
std::vector<synth::SyntheticTree> random_baseline(const synth::Catalog& catalog, const synth::TemplateSet& templates,
                                                  int n, std::uint64_t seed, int max_depth = 4);
std::vector<chem::Molecule> finals(const std::vector<synth::SyntheticTree>& trees);

struct Aggregate {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Aggregate aggregate(const std::vector<double>& values);

// Morgan radius 2 / 4096 bits, overall and on Murcko scaffolds. An acyclic
// molecule has an empty scaffold whose fingerprint is all zeros; two empty
// scaffolds score 1, an empty against a non-empty one scores 0.
struct SimilarityReport {
  std::vector<double> tanimoto;
  std::vector<double> murcko_tanimoto;
  Aggregate tanimoto_agg;
  Aggregate murcko_agg;
};

SimilarityReport similarity_report(const std::vector<chem::Molecule>& generated, const chem::Molecule& reference);

double morgan_similarity(const chem::Molecule& a, const chem::Molecule& b);
double murcko_similarity(const chem::Molecule& a, const chem::Molecule& b);

struct PropertyTable {
  std::size_t count = 0;
  double mw_mean = 0.0;
  double logp_p5 = 0.0;
  double logp_p95 = 0.0;
  double qed_mean = 0.0;
};

// Linear interpolation between order statistics at rank q * (n - 1).
double percentile(std::vector<double> values, double q);

PropertyTable property_table(const std::vector<chem::Molecule>& molecules);

nlohmann::json to_json(const SimilarityReport& r);
nlohmann::json to_json(const PropertyTable& t);

// Rows of "Set | MW | LogP 5% | LogP 95% | QED".
void write_property_table(std::ostream& os, const std::vector<std::pair<std::string, PropertyTable>>& rows);
void write_property_csv(std::ostream& os, const std::vector<std::pair<std::string, PropertyTable>>& rows);

}  // namespace synthphore::eval
