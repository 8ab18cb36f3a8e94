//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/eval/reports.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "synthphore/kernels/kernels.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::eval {

std::vector<synth::SyntheticTree> random_baseline(const synth::Catalog& catalog, const synth::TemplateSet& templates,
                                                  int n, std::uint64_t seed, int max_depth) {
  if (n < 1) throw InvalidArgument("random_baseline needs n >= 1");
  const synth::CompatibilityIndex index(catalog, templates);
  synth::SamplerOptions options;
  options.max_depth = max_depth;
  std::vector<synth::SyntheticTree> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    out.push_back(synth::sample_tree(catalog, templates, index, options, rng));
  }
  return out;
}

std::vector<chem::Molecule> finals(const std::vector<synth::SyntheticTree>& trees) {
  std::vector<chem::Molecule> out;
  out.reserve(trees.size());
  for (const auto& t : trees) out.push_back(chem::canonicalize(t.final));
  return out;
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size()), *lo, *hi};
}

double morgan_similarity(const chem::Molecule& a, const chem::Molecule& b) {
  return chem::tanimoto(chem::morgan_fp(a), chem::morgan_fp(b));
}

double murcko_similarity(const chem::Molecule& a, const chem::Molecule& b) {
  return chem::tanimoto(chem::morgan_fp(chem::murcko_scaffold(a)), chem::morgan_fp(chem::murcko_scaffold(b)));
}

SimilarityReport similarity_report(const std::vector<chem::Molecule>& generated, const chem::Molecule& reference) {
  SimilarityReport r;
  const auto ref_fp = chem::morgan_fp(reference);
  const auto ref_scaffold = chem::morgan_fp(chem::murcko_scaffold(reference));
  const std::size_t words = ref_fp.words().size();
  std::vector<std::uint64_t> fps, scaffolds;
  fps.reserve(generated.size() * words);
  scaffolds.reserve(generated.size() * words);
  for (const auto& m : generated) {
    const auto a = chem::morgan_fp(m);
    const auto b = chem::morgan_fp(chem::murcko_scaffold(m));
    fps.insert(fps.end(), a.words().begin(), a.words().end());
    scaffolds.insert(scaffolds.end(), b.words().begin(), b.words().end());
  }
  r.tanimoto.resize(generated.size());
  r.murcko_tanimoto.resize(generated.size());
  kernels::tanimoto_batch(ref_fp.words().data(), fps.data(), generated.size(), words, r.tanimoto.data(),
                          kernels::Exec::Parallel);
  kernels::tanimoto_batch(ref_scaffold.words().data(), scaffolds.data(), generated.size(), words,
                          r.murcko_tanimoto.data(), kernels::Exec::Parallel);
  r.tanimoto_agg = aggregate(r.tanimoto);
  r.murcko_agg = aggregate(r.murcko_tanimoto);
  return r;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double rank = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (rank - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

PropertyTable property_table(const std::vector<chem::Molecule>& molecules) {
  if (molecules.empty()) throw InvalidArgument("property table of an empty set");
  std::vector<double> mw, logp, qed;
  for (const auto& m : molecules) {
    const auto p = chem::properties(m);
    mw.push_back(p.mw);
    logp.push_back(p.logp);
    qed.push_back(p.qed);
  }
  PropertyTable t;
  t.count = molecules.size();
  t.mw_mean = aggregate(mw).mean;
  t.logp_p5 = percentile(logp, 0.05);
  t.logp_p95 = percentile(logp, 0.95);
  t.qed_mean = aggregate(qed).mean;
  return t;
}

nlohmann::json to_json(const SimilarityReport& r) {
  const auto agg = [](const Aggregate& a) { return nlohmann::json{{"mean", a.mean}, {"min", a.min}, {"max", a.max}}; };
  return {{"tanimoto", r.tanimoto},
          {"murcko_tanimoto", r.murcko_tanimoto},
          {"tanimoto_summary", agg(r.tanimoto_agg)},
          {"murcko_summary", agg(r.murcko_agg)}};
}

nlohmann::json to_json(const PropertyTable& t) {
  return {{"count", t.count}, {"mw_mean", t.mw_mean}, {"logp_p5", t.logp_p5}, {"logp_p95", t.logp_p95},
          {"qed_mean", t.qed_mean}};
}

void write_property_table(std::ostream& os, const std::vector<std::pair<std::string, PropertyTable>>& rows) {
  os << std::left << std::setw(16) << "Set" << std::right << std::setw(10) << "MW" << std::setw(10) << "LogP 5%"
     << std::setw(10) << "LogP 95%" << std::setw(8) << "QED" << '\n';
  os << std::fixed << std::setprecision(2);
  for (const auto& [name, t] : rows) {
    os << std::left << std::setw(16) << name << std::right << std::setw(10) << t.mw_mean << std::setw(10) << t.logp_p5
       << std::setw(10) << t.logp_p95 << std::setw(8) << t.qed_mean << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

void write_property_csv(std::ostream& os, const std::vector<std::pair<std::string, PropertyTable>>& rows) {
  os << "set,count,mw_mean,logp_p5,logp_p95,qed_mean\n";
  os << std::setprecision(10);
  for (const auto& [name, t] : rows) {
    os << name << ',' << t.count << ',' << t.mw_mean << ',' << t.logp_p5 << ',' << t.logp_p95 << ',' << t.qed_mean
       << '\n';
  }
}

}  // namespace synthphore::eval
