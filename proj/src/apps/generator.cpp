//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/apps/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synthphore/kernels/kernels.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::apps {

namespace {

nn::SparseFp product_bits(const chem::Molecule& m, int radius) { return nn::sparse_bits(chem::morgan_fp(m, radius)); }

}  // namespace

Generator::Generator(train::Checkpoint checkpoint, const synth::Catalog& catalog, const synth::TemplateSet& templates)
    : ckpt_(std::move(checkpoint)), catalog_(catalog), templates_(templates) {
  train::check_catalog(ckpt_, catalog_);
  if (ckpt_.model.config.reactions <= templates_.max_id()) {
    throw CatalogMismatch("checkpoint reaction vocabulary is smaller than the template set");
  }
  std::vector<nn::SparseFp> fps;
  std::vector<int> ids;
  for (const auto& b : catalog_.blocks()) {
    fps.push_back(nn::sparse_bits(b.fp));
    ids.push_back(b.id);
  }
  index_ = nn::build_index(ckpt_.model.decoder, fps, ids);
}

nn::Mat<float> Generator::memory_for(const chem::PharmacophoreGraph& graph) const {
  const auto [f, x] = nn::graph_tensors<float>(graph);
  return ckpt_.model.encoder.forward(f, x).h;
}

std::vector<std::size_t> Generator::rank_blocks(const nn::RowVec<float>& z, const GenerationConfig& config, Rng* rng,
                                                bool allow_end) const {
  if (!(z.norm() > 0.0f)) throw ZeroVector("decoder produced a zero vector");
  std::vector<float> cos(index_.size());
  kernels::cosine_scan(z.data(), index_.zprime.data(), index_.size(), static_cast<std::size_t>(index_.zprime.cols()),
                       cos.data(), kernels::Exec::Serial);
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < index_.size(); ++r) {
    if (allow_end || index_.ids[r] != nn::kEndBlock) order.push_back(r);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cos[a] != cos[b]) return cos[a] > cos[b];
    return index_.ids[a] < index_.ids[b];
  });
  if (config.top_k <= 0 || rng == nullptr) return order;
  const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(config.top_k), order.size());
  std::vector<std::size_t> head(order.begin(), order.begin() + static_cast<long>(pool));
  std::vector<std::size_t> sampled;
  while (!head.empty()) {
    std::vector<double> w(head.size());
    const double top = cos[head.front()];
    double total = 0.0;
    for (std::size_t i = 0; i < head.size(); ++i) total += w[i] = std::exp((cos[head[i]] - top) / config.temperature);
    double u = uniform01(*rng) * total;
    std::size_t pick = head.size() - 1;
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (u < w[i]) {
        pick = i;
        break;
      }
      u -= w[i];
    }
    sampled.push_back(head[pick]);
    head.erase(head.begin() + static_cast<long>(pick));
  }
  sampled.insert(sampled.end(), order.begin() + static_cast<long>(pool), order.end());
  return sampled;
}

std::optional<Generator::StepChoice> Generator::choose_reaction(const nn::RowVec<float>& z, std::size_t block_row,
                                                                const chem::Molecule& current,
                                                                const GenerationConfig& config) const {
  const auto& block = catalog_[block_row];
  const auto probs = nn::predict_reaction(ckpt_.model.decoder, z, nn::RowVec<float>(index_.zprime.row(static_cast<Eigen::Index>(block_row))));
  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return probs[static_cast<std::size_t>(a)] > probs[static_cast<std::size_t>(b)]; });
  for (int rid : order) {
    if (rid == synth::kNoReaction || !templates_.contains(rid)) continue;
    const auto& tpl = templates_.by_id(rid);
    if (tpl.arity != 2) continue;
    for (int o = 0; o < 2; ++o) {
      const std::vector<chem::Molecule> reactants =
          o == 0 ? std::vector<chem::Molecule>{current, block.mol} : std::vector<chem::Molecule>{block.mol, current};
      try {
        if (!synth::applicable(tpl, reactants)) continue;
        return StepChoice{rid, o, synth::apply(tpl, reactants)};
      } catch (const NoProduct&) {
      }
    }
    if (!config.mask_inapplicable) return std::nullopt;
  }
  return std::nullopt;
}

void Generator::decode_from(synth::SyntheticTree& tree, nn::TokenSequence& tokens, chem::Molecule current,
                            const nn::Mat<float>& memory, const GenerationConfig& config, Rng* rng) const {
  const int radius = ckpt_.model.config.fp_radius;
  while (static_cast<int>(tree.steps.size()) < config.max_steps) {
    const nn::Mat<float> Z = ckpt_.model.decoder.forward(tokens, memory);
    const nn::RowVec<float> z = Z.row(Z.rows() - 1);
    const auto ranked = rank_blocks(z, config, rng, true);
    const std::size_t row = ranked.front();
    if (index_.ids[row] == nn::kEndBlock) return;
    const auto choice = choose_reaction(z, row, current, config);
    if (!choice) return;  // nothing applicable: treated as END
    tree.steps.push_back({catalog_[row].id, choice->reaction, choice->order});
    tree.products.push_back(choice->product.smiles);
    tree.final = choice->product.smiles;
    current = choice->product;
    tokens.fps.push_back(product_bits(current, radius));
  }
}

synth::SyntheticTree Generator::generate(const chem::PharmacophoreGraph& graph,
                                         const GenerationConfig& config) const {
  if (config.max_steps < 1) throw InvalidArgument("max_steps must be at least 1");
  const nn::Mat<float> memory = memory_for(graph);
  nn::TokenSequence tokens;
  const nn::Mat<float> Z = ckpt_.model.decoder.forward(tokens, memory);
  const auto ranked = rank_blocks(Z.row(0), config, nullptr, true);
  if (index_.ids[ranked.front()] == nn::kEndBlock) throw DeadEnd("decoder emitted END before any building block");
  const auto& first = catalog_[ranked.front()];
  synth::SyntheticTree tree;
  tree.steps.push_back({first.id, synth::kNoReaction, 0});
  tree.products.push_back(first.mol.smiles);
  tree.final = first.mol.smiles;
  tokens.fps.push_back(nn::sparse_bits(chem::morgan_fp(first.mol, ckpt_.model.config.fp_radius)));
  decode_from(tree, tokens, first.mol, memory, config, nullptr);
  return tree;
}

std::vector<synth::SyntheticTree> Generator::hit_expand(const chem::Molecule& seed, int n,
                                                        const GenerationConfig& config,
                                                        std::uint64_t seed_value) const {
  std::vector<synth::SyntheticTree> out;
  if (n <= 0) return out;
  const nn::Mat<float> memory = memory_for(chem::extract_pharmacophores(chem::gen_conformer(seed, seed_value)));
  const int radius = ckpt_.model.config.fp_radius;
  for (int s = 0; s < n; ++s) {
    Rng rng(derive_seed(seed_value, static_cast<std::uint64_t>(s)));
    nn::TokenSequence tokens;
    tokens.fps.push_back(product_bits(seed, radius));
    const nn::Mat<float> Z = ckpt_.model.decoder.forward(tokens, memory);
    const nn::RowVec<float> z = Z.row(1);
    // The first expansion step must react the seed; END is not a valid choice.
    std::optional<StepChoice> choice;
    std::size_t row = 0;
    for (std::size_t candidate : rank_blocks(z, config, &rng, false)) {
      choice = choose_reaction(z, candidate, seed, config);
      if (choice) {
        row = candidate;
        break;
      }
    }
    if (!choice) throw DeadEnd("no template applies to the seed with any candidate block");
    synth::SyntheticTree tree;
    tree.root = seed.smiles;
    tree.steps.push_back({std::nullopt, synth::kNoReaction, 0});
    tree.products.push_back(seed.smiles);
    tree.steps.push_back({catalog_[row].id, choice->reaction, choice->order});
    tree.products.push_back(choice->product.smiles);
    tree.final = choice->product.smiles;
    tokens.fps.push_back(product_bits(choice->product, radius));
    GenerationConfig rest = config;
    rest.max_steps = config.max_steps + 1;  // the root occupies step 0
    decode_from(tree, tokens, choice->product, memory, rest, &rng);
    out.push_back(std::move(tree));
  }
  return out;
}

std::vector<int> Generator::nearest_blocks(int block_id, int k) const {
  const std::size_t self = catalog_.index_of(block_id);
  std::vector<int> out;
  if (k <= 0) return out;
  const std::size_t n = catalog_.size();
  const auto dim = static_cast<std::size_t>(index_.zprime.cols());
  std::vector<float> cos(n);
  kernels::cosine_scan(index_.zprime.row(static_cast<Eigen::Index>(self)).data(), index_.zprime.data(), n, dim,
                       cos.data(), kernels::Exec::Parallel);
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < n; ++r) {
    if (r != self) order.push_back(r);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cos[a] != cos[b]) return cos[a] > cos[b];
    return catalog_[a].id < catalog_[b].id;
  });
  for (std::size_t i = 0; i < order.size() && static_cast<int>(out.size()) < k; ++i) out.push_back(catalog_[order[i]].id);
  return out;
}

double Generator::zprime_cosine(int block_a, int block_b) const {
  const auto a = index_.zprime.row(static_cast<Eigen::Index>(catalog_.index_of(block_a)));
  const auto b = index_.zprime.row(static_cast<Eigen::Index>(catalog_.index_of(block_b)));
  return static_cast<double>(a.dot(b) / (a.norm() * b.norm()));
}

}  // namespace synthphore::apps

namespace synthphore::apps {

bool same_route(const synth::SyntheticTree& a, const synth::SyntheticTree& b) {
  if (a.steps.size() != b.steps.size() || a.final != b.final || a.root != b.root) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (a.steps[i].block != b.steps[i].block || a.steps[i].reaction != b.steps[i].reaction) return false;
  }
  return true;
}

}  // namespace synthphore::apps
