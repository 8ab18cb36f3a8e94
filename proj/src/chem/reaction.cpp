//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/reaction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "synthphore/chem/element.hpp"
#include "synthphore/chem/smiles.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::chem {

namespace {

std::vector<std::string_view> split_components(std::string_view text) {
  std::vector<std::string_view> parts;
  int bracket = 0;
  int paren = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') ++bracket;
    if (c == ']') --bracket;
    if (c == '(') ++paren;
    if (c == ')') --paren;
    if (c == '.' && bracket == 0 && paren == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

int order_value(const Bond& b) { return b.aromatic ? 1 : b.order; }

int fill_hydrogens(int element, int charge, int bond_sum) {
  const int target = charge_adjusted_valence(element, charge, bond_sum);
  return target < 0 ? 0 : std::max(0, target - bond_sum);
}

}  // namespace

ReactionSmarts ReactionSmarts::parse(std::string_view text) {
  const auto arrow = text.find(">>");
  if (arrow == std::string_view::npos) throw SmartsError("reaction SMARTS lacks '>>': " + std::string(text));
  ReactionSmarts r;
  r.text_ = std::string(text);
  for (auto part : split_components(text.substr(0, arrow))) r.reactants_.push_back(SmartsPattern::parse(part));
  r.product_ = SmartsPattern::parse(text.substr(arrow + 2));

  std::map<int, std::pair<int, int>> by_map;
  for (std::size_t ri = 0; ri < r.reactants_.size(); ++ri) {
    const auto& p = r.reactants_[ri];
    for (std::size_t q = 0; q < p.atom_count(); ++q) {
      const int m = p.atom(static_cast<int>(q)).spec.map;
      if (m == 0) continue;
      if (!by_map.emplace(m, std::make_pair(static_cast<int>(ri), static_cast<int>(q))).second) {
        throw SmartsError("duplicate atom map " + std::to_string(m) + " in " + r.text_);
      }
    }
  }
  for (std::size_t q = 0; q < r.product_.atom_count(); ++q) {
    const int m = r.product_.atom(static_cast<int>(q)).spec.map;
    auto it = m == 0 ? by_map.end() : by_map.find(m);
    if (it == by_map.end()) {
      if (r.product_.atom(static_cast<int>(q)).spec.element < 0) {
        throw SmartsError("unmapped product atom without element in " + r.text_);
      }
      r.sources_.emplace_back(-1, -1);
    } else {
      r.sources_.push_back(it->second);
    }
  }
  return r;
}

bool ReactionSmarts::matches(const std::vector<const MolGraph*>& reactants) const {
  if (reactants.size() != reactants_.size()) {
    throw ArityMismatch("template expects " + std::to_string(reactants_.size()) + " reactants, got " +
                        std::to_string(reactants.size()));
  }
  for (std::size_t i = 0; i < reactants.size(); ++i) {
    if (!reactants_[i].has_match(*reactants[i])) return false;
  }
  return true;
}

MolGraph ReactionSmarts::build(const std::vector<const MolGraph*>& reactants,
                               const std::vector<const Match*>& matches) const {
  MolGraph out;
  const std::size_t nr = reactants.size();
  // new index per reactant atom, -1 when deleted
  std::vector<std::vector<int>> index(nr);
  // reactant atom -> query atom, -1 when unmatched
  std::vector<std::vector<int>> query_of(nr);
  std::vector<std::vector<bool>> matched(nr);
  std::vector<std::vector<bool>> mapped_to_product(nr);
  for (std::size_t r = 0; r < nr; ++r) {
    const std::size_t n = reactants[r]->atom_count();
    index[r].assign(n, -1);
    query_of[r].assign(n, -1);
    matched[r].assign(n, false);
    mapped_to_product[r].assign(n, false);
    const Match& m = *matches[r];
    for (std::size_t q = 0; q < m.size(); ++q) {
      query_of[r][static_cast<std::size_t>(m[q])] = static_cast<int>(q);
      matched[r][static_cast<std::size_t>(m[q])] = true;
    }
  }

  // Product template atoms first, in template order.
  const std::size_t np = product_.atom_count();
  std::vector<int> product_index(np, -1);
  std::vector<bool> recompute_h(np, false);
  std::vector<int> old_h(np, 0);
  for (std::size_t pq = 0; pq < np; ++pq) {
    const AtomSpec& spec = product_.atom(static_cast<int>(pq)).spec;
    const auto [ri, rq] = sources_[pq];
    Atom atom;
    if (ri >= 0) {
      const int src = (*matches[static_cast<std::size_t>(ri)])[static_cast<std::size_t>(rq)];
      atom = reactants[static_cast<std::size_t>(ri)]->atom(src);
      old_h[pq] = atom.hydrogens;
      if (spec.element > 0 && spec.element != atom.element) {
        atom.element = spec.element;
        recompute_h[pq] = true;
      }
      if (spec.charge && *spec.charge != atom.charge) {
        atom.charge = *spec.charge;
        recompute_h[pq] = true;
      }
      index[static_cast<std::size_t>(ri)][static_cast<std::size_t>(src)] = static_cast<int>(pq);
      mapped_to_product[static_cast<std::size_t>(ri)][static_cast<std::size_t>(src)] = true;
    } else {
      atom.element = spec.element;
      atom.charge = spec.charge.value_or(0);
      atom.aromatic = spec.aromatic == 1;
      recompute_h[pq] = true;
    }
    atom.map = 0;
    product_index[pq] = out.add_atom(atom);
  }

  // Unmatched reactant atoms are carried over unchanged.
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t a = 0; a < reactants[r]->atom_count(); ++a) {
      if (matched[r][a]) continue;
      Atom atom = reactants[r]->atom(static_cast<int>(a));
      atom.map = 0;
      index[r][a] = out.add_atom(atom);
    }
  }

  // Reactant bonds survive unless both ends are matched and the reactant
  // pattern contains the bond, in which case the product pattern decides.
  std::vector<std::vector<int>> reactant_bond_delta(np);
  for (std::size_t r = 0; r < nr; ++r) {
    const MolGraph& g = *reactants[r];
    const SmartsPattern& pat = reactants_[r];
    for (const Bond& b : g.bonds()) {
      const auto ua = static_cast<std::size_t>(b.begin);
      const auto ub = static_cast<std::size_t>(b.end);
      if (index[r][ua] < 0 || index[r][ub] < 0) continue;
      if (matched[r][ua] && matched[r][ub]) {
        const int qa = query_of[r][ua];
        const int qb = query_of[r][ub];
        const bool in_pattern = std::any_of(pat.bonds().begin(), pat.bonds().end(), [&](const QueryBond& qbnd) {
          return (qbnd.begin == qa && qbnd.end == qb) || (qbnd.begin == qb && qbnd.end == qa);
        });
        if (in_pattern) continue;
      }
      out.add_bond(index[r][ua], index[r][ub], b.order, b.aromatic);
    }
  }

  for (const QueryBond& qb : product_.bonds()) {
    const int a = product_index[static_cast<std::size_t>(qb.begin)];
    const int b = product_index[static_cast<std::size_t>(qb.end)];
    int order = 1;
    bool aromatic = false;
    if (qb.order_spec >= 1 && qb.order_spec <= 3) {
      order = qb.order_spec;
    } else if (qb.order_spec == 4) {
      aromatic = true;
    } else if (qb.order_spec == 0 && !(product_.atom(qb.begin).spec.aromatic == 1 &&
                                        product_.atom(qb.end).spec.aromatic == 1)) {
      order = 1;
    } else {
      // Query or aromatic-default bond: inherit from the reactant when both ends came from one.
      const auto [ra, qa] = sources_[static_cast<std::size_t>(qb.begin)];
      const auto [rb, qbq] = sources_[static_cast<std::size_t>(qb.end)];
      if (ra >= 0 && ra == rb) {
        const MolGraph& g = *reactants[static_cast<std::size_t>(ra)];
        const Match& m = *matches[static_cast<std::size_t>(ra)];
        const int rbnd = g.bond_between(m[static_cast<std::size_t>(qa)], m[static_cast<std::size_t>(qbq)]);
        if (rbnd >= 0) {
          order = g.bond(rbnd).order;
          aromatic = g.bond(rbnd).aromatic;
        }
      }
    }
    if (out.bond_between(a, b) >= 0) throw SmartsError("duplicate product bond in " + text_);
    out.add_bond(a, b, order, aromatic);
  }

  // Hydrogens: explicit spec wins; otherwise keep the valence of carried atoms
  // and fill new or re-typed atoms to their default valence.
  for (std::size_t pq = 0; pq < np; ++pq) {
    const AtomSpec& spec = product_.atom(static_cast<int>(pq)).spec;
    const int a = product_index[pq];
    const auto [ri, rq] = sources_[pq];
    if (spec.hydrogens) {
      out.atom(a).hydrogens = *spec.hydrogens;
      continue;
    }
    int new_sum = 0;
    for (const auto& nb : out.neighbors(a)) new_sum += order_value(out.bond(nb.bond));
    if (recompute_h[pq]) {
      out.atom(a).hydrogens = out.atom(a).aromatic ? 0 : fill_hydrogens(out.atom(a).element, out.atom(a).charge, new_sum);
      continue;
    }
    const MolGraph& g = *reactants[static_cast<std::size_t>(ri)];
    const int src = (*matches[static_cast<std::size_t>(ri)])[static_cast<std::size_t>(rq)];
    int old_sum = 0;
    for (const auto& nb : g.neighbors(src)) old_sum += order_value(g.bond(nb.bond));
    const int h = old_h[pq] + old_sum - new_sum;
    if (h < 0) throw SanitizeError("reaction over-saturates an atom in " + text_);
    out.atom(a).hydrogens = h;
  }

  // Keep only components that contain product-template atoms.
  int ncomp = 0;
  const auto comp = out.components(&ncomp);
  std::vector<bool> wanted(static_cast<std::size_t>(ncomp), false);
  for (std::size_t pq = 0; pq < np; ++pq) wanted[static_cast<std::size_t>(comp[static_cast<std::size_t>(product_index[pq])])] = true;
  std::vector<bool> keep(out.atom_count());
  bool drop = false;
  for (std::size_t a = 0; a < out.atom_count(); ++a) {
    keep[a] = wanted[static_cast<std::size_t>(comp[a])];
    drop = drop || !keep[a];
  }
  if (drop) return out.subgraph(keep);
  out.perceive();
  return out;
}

std::vector<std::string> ReactionSmarts::run(const std::vector<const MolGraph*>& reactants,
                                             std::size_t max_combinations) const {
  if (reactants.size() != reactants_.size()) {
    throw ArityMismatch("template expects " + std::to_string(reactants_.size()) + " reactants, got " +
                        std::to_string(reactants.size()));
  }
  std::vector<std::vector<Match>> all(reactants.size());
  for (std::size_t i = 0; i < reactants.size(); ++i) {
    all[i] = reactants_[i].matches(*reactants[i], false, 64);
    if (all[i].empty()) return {};
  }
  std::set<std::string> products;
  std::vector<std::size_t> cursor(reactants.size(), 0);
  std::size_t tried = 0;
  while (tried < max_combinations) {
    std::vector<const Match*> pick;
    for (std::size_t i = 0; i < reactants.size(); ++i) pick.push_back(&all[i][cursor[i]]);
    try {
      const MolGraph product = build(reactants, pick);
      products.insert(write_smiles(parse_smiles(write_smiles(product))));
    } catch (const ParseError&) {
    } catch (const SanitizeError&) {
    }
    ++tried;
    std::size_t i = 0;
    for (; i < cursor.size(); ++i) {
      if (++cursor[i] < all[i].size()) break;
      cursor[i] = 0;
    }
    if (i == cursor.size()) break;
  }
  return {products.begin(), products.end()};
}

}  // namespace synthphore::chem
