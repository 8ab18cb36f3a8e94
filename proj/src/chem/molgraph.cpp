//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/molgraph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <string>

#include "synthphore/chem/element.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::chem {

int MolGraph::add_atom(const Atom& atom) {
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return static_cast<int>(atoms_.size()) - 1;
}

int MolGraph::add_bond(int a, int b, int order, bool aromatic) {
  const int idx = static_cast<int>(bonds_.size());
  bonds_.push_back(Bond{a, b, order, aromatic});
  adjacency_[static_cast<std::size_t>(a)].push_back({b, idx});
  adjacency_[static_cast<std::size_t>(b)].push_back({a, idx});
  return idx;
}

int MolGraph::bond_between(int a, int b) const {
  for (const auto& nb : neighbors(a)) {
    if (nb.atom == b) return nb.bond;
  }
  return -1;
}

int MolGraph::bond_order_sum(int i) const {
  int sum = 0;
  for (const auto& nb : neighbors(i)) sum += bond(nb.bond).order;
  return sum;
}

void MolGraph::perceive() {
  rings_ = find_sssr(*this);
  perceive_aromaticity(*this, rings_);
}

MolGraph MolGraph::subgraph(const std::vector<bool>& keep) const {
  MolGraph out;
  std::vector<int> remap(atoms_.size(), -1);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (keep[i]) remap[i] = out.add_atom(atoms_[i]);
  }
  for (const auto& b : bonds_) {
    const int na = remap[static_cast<std::size_t>(b.begin)];
    const int nb = remap[static_cast<std::size_t>(b.end)];
    if (na >= 0 && nb >= 0) {
      out.add_bond(na, nb, b.order);
    } else if (na >= 0) {
      out.atom(na).hydrogens += b.order;
    } else if (nb >= 0) {
      out.atom(nb).hydrogens += b.order;
    }
  }
  out.perceive();
  return out;
}

std::vector<int> MolGraph::components(int* count) const {
  std::vector<int> label(atoms_.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < atoms_.size(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> stack{static_cast<int>(s)};
    label[s] = next;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(a)) {
        if (label[static_cast<std::size_t>(nb.atom)] < 0) {
          label[static_cast<std::size_t>(nb.atom)] = next;
          stack.push_back(nb.atom);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Cycle {
  EdgeSet edges;
  std::vector<int> atoms;
  std::vector<int> bonds;
};

void set_bit(EdgeSet& s, int bit) { s[static_cast<std::size_t>(bit) / 64] |= 1ULL << (bit % 64); }

int lowest_bit(const EdgeSet& s) {
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (s[w]) return static_cast<int>(w * 64) + __builtin_ctzll(s[w]);
  }
  return -1;
}

}  // namespace

RingInfo find_sssr(const MolGraph& g) {
  const int n = static_cast<int>(g.atom_count());
  const int e = static_cast<int>(g.bond_count());
  RingInfo info;
  info.atom_ring_count.assign(static_cast<std::size_t>(n), 0);
  info.bond_ring_count.assign(static_cast<std::size_t>(e), 0);
  info.atom_min_ring.assign(static_cast<std::size_t>(n), 0);
  int ncomp = 0;
  g.components(&ncomp);
  const int rank = e - n + ncomp;
  if (rank <= 0) return info;

  const std::size_t words = (static_cast<std::size_t>(e) + 63) / 64;
  std::vector<Cycle> candidates;
  std::set<EdgeSet> seen;
  constexpr int kInf = std::numeric_limits<int>::max();

  // Horton candidate set: for every root v and every non-tree edge (x, y) of
  // the BFS tree at v, the cycle P(v,x) + (x,y) + P(y,v) when the two paths
  // only share v.
  for (int v = 0; v < n; ++v) {
    std::vector<int> dist(static_cast<std::size_t>(n), kInf), parent(static_cast<std::size_t>(n), -1),
        parent_bond(static_cast<std::size_t>(n), -1);
    std::deque<int> queue{v};
    dist[static_cast<std::size_t>(v)] = 0;
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop_front();
      for (const auto& nb : g.neighbors(a)) {
        if (dist[static_cast<std::size_t>(nb.atom)] == kInf) {
          dist[static_cast<std::size_t>(nb.atom)] = dist[static_cast<std::size_t>(a)] + 1;
          parent[static_cast<std::size_t>(nb.atom)] = a;
          parent_bond[static_cast<std::size_t>(nb.atom)] = nb.bond;
          queue.push_back(nb.atom);
        }
      }
    }
    for (int b = 0; b < e; ++b) {
      const auto& bond = g.bond(b);
      const int x = bond.begin, y = bond.end;
      if (dist[static_cast<std::size_t>(x)] == kInf) continue;
      if (parent_bond[static_cast<std::size_t>(x)] == b || parent_bond[static_cast<std::size_t>(y)] == b) continue;
      auto walk = [&](int from, std::vector<int>& atoms, std::vector<int>& bonds) {
        for (int a = from; a != v; a = parent[static_cast<std::size_t>(a)]) {
          atoms.push_back(a);
          bonds.push_back(parent_bond[static_cast<std::size_t>(a)]);
        }
      };
      std::vector<int> ax, bx, ay, by;
      walk(x, ax, bx);
      walk(y, ay, by);
      bool disjoint = true;
      for (int a : ax) {
        if (std::find(ay.begin(), ay.end(), a) != ay.end()) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) continue;
      Cycle c;
      c.edges.assign(words, 0);
      c.atoms.push_back(v);
      for (auto it = ax.rbegin(); it != ax.rend(); ++it) c.atoms.push_back(*it);
      for (int a : ay) c.atoms.push_back(a);
      for (int eb : bx) {
        set_bit(c.edges, eb);
        c.bonds.push_back(eb);
      }
      for (int eb : by) {
        set_bit(c.edges, eb);
        c.bonds.push_back(eb);
      }
      set_bit(c.edges, b);
      c.bonds.push_back(b);
      if (seen.insert(c.edges).second) candidates.push_back(std::move(c));
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Cycle& l, const Cycle& r) {
    if (l.atoms.size() != r.atoms.size()) return l.atoms.size() < r.atoms.size();
    return l.edges < r.edges;
  });

  // Greedy GF(2) independence test, smallest cycles first.
  std::vector<EdgeSet> basis;
  std::vector<int> pivots;
  for (auto& c : candidates) {
    if (static_cast<int>(info.atom_rings.size()) == rank) break;
    EdgeSet reduced = c.edges;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const int p = pivots[k];
      if (reduced[static_cast<std::size_t>(p) / 64] >> (p % 64) & 1ULL) {
        for (std::size_t w = 0; w < words; ++w) reduced[w] ^= basis[k][w];
      }
    }
    const int pivot = lowest_bit(reduced);
    if (pivot < 0) continue;
    // Keep the basis in reduced echelon form for later candidates.
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k][static_cast<std::size_t>(pivot) / 64] >> (pivot % 64) & 1ULL) {
        for (std::size_t w = 0; w < words; ++w) basis[k][w] ^= reduced[w];
      }
    }
    basis.push_back(reduced);
    pivots.push_back(pivot);
    info.atom_rings.push_back(c.atoms);
    info.bond_rings.push_back(c.bonds);
  }
  for (std::size_t r = 0; r < info.atom_rings.size(); ++r) {
    const int size = static_cast<int>(info.atom_rings[r].size());
    for (int a : info.atom_rings[r]) {
      auto& count = info.atom_ring_count[static_cast<std::size_t>(a)];
      auto& min_ring = info.atom_min_ring[static_cast<std::size_t>(a)];
      ++count;
      if (min_ring == 0 || size < min_ring) min_ring = size;
    }
    for (int b : info.bond_rings[r]) ++info.bond_ring_count[static_cast<std::size_t>(b)];
  }
  return info;
}

namespace {

// Pi-electron contribution of an atom to a ring, or -1 if the atom cannot be
// part of an aromatic system.
int pi_electrons(const MolGraph& g, const RingInfo& rings, int a) {
  const Atom& atom = g.atom(a);
  int doubles = 0;
  int double_bond = -1;
  for (const auto& nb : g.neighbors(a)) {
    const int order = g.bond(nb.bond).order;
    if (order == 3) return -1;
    if (order == 2) {
      ++doubles;
      double_bond = nb.bond;
    }
  }
  if (doubles > 1) return -1;
  const int connections = g.degree(a) + atom.hydrogens;
  if (doubles == 1) {
    if (rings.bond_in_ring(double_bond)) return 1;
    const int partner = g.bond(double_bond).other(a);
    const int pe = g.atom(partner).element;
    if (atom.element == 6 && (pe == 7 || pe == 8 || pe == 16)) return 0;
    return -1;
  }
  switch (atom.element) {
    case 7:
    case 15:
      if (atom.charge == 0 && connections == 3) return 2;
      if (atom.charge == -1 && connections == 2) return 2;
      return -1;
    case 8:
    case 16:
    case 34:
      if (atom.charge == 0 && connections == 2) return 2;
      if (atom.charge == 1 && connections == 3) return 2;
      return -1;
    case 6:
      if (atom.charge == -1 && connections == 3) return 2;
      if (atom.charge == 1 && connections == 3) return 0;
      return -1;
    case 5:
      if (atom.charge == 0 && connections == 3) return 0;
      return -1;
    default:
      return -1;
  }
}

bool huckel(int electrons) { return electrons >= 2 && (electrons - 2) % 4 == 0; }

}  // namespace

void perceive_aromaticity(MolGraph& g, const RingInfo& rings) {
  for (std::size_t i = 0; i < g.atom_count(); ++i) g.atom(static_cast<int>(i)).aromatic = false;
  for (std::size_t i = 0; i < g.bond_count(); ++i) g.bond(static_cast<int>(i)).aromatic = false;
  const std::size_t nr = rings.atom_rings.size();
  std::vector<int> electrons(g.atom_count());
  for (std::size_t a = 0; a < g.atom_count(); ++a) {
    electrons[a] = rings.atom_in_ring(static_cast<int>(a)) ? pi_electrons(g, rings, static_cast<int>(a)) : -1;
  }
  auto ring_sum = [&](const std::vector<int>& atoms) {
    int sum = 0;
    for (int a : atoms) {
      if (electrons[static_cast<std::size_t>(a)] < 0) return -1;
      sum += electrons[static_cast<std::size_t>(a)];
    }
    return sum;
  };
  auto mark = [&](const std::vector<int>& atoms, const std::vector<int>& bonds) {
    for (int a : atoms) g.atom(a).aromatic = true;
    for (int b : bonds) g.bond(b).aromatic = true;
  };
  std::vector<bool> aromatic_ring(nr, false);
  for (std::size_t r = 0; r < nr; ++r) {
    const auto size = rings.atom_rings[r].size();
    if (size < 4 || size > 8) continue;
    if (huckel(ring_sum(rings.atom_rings[r]))) {
      aromatic_ring[r] = true;
      mark(rings.atom_rings[r], rings.bond_rings[r]);
    }
  }
  // Fused pairs of rings that are not aromatic on their own (azulene-like).
  for (std::size_t r1 = 0; r1 < nr; ++r1) {
    for (std::size_t r2 = r1 + 1; r2 < nr; ++r2) {
      if (aromatic_ring[r1] && aromatic_ring[r2]) continue;
      const auto& b1 = rings.bond_rings[r1];
      const auto& b2 = rings.bond_rings[r2];
      std::vector<int> shared;
      for (int b : b1) {
        if (std::find(b2.begin(), b2.end(), b) != b2.end()) shared.push_back(b);
      }
      if (shared.size() != 1) continue;
      std::vector<int> atoms = rings.atom_rings[r1];
      for (int a : rings.atom_rings[r2]) {
        if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(a);
      }
      if (atoms.size() > 12) continue;
      if (huckel(ring_sum(atoms))) {
        mark(rings.atom_rings[r1], b1);
        mark(rings.atom_rings[r2], b2);
      }
    }
  }
}

namespace {

bool match_doubles(const MolGraph& g, const std::vector<std::vector<int>>& options, std::vector<int>& partner,
                   std::vector<bool>& needs) {
  // Most constrained unmatched atom first.
  int best = -1;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < needs.size(); ++a) {
    if (!needs[a] || partner[a] >= 0) continue;
    std::size_t count = 0;
    for (int b : options[a]) {
      if (partner[static_cast<std::size_t>(g.bond(b).other(static_cast<int>(a)))] < 0) ++count;
    }
    if (count < best_count) {
      best = static_cast<int>(a);
      best_count = count;
    }
  }
  if (best < 0) return true;
  if (best_count == 0) return false;
  for (int b : options[static_cast<std::size_t>(best)]) {
    const int other = g.bond(b).other(best);
    if (partner[static_cast<std::size_t>(other)] >= 0) continue;
    partner[static_cast<std::size_t>(best)] = b;
    partner[static_cast<std::size_t>(other)] = b;
    if (match_doubles(g, options, partner, needs)) return true;
    partner[static_cast<std::size_t>(best)] = -1;
    partner[static_cast<std::size_t>(other)] = -1;
  }
  return false;
}

// Capacity of an aromatic atom in SMILES terms: aromatic bonds count one.
int aromatic_used(const MolGraph& g, int a) {
  int used = 0;
  for (const auto& nb : g.neighbors(a)) {
    const auto& b = g.bond(nb.bond);
    used += b.aromatic ? 1 : b.order;
  }
  return used;
}

}  // namespace

void kekulize(MolGraph& g, const std::vector<bool>& explicit_h) {
  const std::size_t n = g.atom_count();
  std::vector<bool> needs(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& atom = g.atom(static_cast<int>(a));
    if (!atom.aromatic) continue;
    bool has_aromatic_bond = false;
    for (const auto& nb : g.neighbors(static_cast<int>(a))) has_aromatic_bond |= g.bond(nb.bond).aromatic;
    if (!has_aromatic_bond) continue;
    const int used = aromatic_used(g, static_cast<int>(a)) + (explicit_h[a] ? atom.hydrogens : 0);
    const int cap = charge_adjusted_valence(atom.element, atom.charge, used);
    needs[a] = cap - used >= 1;
  }
  std::vector<std::vector<int>> options(n);
  for (std::size_t b = 0; b < g.bond_count(); ++b) {
    const auto& bond = g.bond(static_cast<int>(b));
    if (!bond.aromatic) continue;
    if (needs[static_cast<std::size_t>(bond.begin)] && needs[static_cast<std::size_t>(bond.end)]) {
      options[static_cast<std::size_t>(bond.begin)].push_back(static_cast<int>(b));
      options[static_cast<std::size_t>(bond.end)].push_back(static_cast<int>(b));
    }
  }
  std::vector<int> partner(n, -1);
  if (!match_doubles(g, options, partner, needs)) {
    throw KekulizeError("cannot kekulize aromatic system");
  }
  for (std::size_t b = 0; b < g.bond_count(); ++b) {
    auto& bond = g.bond(static_cast<int>(b));
    if (!bond.aromatic) continue;
    bond.order = partner[static_cast<std::size_t>(bond.begin)] == static_cast<int>(b) ? 2 : 1;
  }
}

int implicit_hydrogens(const MolGraph& g, int a) {
  const auto& atom = g.atom(a);
  if (atom.aromatic) {
    int used = 0;
    for (const auto& nb : g.neighbors(a)) {
      const auto& b = g.bond(nb.bond);
      used += b.aromatic ? 1 : b.order;
    }
    const int cap = charge_adjusted_valence(atom.element, atom.charge, used);
    if (cap < 0) return 0;
    const int free = cap - used;
    return free >= 1 ? free - 1 : 0;
  }
  const int used = g.bond_order_sum(a);
  const int cap = charge_adjusted_valence(atom.element, atom.charge, used);
  return cap < 0 ? 0 : std::max(0, cap - used);
}

void check_valences(const MolGraph& g) {
  for (std::size_t i = 0; i < g.atom_count(); ++i) {
    const auto& atom = g.atom(static_cast<int>(i));
    if (atom.hydrogens < 0) throw SanitizeError("negative hydrogen count on atom " + std::to_string(i));
    const int v = g.valence(static_cast<int>(i));
    const int cap = charge_adjusted_valence(atom.element, atom.charge, v);
    if (cap >= 0 && v > cap) {
      throw SanitizeError("valence " + std::to_string(v) + " exceeds maximum on atom " + std::to_string(i));
    }
  }
}

}  // namespace synthphore::chem
