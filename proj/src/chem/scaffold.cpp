//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/scaffold.hpp"

#include <vector>

namespace synthphore::chem {

MolGraph murcko_scaffold(const MolGraph& g) {
  const std::size_t n = g.atom_count();
  std::vector<bool> keep(n, true);
  std::vector<int> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = g.degree(static_cast<int>(i));

  // Repeatedly peel acyclic leaves.
  std::vector<int> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.rings().atom_in_ring(static_cast<int>(i)) && degree[i] <= 1) stack.push_back(static_cast<int>(i));
  }
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    if (!keep[static_cast<std::size_t>(a)]) continue;
    keep[static_cast<std::size_t>(a)] = false;
    for (const auto& nb : g.neighbors(a)) {
      const auto u = static_cast<std::size_t>(nb.atom);
      if (!keep[u]) continue;
      if (--degree[u] <= 1 && !g.rings().atom_in_ring(nb.atom)) stack.push_back(nb.atom);
    }
  }

  bool any = false;
  for (bool k : keep) any = any || k;
  if (!any) return MolGraph{};

  std::vector<bool> final_keep = keep;
  for (const Bond& b : g.bonds()) {
    if (b.order < 2 || b.aromatic) continue;
    const auto u = static_cast<std::size_t>(b.begin);
    const auto v = static_cast<std::size_t>(b.end);
    if (keep[u] && !keep[v]) final_keep[v] = true;
    if (keep[v] && !keep[u]) final_keep[u] = true;
  }
  return g.subgraph(final_keep);
}

}  // namespace synthphore::chem
