//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/pharmacophore.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "synthphore/chem/smarts.hpp"
#include "synthphore/util/error.hpp"

namespace synthphore::chem {

namespace {

constexpr std::string_view kNames[kFeatureClasses] = {"HBD", "HBA", "AR", "HC", "PIF", "NIF"};

struct AtomRule {
  FeatureClass cls;
  const char* smarts;
};

const AtomRule kRules[] = {
    {FeatureClass::HBD, "[N,O,S;!H0;+0]"},
    {FeatureClass::HBD, "[n;H1;+0]"},
    {FeatureClass::HBD, "[N;!H0;+1]"},
    {FeatureClass::HBA, "[O;+0,-1;!$([O]~[N+]);!$([OX2](C)C=O)]"},
    {FeatureClass::HBA, "[n;+0;H0;X2]"},
    {FeatureClass::HBA, "[N;+0;X1]"},
    {FeatureClass::HBA, "[NX2;+0;$(N=[#6])]"},
    {FeatureClass::HBA, "[NX3;+0;!$(N-a);!$(N-[C,S,P]=[O,S,N]);!$(N-C=C);!$(N-[#7,#8])]"},
    {FeatureClass::HC, "[CX4;!$(C~[!#6;!#1]);D1,D2,D3,D4]"},
    {FeatureClass::HC, "[CX3;!$(C~[!#6;!#1]);!$(C=[!#6])]"},
    {FeatureClass::HC, "[Cl,Br,I]"},
    {FeatureClass::PIF, "[+;!$(*~[-]);!$([N+](=O)[O-])]"},
    {FeatureClass::PIF, "[NX3;H2,H1,H0;+0;!$(N-a);!$(N-[C,S,P]=[O,S,N]);!$(N-C=C);!$(N-C#*);!$(N-[#7,#8,#16])]"},
    {FeatureClass::PIF, "[CX3;$(C(=[NX2;+0])([NX3;+0])),$(C(=[NX2;+0])N)]"},
    {FeatureClass::NIF, "[-;!$(*~[+])]"},
    {FeatureClass::NIF, "[OX2H1;$(O[CX3]=O),$(O[SX4](=O)=O),$(O[PX4]=O)]"},
    {FeatureClass::NIF, "[nH1;$(n1nnnc1),$(n1nncn1),$(n1ncnn1)]"},
};

const std::vector<std::pair<FeatureClass, SmartsPattern>>& compiled_rules() {
  static const auto rules = [] {
    std::vector<std::pair<FeatureClass, SmartsPattern>> out;
    for (const auto& r : kRules) out.emplace_back(r.cls, SmartsPattern::parse(r.smarts));
    return out;
  }();
  return rules;
}

}  // namespace

std::string_view feature_name(FeatureClass c) { return kNames[static_cast<int>(c)]; }

FeatureClass feature_from_name(std::string_view name) {
  for (int i = 0; i < kFeatureClasses; ++i) {
    if (kNames[i] == name) return static_cast<FeatureClass>(i);
  }
  throw ParseError("unknown pharmacophore class: " + std::string(name));
}

std::array<double, kFeatureClasses> PharmacophoreGraph::one_hot(std::size_t i) const {
  std::array<double, kFeatureClasses> v{};
  v[static_cast<std::size_t>(points.at(i).cls)] = 1.0;
  return v;
}

FeatureSites find_feature_sites(const MolGraph& g) {
  FeatureSites out;
  std::set<std::pair<int, int>> seen;
  for (const auto& [cls, pattern] : compiled_rules()) {
    for (int a = 0; a < static_cast<int>(g.atom_count()); ++a) {
      if (!pattern.matches_at(g, a)) continue;
      if (!seen.insert({static_cast<int>(cls), a}).second) continue;
      out.sites[static_cast<int>(cls)].push_back({a});
    }
  }
  // Hydrophobic sites only in molecules with more than one heavy atom.
  if (g.atom_count() < 2) out.sites[static_cast<int>(FeatureClass::HC)].clear();
  for (const auto& ring : g.rings().atom_rings) {
    const bool aromatic = std::all_of(ring.begin(), ring.end(), [&](int a) { return g.atom(a).aromatic; });
    if (aromatic) out.sites[static_cast<int>(FeatureClass::AR)].push_back(ring);
  }
  for (auto& list : out.sites) std::sort(list.begin(), list.end());
  return out;
}

PharmacophoreGraph extract_pharmacophores(const MolGraph& g, const std::vector<Vec3>& coords) {
  if (coords.size() != g.atom_count()) throw LengthMismatch("coordinate count differs from atom count");
  const FeatureSites sites = find_feature_sites(g);
  PharmacophoreGraph out;
  for (int c = 0; c < kFeatureClasses; ++c) {
    for (const auto& site : sites.sites[c]) {
      Vec3 p{0.0, 0.0, 0.0};
      for (int a : site) {
        for (int k = 0; k < 3; ++k) p[static_cast<std::size_t>(k)] += coords[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
      }
      for (auto& v : p) v /= static_cast<double>(site.size());
      out.points.push_back({static_cast<FeatureClass>(c), p});
    }
  }
  if (out.points.empty()) throw EmptyPharmacophore("no pharmacophore features found");
  return out;
}

}  // namespace synthphore::chem
