//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/descriptors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include "synthphore/chem/element.hpp"
#include "synthphore/chem/smarts.hpp"

namespace synthphore::chem {

namespace {

struct CrippenRow {
  std::string_view type;
  std::string_view smarts;
  double logp;
};

constexpr CrippenRow kCrippenRows[] = {
#include "crippen_table.inc"
};

const std::vector<SmartsPattern>& crippen_patterns() {
  static const std::vector<SmartsPattern> patterns = [] {
    std::vector<SmartsPattern> out;
    for (const auto& row : kCrippenRows) out.push_back(SmartsPattern::parse(row.smarts));
    return out;
  }();
  return patterns;
}

// Hydrogen types keyed on the heavy atom carrying them, tested in order.
struct HydrogenRule {
  std::string_view smarts;
  double logp;
};

constexpr HydrogenRule kHydrogenRules[] = {
    {"[#6]", 0.123},
    {"[O;$(O[CX4,c])]", -0.2677},
    {"[O;$(O[!C;!N;!O;!S]),OH2]", -0.2677},
    {"[!#6;!#7;!#8]", -0.2677},
    {"[#7]", 0.2142},
    {"[O;$(O[#7])]", 0.2142},
    {"[O;$(OC=[#6,#7,O,S])]", 0.298},
    {"[O;$(O[O,S])]", 0.298},
};
constexpr double kHydrogenFallback = 0.1125;

const std::vector<SmartsPattern>& hydrogen_patterns() {
  static const std::vector<SmartsPattern> patterns = [] {
    std::vector<SmartsPattern> out;
    for (const auto& rule : kHydrogenRules) out.push_back(SmartsPattern::parse(rule.smarts));
    return out;
  }();
  return patterns;
}

std::vector<SmartsPattern> compile(std::initializer_list<std::string_view> smarts) {
  std::vector<SmartsPattern> out;
  for (auto s : smarts) out.push_back(SmartsPattern::parse(s));
  return out;
}

const std::vector<SmartsPattern>& acceptor_patterns() {
  static const auto patterns =
      compile({"[oH0;X2]", "[OH1;X2;v2]", "[OH0;X2;v2]", "[OH0;X1;v2]", "[O-;X1]", "[SH0;X2;v2]", "[SH0;X1;v2]",
               "[S-;X1]", "[nH0;X2]", "[NH0;X1;v3]", "[$([N;+0;X3;v3]);!$(N[C,S]=O)]"});
  return patterns;
}

const std::vector<SmartsPattern>& alert_patterns() {
  static const auto patterns = compile({
      "*1[O,S,N]*1", "[S,C](=[O,S])[F,Br,Cl,I]", "[CX4][Cl,Br,I]", "[#6]S(=O)(=O)O[#6]",
      "[$([CH]),$(CC)]#CC(=O)[#6]", "[$([CH]),$(CC)]#CC(=O)O[#6]", "n[OH]", "[$([CH]),$(CC)]#CS(=O)(=O)[#6]",
      "C=C(C=O)C=O", "n1c([F,Cl,Br,I])cccc1", "[CH1](=O)", "[#8][#8]", "[C;!R]=[N;!R]", "[N!R]=[N!R]",
      "[#6](=O)[#6](=O)", "[#16][#16]", "[#7][NH2]", "C(=O)N[NH2]", "[#6]=S",
      "[$([CH2]),$([CH][CX4]),$(C([CX4])[CX4])]=[$([CH2]),$([CH][CX4]),$(C([CX4])[CX4])]",
      "C1(=[O,N])C=CC(=[O,N])C=C1", "C1(=[O,N])C(=[O,N])C=CC=C1", "a21aa3a(aa1aaaa2)aaaa3",
      "a31a(a2a(aa1)aaaa2)aaaa3", "a1aa2a3a(a1)A=AA=A3=AA=A2", "c1cc([NH2])ccc1",
      "[Hg,Fe,As,Sb,Zn,Se,se,Te,B,Si,Na,Ca,Ge,Ag,Mg,K,Ba,Sr,Be,Ti,Mo,Mn,Ru,Pd,Ni,Cu,Au,Cd,Al,Ga,Sn,Rh,Tl,Bi,Nb,Li,"
      "Pb,Hf,Ho]",
      "I", "OS(=O)(=O)[O-]", "[N+](=O)[O-]", "C(=O)N[OH]", "C1NC(=O)NC(=O)1", "[SH]", "[S-]",
      "c1ccc([Cl,Br,I,F])c([Cl,Br,I,F])c1[Cl,Br,I,F]", "c1cc([Cl,Br,I,F])cc([Cl,Br,I,F])c1[Cl,Br,I,F]",
      "[CR1]1[CR1][CR1][CR1][CR1][CR1][CR1]1", "[CR1]1[CR1][CR1]cc[CR1][CR1]1",
      "[CR2]1[CR2][CR2][CR2][CR2][CR2][CR2][CR2]1", "[CR2]1[CR2][CR2]cc[CR2][CR2][CR2]1",
      "[CH2R2]1N[CH2R2][CH2R2][CH2R2][CH2R2][CH2R2]1", "[CH2R2]1N[CH2R2][CH2R2][CH2R2][CH2R2][CH2R2][CH2R2]1",
      "C#C", "[OR2,NR2]@[CR2]@[CR2]@[OR2,NR2]@[CR2]@[CR2]@[OR2,NR2]", "[$([N+R]),$([n+R]),$([N+]=C)][O-]",
      "[#6]=N[OH]", "[#6]=NOC=O", "[#6](=O)[CX4,CR0X3,O][#6](=O)", "c1ccc2c(c1)ccc(=O)o2", "[O+,o+,S+,s+]",
      "N=C=O", "[NX3,NX4][F,Cl,Br,I]", "c1ccccc1OC(=O)[#6]", "[CR0]=[CR0][CR0]=[CR0]", "[C+,c+,C-,c-]",
      "N=[N+]=[N-]", "C12C(NC(N1)=O)CSC2", "c1c([OH])c([OH,NH2,NH])ccc1", "P", "[N,O,S]C#N", "C=C=O",
      "[Si][F,Cl,Br,I]", "[SX2]O", "[SiR0,CR0](c1ccccc1)(c2ccccc2)(c3ccccc3)", "O1CCCCC1OC2CCC3CCCCC3C2",
      "N=[CR0][N,n,O,S]",
      "[cR2]1[cR2][cR2]([Nv3X3,Nv4X4])[cR2][cR2][cR2]1[cR2]2[cR2][cR2][cR2]([Nv3X3,Nv4X4])[cR2][cR2]2",
      "C=[C!r]C#N", "[cR2]1[cR2]c([N+0X3R0,nX3R0])c([N+0X3R0,nX3R0])[cR2][cR2]1",
      "[cR2]1[cR2]c([N+0X3R0,nX3R0])[cR2]c([N+0X3R0,nX3R0])[cR2]1",
      "[cR2]1[cR2]c([N+0X3R0,nX3R0])[cR2][cR2]c1([N+0X3R0,nX3R0])", "[OH]c1ccc([OH,NH2,NH])cc1",
      "c1ccccc1OC(=O)O", "[SX2H0][N]", "c12ccccc1(SC(S)=N2)", "c12ccccc1(SC(=S)N2)", "c1nnnn1C=O",
      "s1c(S)nnc1NC=O", "S1C=CSC1=S", "C(=O)Onnn", "OS(=O)(=O)C(F)(F)F", "N#CC[OH]", "N#CC(=O)",
      "S(=O)(=O)C#N", "N[CH2]C#N", "C1(=O)NCC1", "S(=O)(=O)[O-,OH]", "NC[F,Cl,Br,I]", "C=[C!r]O",
      "[NX2+0]=[O+0]", "[OR0,NR0][OR0,NR0]", "C(=O)O[C,H1].C(=O)O[C,H1].C(=O)O[C,H1]", "[CX2R0][NX3R0]",
      "c1ccccc1[C;!R]=[C;!R]c2ccccc2", "[NX3R0,NX4R0,OR0,SX2R0][CX4][NX3R0,NX4R0,OR0,SX2R0]",
      "[s,S,c,C,n,N,o,O]~[n+,N+](~[s,S,c,C,n,N,o,O])(~[s,S,c,C,n,N,o,O])~[s,S,c,C,n,N,o,O]",
      "[s,S,c,C,n,N,o,O]~[nX3+,NX3+](~[s,S,c,C,n,N])~[s,S,c,C,n,N]", "[*]=[N+]=[*]", "[SX3](=O)[O-,OH]",
      "N#N", "F.F.F.F", "[R0;D2][R0;D2][R0;D2][R0;D2]", "[cR,CR]~C(=O)NC(=O)~[cR,CR]", "C=!@CC=[O,S]",
      "[#6,#8,#16][#6](=O)O[#6]", "c[C;R0](=[O,S])[#6]", "c[SX2][C;!R]", "C=C=C", "c1nc([F,Cl,Br,I,S])ncc1",
      "c1ncnc([F,Cl,Br,I,S])c1", "c1nc(c2c(n1)nc(n2)[F,Cl,Br,I])", "[#6]S(=O)(=O)c1ccc(cc1)F", "[15N]", "[13C]",
      "[18O]", "[34S]",
  });
  return patterns;
}

struct Ads {
  double a, b, c, d, e, f, dmax;
};

double ads(double x, const Ads& p) {
  const double exp1 = 1.0 + std::exp(-(x - p.c + p.d / 2.0) / p.e);
  const double exp2 = 1.0 + std::exp(-(x - p.c - p.d / 2.0) / p.f);
  const double dx = p.a + p.b / exp1 * (1.0 - 1.0 / exp2);
  return dx / p.dmax;
}

constexpr Ads kAdsMw{2.817065973, 392.5754953, 290.7489764, 2.419764353, 49.22325677, 65.37051707, 104.9805561};
constexpr Ads kAdsLogp{3.172690585, 137.8624751, 2.534937431, 4.581497897, 0.822739154, 0.576295591, 131.3186604};
constexpr Ads kAdsHba{2.948620388, 160.4605972, 3.615294657, 4.435986202, 0.290141953, 1.300669958, 148.7763046};
constexpr Ads kAdsHbd{1.618662227, 1010.051101, 0.985094388, 0.000000001, 0.713820843, 0.920922555, 258.1632616};
constexpr Ads kAdsPsa{1.876861559, 125.2232657, 62.90773554, 87.83366614, 12.01999824, 28.51324732, 104.5686167};
constexpr Ads kAdsRotb{0.010000000, 272.4121427, 2.558379970, 1.565547684, 1.271567166, 2.758063707, 105.4420403};
constexpr Ads kAdsArom{3.217788970, 957.7374108, 2.274627939, 0.000000001, 1.317690384, 0.375760881, 312.3372610};
constexpr Ads kAdsAlerts{0.010000000, 1199.094025, -0.09002883, 0.000000001, 0.185904477, 0.875193782, 417.7253140};
constexpr std::array<double, 8> kWeights{0.66, 0.46, 0.05, 0.61, 0.06, 0.65, 0.48, 0.95};

bool in_three_ring(const MolGraph& g, int atom) {
  for (const auto& ring : g.rings().atom_rings) {
    if (ring.size() == 3 && std::find(ring.begin(), ring.end(), atom) != ring.end()) return true;
  }
  return false;
}

double tpsa_nitrogen(int neighbors, int h, int charge, int single, int dbl, int triple, int arom, bool ring3) {
  switch (neighbors) {
    case 1:
      if (h == 0 && charge == 0 && triple == 1) return 23.79;
      if (h == 1 && charge == 0 && dbl == 1) return 23.85;
      if (h == 2 && charge == 0 && single == 1) return 26.02;
      if (h == 2 && charge == 1 && dbl == 1) return 25.59;
      if (h == 3 && charge == 1 && single == 1) return 27.64;
      break;
    case 2:
      if (h == 0 && charge == 0 && single == 1 && dbl == 1) return 12.36;
      if (h == 0 && charge == 0 && triple == 1 && dbl == 1) return 13.60;
      if (h == 1 && charge == 0 && single == 2 && ring3) return 21.94;
      if (h == 1 && charge == 0 && single == 2) return 12.03;
      if (h == 0 && charge == 1 && triple == 1 && single == 1) return 4.36;
      if (h == 1 && charge == 1 && dbl == 1 && single == 1) return 13.97;
      if (h == 2 && charge == 1 && single == 2) return 16.61;
      if (h == 0 && charge == 0 && arom == 2) return 12.89;
      if (h == 1 && charge == 0 && arom == 2) return 15.79;
      if (h == 1 && charge == 1 && arom == 2) return 14.14;
      break;
    case 3:
      if (h == 0 && charge == 0 && single == 3 && ring3) return 3.01;
      if (h == 0 && charge == 0 && single == 3) return 3.24;
      if (h == 0 && charge == 0 && single == 1 && dbl == 2) return 11.68;
      if (h == 0 && charge == 1 && single == 2 && dbl == 1) return 3.01;
      if (h == 1 && charge == 1 && single == 3) return 4.44;
      if (h == 0 && charge == 0 && arom == 3) return 4.41;
      if (h == 0 && charge == 0 && single == 1 && arom == 2) return 4.93;
      if (h == 0 && charge == 0 && dbl == 1 && arom == 2) return 8.39;
      if (h == 0 && charge == 1 && arom == 3) return 4.10;
      if (h == 0 && charge == 1 && single == 1 && arom == 2) return 3.88;
      break;
    case 4:
      if (h == 0 && single == 4 && charge == 1) return 0.0;
      break;
    default: break;
  }
  return std::max(0.0, 30.5 - neighbors * 8.2 + h * 1.5);
}

double tpsa_oxygen(int neighbors, int h, int charge, int single, int dbl, int arom, bool ring3) {
  switch (neighbors) {
    case 1:
      if (h == 0 && charge == 0 && dbl == 1) return 17.07;
      if (h == 1 && charge == 0 && single == 1) return 20.23;
      if (h == 0 && charge == -1 && single == 1) return 23.06;
      break;
    case 2:
      if (h == 0 && charge == 0 && single == 2 && ring3) return 12.53;
      if (h == 0 && charge == 0 && single == 2) return 9.23;
      if (h == 0 && charge == 0 && arom == 2) return 13.14;
      break;
    default: break;
  }
  return std::max(0.0, 28.5 - neighbors * 8.6 + h * 1.5);
}

int count_atoms(const SmartsPattern& p, const MolGraph& g) {
  int n = 0;
  for (int a = 0; a < static_cast<int>(g.atom_count()); ++a) n += p.matches_at(g, a) ? 1 : 0;
  return n;
}

}  // namespace

double molecular_weight(const MolGraph& g) {
  double mw = 0.0;
  for (const Atom& a : g.atoms()) {
    const ElementInfo* info = element_info(a.element);
    mw += (info != nullptr ? info->mass : 0.0) + a.hydrogens * hydrogen_mass();
  }
  return mw;
}

double crippen_logp(const MolGraph& g) {
  const auto& patterns = crippen_patterns();
  const auto& hpatterns = hydrogen_patterns();
  double logp = 0.0;
  for (int a = 0; a < static_cast<int>(g.atom_count()); ++a) {
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      if (patterns[k].matches_at(g, a)) {
        logp += kCrippenRows[k].logp;
        break;
      }
    }
    const int h = g.atom(a).hydrogens;
    if (h == 0) continue;
    double contribution = kHydrogenFallback;
    for (std::size_t k = 0; k < hpatterns.size(); ++k) {
      if (hpatterns[k].matches_at(g, a)) {
        contribution = kHydrogenRules[k].logp;
        break;
      }
    }
    logp += h * contribution;
  }
  return logp;
}

double tpsa(const MolGraph& g) {
  double total = 0.0;
  for (int a = 0; a < static_cast<int>(g.atom_count()); ++a) {
    const Atom& atom = g.atom(a);
    if (atom.element != 7 && atom.element != 8) continue;
    int single = 0, dbl = 0, triple = 0, arom = 0;
    for (const auto& nb : g.neighbors(a)) {
      const Bond& b = g.bond(nb.bond);
      if (b.aromatic) {
        ++arom;
      } else if (b.order == 1) {
        ++single;
      } else if (b.order == 2) {
        ++dbl;
      } else if (b.order == 3) {
        ++triple;
      }
    }
    const bool ring3 = in_three_ring(g, a);
    total += atom.element == 7
                 ? tpsa_nitrogen(g.degree(a), atom.hydrogens, atom.charge, single, dbl, triple, arom, ring3)
                 : tpsa_oxygen(g.degree(a), atom.hydrogens, atom.charge, single, dbl, arom, ring3);
  }
  return total;
}

int hbond_donors(const MolGraph& g) {
  static const SmartsPattern donor =
      SmartsPattern::parse("[N&!H0&v3,N&!H0&+1&v4,O&H1&+0,S&H1&+0,n&H1&+0]");
  return count_atoms(donor, g);
}

int hbond_acceptors(const MolGraph& g) {
  int n = 0;
  for (const auto& p : acceptor_patterns()) n += static_cast<int>(p.matches(g).size());
  return n;
}

int rotatable_bonds(const MolGraph& g) {
  static const SmartsPattern rotor = SmartsPattern::parse(
      "[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])&!$([CD3](=[N,O,S])-!@[#7,O,"
      "S!D1])&!$([#7,O,S!D1]-!@[CD3]=[N,O,S])&!$([CD3](=[N+])-!@[#7!D1])&!$([#7!D1]-!@[CD3]=[N+])]-,:;!@[!$(*#*)&!D1&!$("
      "C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])]");
  return static_cast<int>(rotor.matches(g, true, 100000).size());
}

int aromatic_rings(const MolGraph& g) {
  static const SmartsPattern aliphatic_ring = SmartsPattern::parse("[$([A;R][!a])]");
  std::vector<bool> keep(g.atom_count(), true);
  for (int a = 0; a < static_cast<int>(g.atom_count()); ++a) {
    if (aliphatic_ring.matches_at(g, a)) keep[static_cast<std::size_t>(a)] = false;
  }
  int v = 0;
  for (bool k : keep) v += k ? 1 : 0;
  int e = 0;
  for (const Bond& b : g.bonds()) {
    e += keep[static_cast<std::size_t>(b.begin)] && keep[static_cast<std::size_t>(b.end)] ? 1 : 0;
  }
  // Cyclomatic number of the remaining graph.
  std::vector<int> parent(g.atom_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  int components = v;
  for (const Bond& b : g.bonds()) {
    if (!keep[static_cast<std::size_t>(b.begin)] || !keep[static_cast<std::size_t>(b.end)]) continue;
    const int ra = find(b.begin);
    const int rb = find(b.end);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --components;
    }
  }
  return e - v + components;
}

int structural_alerts(const MolGraph& g) {
  int n = 0;
  for (const auto& p : alert_patterns()) n += p.has_match(g) ? 1 : 0;
  return n;
}

QedInputs qed_inputs(const MolGraph& g) {
  return QedInputs{molecular_weight(g), crippen_logp(g), hbond_acceptors(g), hbond_donors(g),
                   tpsa(g),             rotatable_bonds(g), aromatic_rings(g), structural_alerts(g)};
}

double qed(const QedInputs& in) {
  const std::array<double, 8> d{ads(in.mw, kAdsMw),         ads(in.logp, kAdsLogp),
                                ads(in.hba, kAdsHba),       ads(in.hbd, kAdsHbd),
                                ads(in.psa, kAdsPsa),       ads(in.rotb, kAdsRotb),
                                ads(in.arom, kAdsArom),     ads(in.alerts, kAdsAlerts)};
  double t = 0.0;
  double wsum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    t += kWeights[i] * std::log(d[i]);
    wsum += kWeights[i];
  }
  return std::exp(t / wsum);
}

double qed(const MolGraph& g) { return qed(qed_inputs(g)); }

}  // namespace synthphore::chem
