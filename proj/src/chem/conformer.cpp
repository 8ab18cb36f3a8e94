//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/conformer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>

#include "synthphore/chem/element.hpp"
#include "synthphore/util/error.hpp"
#include "synthphore/util/random.hpp"

namespace synthphore::chem {

namespace {

constexpr int kDims = 4;
using Point = std::array<double, kDims>;

struct DistanceTerm {
  int i, j;
  double target;
  double weight;
};

struct WallTerm {
  int i, j;
  double minimum;
};

struct PlaneTerm {
  int a, b, c, d;
};

struct ForceField {
  std::vector<DistanceTerm> distances;
  std::vector<WallTerm> walls;
  std::vector<PlaneTerm> planes;
};

double bond_length(const MolGraph& g, const Bond& b) {
  const double ra = element_info(g.atom(b.begin).element)->covalent_radius;
  const double rb = element_info(g.atom(b.end).element)->covalent_radius;
  double factor = 1.0;
  if (b.aromatic) {
    factor = 0.92;
  } else if (b.order == 2) {
    factor = 0.87;
  } else if (b.order == 3) {
    factor = 0.78;
  }
  return (ra + rb) * factor;
}

bool is_sp2(const MolGraph& g, int a) {
  if (g.atom(a).aromatic) return true;
  for (const auto& nb : g.neighbors(a)) {
    if (g.bond(nb.bond).order == 2) return true;
  }
  return false;
}

bool is_linear(const MolGraph& g, int a) {
  int doubles = 0;
  for (const auto& nb : g.neighbors(a)) {
    const Bond& b = g.bond(nb.bond);
    if (b.aromatic) return false;
    if (b.order == 3) return true;
    if (b.order == 2) ++doubles;
  }
  return doubles >= 2 && g.degree(a) == 2;
}

// Smallest ring containing atom a and both neighbours, 0 if none.
int shared_ring_size(const MolGraph& g, int a, int x, int y) {
  int best = 0;
  for (const auto& ring : g.rings().atom_rings) {
    const bool has_a = std::find(ring.begin(), ring.end(), a) != ring.end();
    const bool has_x = std::find(ring.begin(), ring.end(), x) != ring.end();
    const bool has_y = std::find(ring.begin(), ring.end(), y) != ring.end();
    if (has_a && has_x && has_y) {
      const int size = static_cast<int>(ring.size());
      if (best == 0 || size < best) best = size;
    }
  }
  return best;
}

double ideal_angle(const MolGraph& g, int center, int x, int y) {
  const int ring = shared_ring_size(g, center, x, y);
  if (ring >= 3 && ring <= 5) return std::numbers::pi * (ring - 2) / ring;
  if (is_linear(g, center)) return std::numbers::pi;
  if (ring == 6 && is_sp2(g, center)) return 2.0 * std::numbers::pi / 3.0;
  if (is_sp2(g, center)) return 2.0 * std::numbers::pi / 3.0;
  if (ring == 6) return 111.0 * std::numbers::pi / 180.0;
  return 109.5 * std::numbers::pi / 180.0;
}

std::vector<std::vector<int>> topological_distances(const MolGraph& g) {
  const std::size_t n = g.atom_count();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(static_cast<int>(s));
    dist[s][s] = 0;
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (const auto& nb : g.neighbors(a)) {
        if (dist[s][static_cast<std::size_t>(nb.atom)] < 0) {
          dist[s][static_cast<std::size_t>(nb.atom)] = dist[s][static_cast<std::size_t>(a)] + 1;
          q.push(nb.atom);
        }
      }
    }
  }
  return dist;
}

ForceField build_force_field(const MolGraph& g) {
  ForceField ff;
  const int n = static_cast<int>(g.atom_count());
  std::vector<std::vector<double>> bonded(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (const Bond& b : g.bonds()) {
    const double d = bond_length(g, b);
    bonded[static_cast<std::size_t>(b.begin)][static_cast<std::size_t>(b.end)] = d;
    bonded[static_cast<std::size_t>(b.end)][static_cast<std::size_t>(b.begin)] = d;
    ff.distances.push_back({b.begin, b.end, d, 100.0});
  }
  std::vector<std::vector<bool>> constrained(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (const Bond& b : g.bonds()) {
    constrained[static_cast<std::size_t>(b.begin)][static_cast<std::size_t>(b.end)] = true;
    constrained[static_cast<std::size_t>(b.end)][static_cast<std::size_t>(b.begin)] = true;
  }
  // 1-3 distances from ideal angles.
  for (int c = 0; c < n; ++c) {
    const auto nbrs = g.neighbors(c);
    for (std::size_t p = 0; p < nbrs.size(); ++p) {
      for (std::size_t q = p + 1; q < nbrs.size(); ++q) {
        const int x = nbrs[p].atom;
        const int y = nbrs[q].atom;
        const double a = bonded[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)];
        const double b = bonded[static_cast<std::size_t>(c)][static_cast<std::size_t>(y)];
        double theta = ideal_angle(g, c, x, y);
        // Tetrahedral centres with four substituents or crowded sp2 centres keep
        // their ideal angle; others are unchanged.
        if (nbrs.size() > 4) theta = std::numbers::pi / 2.0;
        const double d = std::sqrt(a * a + b * b - 2.0 * a * b * std::cos(theta));
        if (constrained[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]) continue;
        constrained[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = true;
        constrained[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = true;
        ff.distances.push_back({x, y, d, 50.0});
      }
    }
  }
  // Planar rings (aromatic or fully sp2) as regular polygons.
  for (const auto& ring : g.rings().atom_rings) {
    const bool planar = std::all_of(ring.begin(), ring.end(), [&](int a) { return is_sp2(g, a); });
    if (!planar) continue;
    const int m = static_cast<int>(ring.size());
    double mean = 0.0;
    for (int k = 0; k < m; ++k) {
      mean += bonded[static_cast<std::size_t>(ring[static_cast<std::size_t>(k)])]
                    [static_cast<std::size_t>(ring[static_cast<std::size_t>((k + 1) % m)])];
    }
    mean /= m;
    const double circumradius = mean / (2.0 * std::sin(std::numbers::pi / m));
    for (int k = 0; k < m; ++k) {
      for (int l = k + 2; l < m; ++l) {
        if (k == 0 && l == m - 1) continue;
        const int x = ring[static_cast<std::size_t>(k)];
        const int y = ring[static_cast<std::size_t>(l)];
        const int steps = std::min(l - k, m - (l - k));
        const double d = 2.0 * circumradius * std::sin(std::numbers::pi * steps / m);
        ff.distances.push_back({x, y, d, 50.0});
        constrained[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = true;
        constrained[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = true;
      }
    }
  }
  // Planarity: sp2 centres with three neighbours, and substituents across double/aromatic bonds.
  for (int c = 0; c < n; ++c) {
    const auto nbrs = g.neighbors(c);
    if (nbrs.size() == 3 && is_sp2(g, c) && !is_linear(g, c)) {
      ff.planes.push_back({c, nbrs[0].atom, nbrs[1].atom, nbrs[2].atom});
    }
  }
  for (const Bond& b : g.bonds()) {
    if (!(b.aromatic || b.order == 2)) continue;
    if (is_linear(g, b.begin) || is_linear(g, b.end)) continue;
    for (const auto& na : g.neighbors(b.begin)) {
      if (na.atom == b.end) continue;
      for (const auto& nb : g.neighbors(b.end)) {
        if (nb.atom == b.begin || nb.atom == na.atom) continue;
        ff.planes.push_back({na.atom, b.begin, b.end, nb.atom});
      }
    }
  }
  // Soft walls between everything not otherwise constrained.
  const auto topo = topological_distances(g);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (constrained[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
      const int t = topo[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      ff.walls.push_back({i, j, t == 3 ? 2.5 : 3.0});
    }
  }
  return ff;
}

// Energy and gradient; the 4th coordinate is penalized with weight w4.
double evaluate(const ForceField& ff, const std::vector<Point>& x, std::vector<Point>& grad, double w4, bool planes) {
  for (auto& gpt : grad) gpt.fill(0.0);
  double energy = 0.0;
  auto pair = [&](int i, int j, double target, double weight, bool wall) {
    Point diff{};
    double d2 = 0.0;
    for (int k = 0; k < kDims; ++k) {
      diff[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                                          x[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      d2 += diff[static_cast<std::size_t>(k)] * diff[static_cast<std::size_t>(k)];
    }
    const double d = std::sqrt(std::max(d2, 1e-12));
    const double delta = d - target;
    if (wall && delta >= 0.0) return;
    energy += weight * delta * delta;
    const double scale = 2.0 * weight * delta / d;
    for (int k = 0; k < kDims; ++k) {
      grad[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] += scale * diff[static_cast<std::size_t>(k)];
      grad[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -= scale * diff[static_cast<std::size_t>(k)];
    }
  };
  for (const auto& t : ff.distances) pair(t.i, t.j, t.target, t.weight, false);
  for (const auto& t : ff.walls) pair(t.i, t.j, t.minimum, 10.0, true);

  // Planarity via the squared scalar triple product (3D part only).
  constexpr double kPlane = 10.0;
  for (const auto& p : ff.planes) {
    if (!planes) break;
    const auto& a = x[static_cast<std::size_t>(p.a)];
    const auto& b = x[static_cast<std::size_t>(p.b)];
    const auto& c = x[static_cast<std::size_t>(p.c)];
    const auto& d = x[static_cast<std::size_t>(p.d)];
    const Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    const Vec3 w{d[0] - a[0], d[1] - a[1], d[2] - a[2]};
    const Vec3 vxw{v[1] * w[2] - v[2] * w[1], v[2] * w[0] - v[0] * w[2], v[0] * w[1] - v[1] * w[0]};
    const Vec3 wxu{w[1] * u[2] - w[2] * u[1], w[2] * u[0] - w[0] * u[2], w[0] * u[1] - w[1] * u[0]};
    const Vec3 uxv{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double vol = u[0] * vxw[0] + u[1] * vxw[1] + u[2] * vxw[2];
    energy += kPlane * vol * vol;
    const double s = 2.0 * kPlane * vol;
    for (int k = 0; k < 3; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      grad[static_cast<std::size_t>(p.b)][kk] += s * vxw[kk];
      grad[static_cast<std::size_t>(p.c)][kk] += s * wxu[kk];
      grad[static_cast<std::size_t>(p.d)][kk] += s * uxv[kk];
      grad[static_cast<std::size_t>(p.a)][kk] -= s * (vxw[kk] + wxu[kk] + uxv[kk]);
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    energy += w4 * x[i][3] * x[i][3];
    grad[i][3] += 2.0 * w4 * x[i][3];
  }
  return energy;
}

// FIRE minimizer with a fixed iteration budget.
double minimize(const ForceField& ff, std::vector<Point>& x, double w4, bool planes, int iterations) {
  const std::size_t n = x.size();
  std::vector<Point> v(n, Point{});
  std::vector<Point> grad(n);
  double dt = 0.01;
  double alpha = 0.1;
  int positive = 0;
  constexpr double kDtMax = 0.05;
  constexpr double kMaxStep = 0.2;
  double energy = evaluate(ff, x, grad, w4, planes);
  for (int it = 0; it < iterations; ++it) {
    double power = 0.0, vnorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < kDims; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        power -= grad[i][kk] * v[i][kk];
        vnorm += v[i][kk] * v[i][kk];
        fnorm += grad[i][kk] * grad[i][kk];
      }
    }
    vnorm = std::sqrt(vnorm);
    fnorm = std::sqrt(fnorm);
    if (fnorm < 1e-6) break;
    if (power > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < kDims; ++k) {
          const auto kk = static_cast<std::size_t>(k);
          v[i][kk] = (1.0 - alpha) * v[i][kk] - alpha * grad[i][kk] / fnorm * vnorm;
        }
      }
      if (++positive > 5) {
        dt = std::min(dt * 1.1, kDtMax);
        alpha *= 0.99;
      }
    } else {
      for (auto& vi : v) vi.fill(0.0);
      positive = 0;
      dt *= 0.5;
      alpha = 0.1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double step2 = 0.0;
      for (int k = 0; k < kDims; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        v[i][kk] -= dt * grad[i][kk];
        step2 += dt * dt * v[i][kk] * v[i][kk];
      }
      // Cap per-atom displacement.
      const double scale = step2 > kMaxStep * kMaxStep ? kMaxStep / std::sqrt(step2) : 1.0;
      for (int k = 0; k < kDims; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        x[i][kk] += scale * dt * v[i][kk];
      }
    }
    energy = evaluate(ff, x, grad, w4, planes);
  }
  return energy;
}

}  // namespace

std::vector<Vec3> embed_molecule(const MolGraph& g, std::uint64_t seed) {
  const std::size_t n = g.atom_count();
  if (n == 0) throw EmbedFailure("cannot embed an empty molecule");
  for (const Atom& a : g.atoms()) {
    if (element_info(a.element) == nullptr) throw EmbedFailure("unsupported element");
  }
  const ForceField ff = build_force_field(g);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    const double box = 2.0 * std::cbrt(static_cast<double>(n)) + 1.0;
    std::vector<Point> x(n);
    for (auto& p : x) {
      for (auto& c : p) c = uniform(rng, -box, box);
    }
    minimize(ff, x, 0.0, false, 500);
    minimize(ff, x, 5.0, false, 600);
    for (auto& p : x) p[3] = 0.0;
    const double energy = minimize(ff, x, 0.0, true, 2000);
    bool finite = std::isfinite(energy);
    std::vector<Vec3> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = {x[i][0], x[i][1], x[i][2]};
      finite = finite && std::isfinite(x[i][0]) && std::isfinite(x[i][1]) && std::isfinite(x[i][2]);
    }
    if (!finite) continue;
    // Accept when no bond is badly stretched.
    bool ok = true;
    for (const Bond& b : g.bonds()) {
      const auto& p = out[static_cast<std::size_t>(b.begin)];
      const auto& q = out[static_cast<std::size_t>(b.end)];
      const double d = std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
      if (std::abs(d - bond_length(g, b)) > 0.15) ok = false;
    }
    if (ok) {
      // Centre at the origin.
      Vec3 c{0, 0, 0};
      for (const auto& p : out) {
        for (int k = 0; k < 3; ++k) c[static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(k)] / static_cast<double>(n);
      }
      for (auto& p : out) {
        for (int k = 0; k < 3; ++k) p[static_cast<std::size_t>(k)] -= c[static_cast<std::size_t>(k)];
      }
      return out;
    }
  }
  throw EmbedFailure("3D embedding did not converge after 3 attempts");
}

double embedding_energy(const MolGraph& g, const std::vector<Vec3>& coords) {
  const ForceField ff = build_force_field(g);
  std::vector<Point> x(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) x[i] = {coords[i][0], coords[i][1], coords[i][2], 0.0};
  std::vector<Point> grad(coords.size());
  return evaluate(ff, x, grad, 0.0, true);
}

std::string to_sdf(const MolGraph& g, const std::vector<Vec3>& coords, const std::string& title) {
  std::string out = title + "\n  synthphore\n\n";
  char line[128];
  std::snprintf(line, sizeof line, "%3zu%3zu  0  0  0  0  0  0  0  0999 V2000\n", g.atom_count(), g.bond_count());
  out += line;
  for (std::size_t i = 0; i < g.atom_count(); ++i) {
    const Atom& a = g.atom(static_cast<int>(i));
    const int charge_code = a.charge == 0 ? 0 : 4 - a.charge;
    std::snprintf(line, sizeof line, "%10.4f%10.4f%10.4f %-3s 0%3d  0  0  0  0  0  0  0  0  0  0\n", coords[i][0],
                  coords[i][1], coords[i][2], std::string(element_info(a.element)->symbol).c_str(),
                  charge_code >= 1 && charge_code <= 7 ? charge_code : 0);
    out += line;
  }
  for (const Bond& b : g.bonds()) {
    std::snprintf(line, sizeof line, "%3d%3d%3d  0\n", b.begin + 1, b.end + 1, b.order);
    out += line;
  }
  for (std::size_t i = 0; i < g.atom_count(); ++i) {
    const Atom& a = g.atom(static_cast<int>(i));
    if (a.charge != 0) {
      std::snprintf(line, sizeof line, "M  CHG  1 %3zu %3d\n", i + 1, a.charge);
      out += line;
    }
  }
  out += "M  END\n$$$$\n";
  return out;
}

}  // namespace synthphore::chem
