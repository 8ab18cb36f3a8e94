//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/chem/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <tuple>

#include "synthphore/util/error.hpp"
#include "synthphore/util/hash.hpp"

namespace synthphore::chem {

BitFingerprint::BitFingerprint(int nbits, int radius)
    : nbits_(nbits), radius_(radius), words_(static_cast<std::size_t>((nbits + 63) / 64), 0) {
  if (nbits <= 0) throw LengthMismatch("fingerprint length must be positive");
}

int BitFingerprint::popcount() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<int> BitFingerprint::on_bits() const {
  std::vector<int> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      out.push_back(static_cast<int>(w * 64) + std::countr_zero(word));
      word &= word - 1;
    }
  }
  return out;
}

std::string BitFingerprint::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  const int nbytes = (nbits_ + 7) / 8;
  out.reserve(static_cast<std::size_t>(nbytes) * 2);
  for (int k = 0; k < nbytes; ++k) {
    const auto byte = static_cast<unsigned>((words_[static_cast<std::size_t>(k / 8)] >> ((k % 8) * 8)) & 0xffU);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

BitFingerprint BitFingerprint::from_hex(std::string_view hex, int radius) {
  if (hex.size() % 2 != 0) throw ParseError("odd-length fingerprint hex");
  BitFingerprint fp(static_cast<int>(hex.size()) * 4, radius);
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw ParseError("bad hex digit in fingerprint");
  };
  for (std::size_t k = 0; k < hex.size() / 2; ++k) {
    const std::uint64_t byte = (nibble(hex[2 * k]) << 4) | nibble(hex[2 * k + 1]);
    fp.words_[k / 8] |= byte << ((k % 8) * 8);
  }
  return fp;
}

std::vector<std::uint32_t> morgan_identifiers(const MolGraph& g, int radius) {
  std::vector<std::uint32_t> ids;
  const std::size_t n = g.atom_count();
  const std::size_t nb = g.bond_count();
  const RingInfo& rings = g.rings();

  std::vector<std::uint32_t> invariant(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = g.atom(static_cast<int>(i));
    std::uint32_t h = 0;
    h = mix32(h, static_cast<std::uint32_t>(a.element));
    h = mix32(h, static_cast<std::uint32_t>(g.degree(static_cast<int>(i))));
    h = mix32(h, static_cast<std::uint32_t>(a.hydrogens));
    h = mix32(h, static_cast<std::uint32_t>(a.charge));
    h = mix32(h, static_cast<std::uint32_t>(a.isotope));
    if (rings.atom_in_ring(static_cast<int>(i))) h = mix32(h, 1U);
    invariant[i] = h;
    ids.push_back(h);
  }

  using BondSet = std::vector<std::uint64_t>;
  const std::size_t words = (nb + 63) / 64;
  std::vector<BondSet> neighborhood(n, BondSet(words, 0));
  std::vector<bool> dead(n, false);
  std::set<BondSet> seen;

  for (int layer = 0; layer < radius; ++layer) {
    std::vector<std::tuple<BondSet, std::uint32_t, std::size_t>> round;
    std::vector<std::uint32_t> next = invariant;
    std::vector<BondSet> next_neighborhood = neighborhood;
    for (std::size_t i = 0; i < n; ++i) {
      if (dead[i]) continue;
      const auto nbrs = g.neighbors(static_cast<int>(i));
      if (nbrs.empty()) {
        dead[i] = true;
        continue;
      }
      std::vector<std::pair<std::uint32_t, std::uint32_t>> env;
      BondSet cover = neighborhood[i];
      for (const auto& nb_ : nbrs) {
        const Bond& b = g.bond(nb_.bond);
        const std::uint32_t code = b.aromatic ? 12U : static_cast<std::uint32_t>(b.order);
        env.emplace_back(code, invariant[static_cast<std::size_t>(nb_.atom)]);
        cover[static_cast<std::size_t>(nb_.bond) / 64] |= std::uint64_t{1} << (nb_.bond % 64);
        const auto& other = neighborhood[static_cast<std::size_t>(nb_.atom)];
        for (std::size_t w = 0; w < words; ++w) cover[w] |= other[w];
      }
      std::sort(env.begin(), env.end());
      std::uint32_t h = static_cast<std::uint32_t>(layer);
      h = mix32(h, invariant[i]);
      for (const auto& [code, inv] : env) {
        h = mix32(h, code);
        h = mix32(h, inv);
      }
      next[i] = h;
      next_neighborhood[i] = cover;
      round.emplace_back(cover, h, i);
    }
    std::sort(round.begin(), round.end());
    for (const auto& [cover, h, atom] : round) {
      if (seen.insert(cover).second) {
        ids.push_back(h);
      } else {
        dead[atom] = true;
      }
    }
    invariant = std::move(next);
    neighborhood = std::move(next_neighborhood);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

BitFingerprint morgan_fingerprint(const MolGraph& g, int radius, int nbits) {
  BitFingerprint fp(nbits, radius);
  for (std::uint32_t id : morgan_identifiers(g, radius)) fp.set(static_cast<int>(id % static_cast<std::uint32_t>(nbits)));
  return fp;
}

double tanimoto(const BitFingerprint& a, const BitFingerprint& b) {
  if (a.nbits() != b.nbits()) {
    throw LengthMismatch("fingerprint lengths differ: " + std::to_string(a.nbits()) + " vs " +
                         std::to_string(b.nbits()));
  }
  int both = 0;
  int either = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    both += std::popcount(wa[i] & wb[i]);
    either += std::popcount(wa[i] | wb[i]);
  }
  return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace synthphore::chem
