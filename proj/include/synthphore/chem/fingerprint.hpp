//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthphore/chem/molgraph.hpp"

namespace synthphore::chem {

inline constexpr int kFingerprintBits = 4096;

class BitFingerprint {
 public:
  BitFingerprint() = default;
  BitFingerprint(int nbits, int radius);

  int nbits() const { return nbits_; }
  int radius() const { return radius_; }
  bool test(int bit) const { return (words_[static_cast<std::size_t>(bit) / 64] >> (bit % 64)) & 1U; }
  void set(int bit) { words_[static_cast<std::size_t>(bit) / 64] |= std::uint64_t{1} << (bit % 64); }
  int popcount() const;
  std::vector<int> on_bits() const;
  std::span<const std::uint64_t> words() const { return words_; }

  // Lowercase hex, two characters per byte, byte k holding bits 8k..8k+7.
  std::string to_hex() const;
  static BitFingerprint from_hex(std::string_view hex, int radius);

  bool operator==(const BitFingerprint&) const = default;

 private:
  int nbits_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

// Extended-connectivity fingerprint: atom invariants (element, heavy degree,
// hydrogens, charge, isotope, ring membership) refined `radius` times with
// bond orders; environments covering an already-seen bond set are dropped.
BitFingerprint morgan_fingerprint(const MolGraph& g, int radius, int nbits = kFingerprintBits);

// Sorted, distinct 32-bit environment identifiers before folding.
std::vector<std::uint32_t> morgan_identifiers(const MolGraph& g, int radius);

// |a & b| / |a | b|; 1.0 when both are empty. Throws LengthMismatch.
double tanimoto(const BitFingerprint& a, const BitFingerprint& b);

}  // namespace synthphore::chem
