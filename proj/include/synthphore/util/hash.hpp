//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace synthphore {

// 64-bit FNV-1a. Used for checkpoint digests and catalog binding; not a
// cryptographic hash.
class Fnv1a64 {
 public:
  void update(std::span<const std::byte> bytes) {
    for (std::byte b : bytes) {
      state_ ^= static_cast<std::uint64_t>(b);
      state_ *= 0x100000001b3ULL;
    }
  }
  void update(std::string_view s) { update(std::as_bytes(std::span(s.data(), s.size()))); }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint32_t mix32(std::uint32_t seed, std::uint32_t value) {
  // boost::hash_combine constant, kept 32-bit so fingerprints are portable.
  seed ^= value + 0x9e3779b9U + (seed << 6) + (seed >> 2);
  return seed;
}

}  // namespace synthphore
