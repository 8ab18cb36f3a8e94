//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "synthphore/train/trainer.hpp"

namespace synthphore::train {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  TrainConfig train_config;
  std::uint64_t catalog_hash = 0;
  std::uint64_t templates_hash = 0;
  nn::Model<float> model;
};

// Little-endian container: magic, version, config-JSON length, config JSON,
// named float32 arrays with shapes, trailing FNV-1a digest.
std::string serialize(const Checkpoint& ckpt);
// Throws ChecksumError (bad magic, truncation, digest mismatch) and UnsupportedVersion.
Checkpoint deserialize(const std::string& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Throws CatalogMismatch when the checkpoint was trained against another catalog.
void check_catalog(const Checkpoint& ckpt, const synth::Catalog& catalog);

// Serialise, reload and compare forward outputs bit-for-bit on the probes.
bool verify_checkpoint(const Checkpoint& ckpt, const std::vector<Example>& probes);

}  // namespace synthphore::train
