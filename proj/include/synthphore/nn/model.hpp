//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>

#include <json.hpp>

#include "synthphore/nn/decoder.hpp"
#include "synthphore/nn/egnn.hpp"

namespace synthphore::nn {

struct ModelConfig {
  int hidden = 128;
  int d_model = 128;
  int encoder_layers = 7;
  int decoder_layers = 7;
  int heads = 8;
  int ff = 512;
  int fp_bits = chem::kFingerprintBits;
  int fp_radius = 3;
  // Reaction vocabulary size including NONE at index 0.
  int reactions = 21;
  int max_positions = 16;

  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

template <class S>
struct Model {
  ModelConfig config;
  Encoder<S> encoder;
  Decoder<S> decoder;

  Model() = default;
  Model(const ModelConfig& config, std::uint64_t seed);

  TensorList<S> tensors();
  ConstTensorList<S> tensors() const;
  // Same shapes, all zeros (gradient buffers).
  Model zeros_like() const;
  std::size_t parameter_count() const;

  template <class T>
  Model<T> cast() const;
};

}  // namespace synthphore::nn
