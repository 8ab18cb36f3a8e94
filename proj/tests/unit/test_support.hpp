//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "synthphore/nn/model.hpp"
#include "synthphore/synth/catalog.hpp"

namespace synthphore::testing {

// Small architecture for fast tests; the code paths match the full model.
inline nn::ModelConfig tiny_config(int reactions = 21) {
  nn::ModelConfig c;
  c.hidden = 16;
  c.d_model = 16;
  c.encoder_layers = 2;
  c.decoder_layers = 2;
  c.heads = 2;
  c.ff = 32;
  c.reactions = reactions;
  return c;
}

inline const synth::Catalog& desk_catalog() {
  static const synth::Catalog c = synth::load_catalog(synth::default_catalog_path());
  return c;
}

inline const synth::TemplateSet& desk_templates() {
  static const synth::TemplateSet t = synth::load_templates(synth::default_templates_path());
  return t;
}

}  // namespace synthphore::testing
