//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/nn/model.hpp"

#include "synthphore/util/error.hpp"

namespace synthphore::nn {

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"hidden", c.hidden},         {"d_model", c.d_model},
                     {"encoder_layers", c.encoder_layers}, {"decoder_layers", c.decoder_layers},
                     {"heads", c.heads},           {"ff", c.ff},
                     {"fp_bits", c.fp_bits},       {"fp_radius", c.fp_radius},
                     {"reactions", c.reactions},   {"max_positions", c.max_positions}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  c.hidden = j.at("hidden").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.encoder_layers = j.at("encoder_layers").get<int>();
  c.decoder_layers = j.at("decoder_layers").get<int>();
  c.heads = j.at("heads").get<int>();
  c.ff = j.at("ff").get<int>();
  c.fp_bits = j.at("fp_bits").get<int>();
  c.fp_radius = j.at("fp_radius").get<int>();
  c.reactions = j.at("reactions").get<int>();
  c.max_positions = j.at("max_positions").get<int>();
}

template <class S>
Model<S>::Model(const ModelConfig& c, std::uint64_t seed) : config(c) {
  if (c.hidden <= 0 || c.d_model <= 0 || c.heads <= 0 || c.reactions <= 0) throw ShapeMismatch("invalid model config");
  Rng enc_rng(derive_seed(seed, 1));
  Rng dec_rng(derive_seed(seed, 2));
  encoder = Encoder<S>(c.hidden, c.d_model, c.encoder_layers, enc_rng);
  decoder = Decoder<S>(c.fp_bits, c.d_model, c.heads, c.ff, c.decoder_layers, c.reactions, c.max_positions, dec_rng);
}

template <class S>
TensorList<S> Model<S>::tensors() {
  TensorList<S> out;
  encoder.collect("encoder", out);
  decoder.collect("decoder", out);
  return out;
}

template <class S>
ConstTensorList<S> Model<S>::tensors() const {
  auto mutable_list = const_cast<Model*>(this)->tensors();
  ConstTensorList<S> out;
  out.reserve(mutable_list.size());
  for (auto& [name, ptr] : mutable_list) out.emplace_back(name, ptr);
  return out;
}

template <class S>
Model<S> Model<S>::zeros_like() const {
  Model g = *this;
  g.encoder.zero();
  g.decoder.zero();
  return g;
}

template <class S>
std::size_t Model<S>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors()) n += static_cast<std::size_t>(t->size());
  return n;
}

template <class S>
template <class T>
Model<T> Model<S>::cast() const {
  Model<T> out(config, 0);
  auto dst = out.tensors();
  const auto src = tensors();
  for (std::size_t i = 0; i < src.size(); ++i) *dst[i].second = src[i].second->template cast<T>();
  out.decoder.pe = decoder.pe.template cast<T>();
  return out;
}

template struct Model<float>;
template struct Model<double>;
template Model<double> Model<float>::cast<double>() const;
template Model<float> Model<double>::cast<float>() const;
template Model<float> Model<float>::cast<float>() const;
template Model<double> Model<double>::cast<double>() const;

}  // namespace synthphore::nn
