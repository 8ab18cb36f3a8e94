//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "synthphore/train/objective.hpp"

namespace synthphore::train {

struct TrainConfig {
  double lr = 3e-4;
  int batch_size = 8;
  int epochs = 500;
  std::uint64_t seed = 0;
  int d_model = 128;
  double grad_clip = 1.0;
  bool detach_block_targets = true;
  // Stop once both training accuracies reach this value (0 disables).
  double stop_accuracy = 0.0;

  bool operator==(const TrainConfig&) const = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

// Adaptive moment estimation with global-norm gradient clipping.
template <class S>
class Adam {
 public:
  Adam(const nn::Model<S>& model, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  // Returns the pre-clipping global gradient norm.
  double step(nn::Model<S>& model, nn::Model<S>& grads, double clip);
  long steps() const { return t_; }

 private:
  nn::Model<S> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

struct EpochMetrics {
  int epoch = 0;
  double block_loss = 0.0;
  double rxn_loss = 0.0;
  double block_acc = 0.0;
  double rxn_acc = 0.0;
};

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& metrics);

struct TrainResult {
  nn::Model<float> model;
  std::vector<EpochMetrics> metrics;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

// Deterministic for a fixed config.seed. Throws DivergenceError on a non-finite
// loss and ShapeMismatch on an empty dataset.
TrainResult train(const std::vector<Example>& examples, const synth::Catalog& catalog, const TrainConfig& config,
                  const nn::ModelConfig& model_config, const EpochCallback& on_epoch = {});

// Fresh model for a config seed; the initial state of train().
nn::Model<float> initial_model(const TrainConfig& config, const nn::ModelConfig& model_config);

}  // namespace synthphore::train
