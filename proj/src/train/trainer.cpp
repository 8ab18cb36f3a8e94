//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/train/trainer.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "synthphore/util/error.hpp"

namespace synthphore::train {

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"lr", c.lr},
                     {"batch_size", c.batch_size},
                     {"epochs", c.epochs},
                     {"seed", c.seed},
                     {"d_model", c.d_model},
                     {"grad_clip", c.grad_clip},
                     {"detach_block_targets", c.detach_block_targets},
                     {"stop_accuracy", c.stop_accuracy}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  const TrainConfig defaults;
  c.lr = j.value("lr", defaults.lr);
  c.batch_size = j.value("batch_size", defaults.batch_size);
  c.epochs = j.value("epochs", defaults.epochs);
  c.seed = j.value("seed", defaults.seed);
  c.d_model = j.value("d_model", defaults.d_model);
  c.grad_clip = j.value("grad_clip", defaults.grad_clip);
  c.detach_block_targets = j.value("detach_block_targets", defaults.detach_block_targets);
  c.stop_accuracy = j.value("stop_accuracy", defaults.stop_accuracy);
}

template <class S>
Adam<S>::Adam(const nn::Model<S>& model, double lr, double beta1, double beta2, double eps)
    : m_(model.zeros_like()), v_(model.zeros_like()), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

template <class S>
double Adam<S>::step(nn::Model<S>& model, nn::Model<S>& grads, double clip) {
  auto params = model.tensors();
  auto gs = grads.tensors();
  auto ms = m_.tensors();
  auto vs = v_.tensors();
  double sq = 0.0;
  for (const auto& [name, g] : gs) sq += static_cast<double>(g->template cast<double>().squaredNorm());
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw DivergenceError("non-finite gradient norm");
  const S scale = static_cast<S>(clip > 0.0 && norm > clip ? clip / norm : 1.0);
  ++t_;
  const S b1 = static_cast<S>(beta1_), b2 = static_cast<S>(beta2_);
  const S c1 = static_cast<S>(1.0 - std::pow(beta1_, static_cast<double>(t_)));
  const S c2 = static_cast<S>(1.0 - std::pow(beta2_, static_cast<double>(t_)));
  const S lr = static_cast<S>(lr_), eps = static_cast<S>(eps_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i].second;
    auto& m = *ms[i].second;
    auto& v = *vs[i].second;
    const auto& g = *gs[i].second;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const S gk = g.data()[k] * scale;
      m.data()[k] = b1 * m.data()[k] + (S(1) - b1) * gk;
      v.data()[k] = b2 * v.data()[k] + (S(1) - b2) * gk * gk;
      const S mhat = m.data()[k] / c1;
      const S vhat = v.data()[k] / c2;
      p.data()[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
  return norm;
}

template class Adam<float>;
template class Adam<double>;

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& metrics) {
  out << "epoch,L_B,L_rxn,block_acc,rxn_acc\n";
  char line[160];
  for (const auto& m : metrics) {
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g,%.6f,%.6f\n", m.epoch, m.block_loss, m.rxn_loss, m.block_acc,
                  m.rxn_acc);
    out << line;
  }
}

nn::Model<float> initial_model(const TrainConfig& config, const nn::ModelConfig& model_config) {
  nn::ModelConfig mc = model_config;
  mc.d_model = config.d_model;
  return nn::Model<float>(mc, derive_seed(config.seed, 100));
}

TrainResult train(const std::vector<Example>& examples, const synth::Catalog& catalog, const TrainConfig& config,
                  const nn::ModelConfig& model_config, const EpochCallback& on_epoch) {
  if (examples.empty()) throw ShapeMismatch("training set is empty");
  if (config.batch_size <= 0 || config.lr <= 0.0 || config.epochs < 0) throw ShapeMismatch("invalid training config");
  TrainResult result{initial_model(config, model_config), {}};
  nn::Model<float>& model = result.model;
  Adam<float> adam(model, config.lr);
  Rng rng(derive_seed(config.seed, 200));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  const LossOptions options{config.detach_block_targets};
  nn::Model<float> grads = model.zeros_like();

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    double lb = 0.0, lr = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      Batch batch;
      for (std::size_t k = start; k < std::min(order.size(), start + static_cast<std::size_t>(config.batch_size)); ++k) {
        batch.examples.push_back(&examples[order[k]]);
      }
      grads.encoder.zero();
      grads.decoder.zero();
      const LossReport loss = total_loss(model, batch, &grads, options);
      if (!std::isfinite(loss.total())) throw DivergenceError("loss became non-finite at epoch " + std::to_string(epoch));
      adam.step(model, grads, config.grad_clip);
      lb += loss.block * static_cast<double>(batch.examples.size());
      lr += loss.rxn * static_cast<double>(batch.examples.size());
      seen += batch.examples.size();
    }
    const Accuracy acc = evaluate(model, examples, catalog);
    EpochMetrics m{epoch, lb / static_cast<double>(seen), lr / static_cast<double>(seen), acc.block, acc.reaction};
    result.metrics.push_back(m);
    if (on_epoch) on_epoch(m);
    if (config.stop_accuracy > 0.0 && acc.block >= config.stop_accuracy && acc.reaction >= config.stop_accuracy) break;
  }
  return result;
}

}  // namespace synthphore::train
