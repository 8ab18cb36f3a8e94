//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "synthphore/train/checkpoint.hpp"
#include "synthphore/train/trainer.hpp"
#include "synthphore/util/error.hpp"
#include "test_support.hpp"

namespace synthphore {
namespace {

using nn::Mat;
using nn::RowVec;

template <class S>
bool bit_equal(const Mat<S>& a, const Mat<S>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(S)) == 0;
}

Mat<double> rotation(double a, double b, double c) {
  Eigen::Matrix3d r = (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
                       Eigen::AngleAxisd(c, Eigen::Vector3d::UnitX()))
                          .toRotationMatrix();
  return r;
}

TEST(Attention, CausalMaskIgnoresLaterRows) {
  Rng rng(1);
  nn::MultiHeadAttention<double> mha(8, 2, rng);
  Mat<double> x = Mat<double>::Random(5, 8);
  nn::MultiHeadAttention<double>::Cache c1, c2;
  const Mat<double> y1 = mha.forward(x, x, true, c1);
  x.row(3).setRandom();
  x.row(4).setRandom();
  const Mat<double> y2 = mha.forward(x, x, true, c2);
  EXPECT_TRUE(bit_equal<double>(y1.topRows(3), y2.topRows(3)));
  EXPECT_FALSE(bit_equal<double>(y1.bottomRows(2), y2.bottomRows(2)));
}

TEST(Attention, ZeroProjectionsGiveUniformWeights) {
  Rng rng(2);
  nn::MultiHeadAttention<double> mha(8, 2, rng);
  mha.q.weight.setZero();
  mha.k.weight.setZero();
  if (mha.q.bias.size()) mha.q.bias.setZero();
  if (mha.k.bias.size()) mha.k.bias.setZero();
  const Mat<double> x = Mat<double>::Random(4, 8);
  nn::MultiHeadAttention<double>::Cache c;
  mha.forward(x, x, false, c);
  for (const auto& a : c.attn) {
    for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a.data()[i], 0.25);
  }
}

TEST(Decoder, BlockProjectionIsAffineInFingerprint) {
  Rng rng(3);
  nn::Decoder<double> dec(64, 8, 2, 16, 1, 3, 8, rng);
  const RowVec<double> b = dec.block_proj.bias.row(0);
  EXPECT_TRUE(dec.project_block({}).isApprox(b, 0.0) || dec.project_block({}) == b);
  const RowVec<double> e5 = dec.project_block({5});
  const RowVec<double> expected = dec.block_proj.table.row(5) + b;
  EXPECT_EQ(e5, expected);
}

TEST(Decoder, SelectBlockBreaksTiesBySmallestId) {
  nn::RetrievalIndex<double> index;
  const double s = std::sqrt(1.0 - 0.81);
  index.zprime.resize(3, 2);
  index.zprime << 0.2, std::sqrt(1.0 - 0.04), 0.9, s, 0.9, -s;
  index.ids = {5, 7, 2};
  for (int r = 0; r < 3; ++r) index.norms.push_back(index.zprime.row(r).norm());
  RowVec<double> z(2);
  z << 1.0, 0.0;
  EXPECT_EQ(nn::select_block(z, index), 2);
  EXPECT_THROW(nn::select_block(RowVec<double>(RowVec<double>::Zero(2)), index), ZeroVector);
}

TEST(Decoder, ReactionProbabilitiesAreSoftmaxOfLogits) {
  Rng rng(4);
  nn::Decoder<double> dec(64, 8, 2, 16, 1, 3, 8, rng);
  dec.rxn_head.weight.setZero();
  dec.rxn_head.bias << 2.0, 0.0, 0.0;
  const auto p = nn::predict_reaction(dec, RowVec<double>(RowVec<double>::Ones(8)), RowVec<double>(RowVec<double>::Ones(8)));
  ASSERT_EQ(p.size(), 3u);
  // e^2 / (e^2 + 2) and 1 / (e^2 + 2).
  EXPECT_NEAR(p[0], 0.78698604, 1e-8);
  EXPECT_NEAR(p[1], 0.10650698, 1e-8);
  EXPECT_NEAR(p[2], 0.10650698, 1e-8);
}

TEST(Losses, HandValues) {
  Mat<double> a(1, 2), b(1, 2);
  a << 1, 0;
  b << 0, 3;
  EXPECT_DOUBLE_EQ(train::block_loss(a, b), 1.0);
  EXPECT_NEAR(train::block_loss(a, a), 0.0, 1e-15);
  EXPECT_NEAR(train::rxn_loss(Mat<double>::Zero(1, 20), {7}), 2.99573227, 1e-8);  // ln 20
  Mat<double> logits(1, 3);
  logits << 2, 0, 0;
  EXPECT_NEAR(train::rxn_loss(logits, {1}), 2.2395447662, 1e-9);  // ln(e^2 + 2)
}

template <class S>
double equivariance_error(std::uint64_t seed, int points) {
  nn::Model<S> model(testing::tiny_config(), seed);
  Rng rng(seed + 17);
  Mat<S> f = Mat<S>::Zero(points, 6);
  for (int i = 0; i < points; ++i) f(i, static_cast<Eigen::Index>(uniform_index(rng, 6))) = 1;
  Mat<S> x(points, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = static_cast<S>(uniform(rng, -3.0, 3.0));
  const Mat<S> R = rotation(uniform(rng, 0, 6.3), uniform(rng, 0, 6.3), uniform(rng, 0, 6.3)).cast<S>();
  RowVec<S> t(3);
  for (int k = 0; k < 3; ++k) t(k) = static_cast<S>(uniform(rng, -5, 5));
  const auto a = model.encoder.forward(f, x);
  const Mat<S> xt = (x * R.transpose()).rowwise() + t;
  const auto b = model.encoder.forward(f, xt);
  const Mat<S> expect_x = (a.x * R.transpose()).rowwise() + t;
  const double dh = static_cast<double>((a.h - b.h).cwiseAbs().maxCoeff()) / std::max(1.0, static_cast<double>(a.h.cwiseAbs().maxCoeff()));
  const double dx = static_cast<double>((expect_x - b.x).cwiseAbs().maxCoeff()) / std::max(1.0, static_cast<double>(expect_x.cwiseAbs().maxCoeff()));
  return std::max(dh, dx);
}

TEST(Encoder, EquivariantUnderRigidMotion) {
  for (int p = 2; p <= 6; ++p) {
    EXPECT_LT(equivariance_error<double>(static_cast<std::uint64_t>(p), p), 1e-10);
    EXPECT_LT(equivariance_error<float>(static_cast<std::uint64_t>(p), p), 1e-5);
  }
}

std::vector<train::Example> few_examples(std::size_t n) {
  synth::DatasetOptions o;
  o.n = n;
  o.seed = 11;
  const auto triples = synth::make_dataset(testing::desk_catalog(), testing::desk_templates(), o);
  return train::make_examples(triples, testing::desk_catalog());
}

TEST(Gradients, MatchCentralDifferences) {
  const auto ex = few_examples(2);
  nn::Model<double> model(testing::tiny_config(), 5);
  train::Batch batch;
  for (const auto& e : ex) batch.examples.push_back(&e);
  {
    // Finite differences see the full objective, so targets are not detached here.
    train::LossOptions lo;
    lo.detach_block_targets = false;
    auto grads = model.zeros_like();
    train::total_loss(model, batch, &grads, lo);
    auto params = model.tensors();
    auto gs = grads.tensors();
    Rng rng(9);
    for (std::size_t i = 0; i < params.size(); ++i) {
      for (int k = 0; k < 2; ++k) {
        const auto idx = uniform_index(rng, static_cast<std::size_t>(params[i].second->size()));
        double& p = params[i].second->data()[idx];
        const double saved = p;
        const double h = 1e-5;
        p = saved + h;
        const double lp = train::total_loss(model, batch, nullptr, lo).total();
        p = saved - h;
        const double lm = train::total_loss(model, batch, nullptr, lo).total();
        p = saved;
        const double numeric = (lp - lm) / (2 * h);
        const double analytic = gs[i].second->data()[idx];
        const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
        EXPECT_LT(std::abs(numeric - analytic) / denom, 1e-4) << params[i].first;
      }
    }
  }
}

TEST(Training, DeterministicAndZeroEpochsIsInitial) {
  const auto ex = few_examples(4);
  train::TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 2;
  tc.seed = 3;
  const auto cfg = testing::tiny_config();
  const auto a = train::train(ex, testing::desk_catalog(), tc, cfg);
  const auto b = train::train(ex, testing::desk_catalog(), tc, cfg);
  const auto ta = a.model.tensors();
  const auto tb = b.model.tensors();
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) EXPECT_TRUE(bit_equal<float>(*ta[i].second, *tb[i].second));
  ASSERT_EQ(a.metrics.size(), 2u);
  EXPECT_EQ(a.metrics[1].block_loss, b.metrics[1].block_loss);

  tc.epochs = 0;
  const auto z = train::train(ex, testing::desk_catalog(), tc, cfg);
  const auto init = train::initial_model(tc, cfg);
  const auto tz = z.model.tensors();
  const auto ti = init.tensors();
  for (std::size_t i = 0; i < tz.size(); ++i) EXPECT_TRUE(bit_equal<float>(*tz[i].second, *ti[i].second));
}

train::Checkpoint tiny_checkpoint() {
  return {train::kCheckpointVersion, train::TrainConfig{}, testing::desk_catalog().digest(),
          testing::desk_templates().digest(), nn::Model<float>(testing::tiny_config(), 8)};
}

TEST(Checkpoint, RoundTripIsExact) {
  const auto ckpt = tiny_checkpoint();
  const std::string bytes = train::serialize(ckpt);
  const auto back = train::deserialize(bytes);
  EXPECT_EQ(train::serialize(back), bytes);
  EXPECT_EQ(back.catalog_hash, ckpt.catalog_hash);
  EXPECT_TRUE(train::verify_checkpoint(ckpt, few_examples(2)));
}

TEST(Checkpoint, CorruptionAndVersionAreDetected) {
  auto ckpt = tiny_checkpoint();
  std::string bytes = train::serialize(ckpt);
  bytes[bytes.size() / 2] ^= 0x40;
  EXPECT_THROW(train::deserialize(bytes), ChecksumError);
  EXPECT_THROW(train::deserialize("garbage"), ChecksumError);
  ckpt.version = 2;
  EXPECT_THROW(train::deserialize(train::serialize(ckpt)), UnsupportedVersion);
}

TEST(Checkpoint, CatalogMismatchIsRejected) {
  auto ckpt = tiny_checkpoint();
  ckpt.catalog_hash ^= 1;
  EXPECT_THROW(train::check_catalog(ckpt, testing::desk_catalog()), CatalogMismatch);
}

}  // namespace
}  // namespace synthphore
