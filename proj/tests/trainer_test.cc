// Copyright 2026 The eegpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eegpipe/trainer.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace eegpipe {
namespace {

NetworkSpec TinySpec() {
  NetworkSpec s;
  s.conv_layers = 2;
  s.conv_kernels = 3;
  s.dense_units = 4;
  s.lstm_hidden = 3;
  s.dropout = 0.1;
  return s;
}

// Positive epochs carry a shifted mean in every feature.
struct Toy {
  FeatureTensor features;
  std::vector<double> labels;
};

Toy MakeToy(size_t epochs, int channels, uint64_t seed) {
  std::vector<std::string> names;
  for (int c = 0; c < channels; ++c) names.push_back("C" + std::to_string(c));
  Toy toy{FeatureTensor(epochs, names, static_cast<double>(epochs), 0), {}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> nd;
  for (size_t e = 0; e < epochs; ++e) {
    const double y = (e / 8) % 2 == 1 ? 1.0 : 0.0;
    toy.labels.push_back(y);
    for (int f = 0; f < kFramesPerEpoch; ++f)
      for (int c = 0; c < channels; ++c)
        for (int k = 0; k < kFeatureDim; ++k)
          toy.features.at(e, f, c, k) = nd(rng) + 1.5f * static_cast<float>(y);
  }
  return toy;
}

TEST(AdamStepTest, FirstStepByHand) {
  auto net = Network::Create(TinySpec(), 2);
  ASSERT_TRUE(net.ok());
  Weights w = net->Initialize(1);
  const Weights before = w;
  Parameters g = w.params.ZerosLike();
  g[0].values[0] = 0.5;
  g[0].values[1] = -2.0;
  AdamHyper hyper;
  hyper.learning_rate = 0.01;
  ASSERT_TRUE(AdamStep(w, g, hyper).ok());
  EXPECT_EQ(w.step, 1);
  // Step one: m_hat = g, v_hat = g^2, so the update is lr * g / (|g| + eps).
  for (int i = 0; i < 2; ++i) {
    const double gi = g[0].values[i];
    const double expected =
        before.params[0].values[i] - 0.01 * gi / (std::abs(gi) + 1e-8);
    EXPECT_NEAR(w.params[0].values[i], expected, 1e-15);
  }
  EXPECT_NEAR(w.adam_m[0].values[0], 0.05, 1e-15);
  EXPECT_NEAR(w.adam_v[0].values[1], 0.004, 1e-15);
  // Untouched parameters see zero gradient and do not move.
  EXPECT_EQ(w.params[0].values[2], before.params[0].values[2]);
  EXPECT_EQ(w.params[1].values, before.params[1].values);
}

TEST(AdamStepTest, UpdateIsBoundedByLearningRate) {
  auto net = Network::Create(TinySpec(), 2);
  ASSERT_TRUE(net.ok());
  Weights w = net->Initialize(2);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 100.0);
  AdamHyper hyper;
  for (int step = 0; step < 20; ++step) {
    const Weights prev = w;
    Parameters g = w.params.ZerosLike();
    for (auto& t : g.tensors())
      for (double& v : t.values) v = nd(rng);
    ASSERT_TRUE(AdamStep(w, g, hyper).ok());
    for (size_t t = 0; t < w.params.size(); ++t)
      for (size_t i = 0; i < w.params[t].values.size(); ++i)
        ASSERT_LE(std::abs(w.params[t].values[i] - prev.params[t].values[i]),
                  // (1 - beta1) / sqrt(1 - beta2), rounded up
                  hyper.learning_rate * 3.2);
  }
}

TEST(AdamStepTest, RejectsNonFiniteAndMismatchedGradients) {
  auto net = Network::Create(TinySpec(), 2);
  ASSERT_TRUE(net.ok());
  Weights w = net->Initialize(1);
  Parameters g = w.params.ZerosLike();
  g[3].values[0] = std::nan("");
  auto status = AdamStep(w, g, AdamHyper());
  EXPECT_EQ(status.code(), absl::StatusCode::kInternal);
  EXPECT_EQ(w.step, 0);
  Parameters wrong = Network::Create(TinySpec(), 8)->Layout();
  EXPECT_FALSE(AdamStep(w, wrong, AdamHyper()).ok());
}

TEST(NormalizationTest, StandardisesEachFeature) {
  Toy toy = MakeToy(40, 3, 4);
  std::vector<LabeledFeatures> data = {{&toy.features, toy.labels}};
  const InputNormalization norm = ComputeNormalization(data);
  for (int k = 0; k < kFeatureDim; ++k) {
    double sum = 0.0, sq = 0.0;
    size_t n = 0;
    for (size_t e = 0; e < 40; ++e)
      for (int f = 0; f < kFramesPerEpoch; ++f)
        for (int c = 0; c < 3; ++c) {
          const double z =
              (toy.features.at(e, f, c, k) - norm.mean[k]) * norm.scale[k];
          sum += z;
          sq += z * z;
          ++n;
        }
    EXPECT_NEAR(sum / n, 0.0, 1e-9);
    EXPECT_NEAR(sq / n, 1.0, 1e-6);
  }
}

TEST(TrainTest, LossDecreasesOnSeparableData) {
  Toy toy = MakeToy(96, 2, 1);
  std::vector<LabeledFeatures> data = {{&toy.features, toy.labels}};
  auto net = Network::Create(TinySpec(), 2);
  ASSERT_TRUE(net.ok());
  TrainConfig cfg;
  cfg.passes = 6;
  cfg.segment_epochs = 16;
  cfg.batch_segments = 2;
  cfg.adam.learning_rate = 1e-2;
  auto result = Train(*net, data, cfg);
  ASSERT_TRUE(result.ok()) << result.status();
  ASSERT_EQ(result->pass_losses.size(), 7u);
  EXPECT_EQ(result->step_losses.size(), 6u * 3);
  EXPECT_LT(result->pass_losses.back(), 0.5 * result->pass_losses.front());
  EXPECT_TRUE(result->warnings.empty());
  EXPECT_EQ(result->weights.step, 18);

  auto post = Infer(*net, result->weights, toy.features, 16);
  ASSERT_TRUE(post.ok());
  double sse = 0.0;
  for (size_t e = 0; e < 96; ++e)
    sse += std::pow((*post)[e] - toy.labels[e], 2);
  EXPECT_NEAR(sse / 96, result->pass_losses.back(), 1e-12);
}

TEST(TrainTest, ThreadCountDoesNotChangeCheckpoint) {
  Toy a = MakeToy(40, 2, 1), b = MakeToy(24, 2, 2);
  std::vector<LabeledFeatures> data = {{&a.features, a.labels},
                                       {&b.features, b.labels}};
  auto net = Network::Create(TinySpec(), 2);
  ASSERT_TRUE(net.ok());
  TrainConfig cfg;
  cfg.passes = 2;
  cfg.segment_epochs = 8;
  cfg.batch_segments = 4;
  std::string reference;
  for (int threads : {1, 2, 4}) {
    cfg.threads = threads;
    auto result = Train(*net, data, cfg);
    ASSERT_TRUE(result.ok());
    Checkpoint ck{TinySpec(), {"C0", "C1"}, 0, result->weights};
    if (reference.empty()) {
      reference = ck.Serialize();
    } else {
      EXPECT_EQ(ck.Serialize(), reference) << threads;
    }
  }
  cfg.seed = 2;
  cfg.threads = 1;
  auto other = Train(*net, data, cfg);
  ASSERT_TRUE(other.ok());
  EXPECT_NE(
      (Checkpoint{TinySpec(), {"C0", "C1"}, 0, other->weights}.Serialize()),
      reference);
}

TEST(TrainTest, SingleClassWarns) {
  Toy toy = MakeToy(16, 2, 1);
  std::fill(toy.labels.begin(), toy.labels.end(), 0.0);
  std::vector<LabeledFeatures> data = {{&toy.features, toy.labels}};
  auto net = Network::Create(TinySpec(), 2);
  TrainConfig cfg;
  cfg.passes = 1;
  cfg.segment_epochs = 8;
  auto result = Train(*net, data, cfg);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result->warnings.size(), 1u);
}

TEST(TrainTest, RejectsBadInputs) {
  Toy toy = MakeToy(16, 2, 1);
  auto net = Network::Create(TinySpec(), 2);
  TrainConfig cfg;
  cfg.passes = 1;
  std::vector<LabeledFeatures> short_labels = {
      {&toy.features, std::vector<double>(15, 0.0)}};
  EXPECT_FALSE(Train(*net, short_labels, cfg).ok());
  std::vector<LabeledFeatures> bad_labels = {
      {&toy.features, std::vector<double>(16, 0.5)}};
  EXPECT_FALSE(Train(*net, bad_labels, cfg).ok());
  EXPECT_FALSE(Train(*net, {}, cfg).ok());
  cfg.segment_epochs = 0;
  std::vector<LabeledFeatures> ok = {{&toy.features, toy.labels}};
  EXPECT_FALSE(Train(*net, ok, cfg).ok());
}

TEST(TrainConfigTest, Parse) {
  auto cfg = TrainConfig::Parse("passes=3\nlearning_rate=0.01\n");
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  EXPECT_EQ(cfg->passes, 3);
  EXPECT_EQ(cfg->adam.learning_rate, 0.01);
  EXPECT_FALSE(TrainConfig::Parse("threads=4\n").ok());
  EXPECT_FALSE(TrainConfig::Parse("adam_beta1=1.0\n").ok());
}

}  // namespace
}  // namespace eegpipe
