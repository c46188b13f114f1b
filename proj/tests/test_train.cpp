// Copyright 2026 The fsds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fsds/nn/checkpoint.hpp"
#include "fsds/train/trainer.hpp"

using namespace fsds;
using namespace fsds::train;

namespace {

net::NetworkConfig tiny() {
  net::NetworkConfig c;
  c.stages = {{{2}, 3, true}, {{2}, 3, false}};
  c.taps = {1, 2};
  return c;
}

std::vector<TrainSample> random_samples(int count, int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<TrainSample> out;
  for (int i = 0; i < count; ++i) {
    TrainSample s{GrayImage(w, h), QuantizedScaleMap(w, h)};
    for (float& v : s.image.values()) v = u(rng);
    for (int& v : s.z.values()) v = static_cast<int>(rng() % 3);
    out.push_back(std::move(s));
  }
  return out;
}

template <typename T>
std::string checkpoint_bytes(const net::FsdsModel<T>& m) {
  std::ostringstream s;
  nn::write_checkpoint(s, m.to_checkpoint());
  return s.str();
}

template <typename T>
void zero_parameters(net::FsdsModel<T>& m) {
  for (T* p : m.parameter_pointers()) *p = T{};
}

}  // namespace

TEST(Sgd, MomentumHandExample) {
  net::FsdsModel<double> m(tiny());
  zero_parameters(m);
  auto g = m.zero_grads();
  m.layers()[0].kernels.data()[0] = 1.0;
  g.layers[0].kernels.data()[0] = 1.0;
  auto state = OptimizerState<double>::for_model(m);
  const SgdConfig cfg{0.1, 0.9, 0.0, 5.0};
  sgd_step(m, g, state, cfg);
  EXPECT_NEAR(state.velocity.layers[0].kernels.data()[0], -0.1, 1e-15);
  EXPECT_NEAR(m.layers()[0].kernels.data()[0], 0.9, 1e-15);
  sgd_step(m, g, state, cfg);
  EXPECT_NEAR(state.velocity.layers[0].kernels.data()[0], -0.19, 1e-15);
  EXPECT_NEAR(m.layers()[0].kernels.data()[0], 0.71, 1e-15);
  EXPECT_EQ(state.iteration, 2u);
}

TEST(Sgd, ZeroGradientWithoutDecayIsNoOp) {
  net::FsdsModel<double> m(tiny());
  m.initialize(3);
  const auto before = checkpoint_bytes(m);
  auto state = OptimizerState<double>::for_model(m);
  sgd_step(m, m.zero_grads(), state, {0.1, 0.9, 0.0, 5.0});
  EXPECT_EQ(checkpoint_bytes(m), before);
}

TEST(Sgd, FusionMovesAtItsMultiplier) {
  net::FsdsModel<double> m(tiny());
  zero_parameters(m);
  auto g = m.zero_grads();
  for (double* p : net::FsdsModel<double>::gradient_pointers(g)) *p = 1.0;
  auto state = OptimizerState<double>::for_model(m);
  sgd_step(m, g, state, {0.01, 0.0, 0.0, 5.0});
  EXPECT_NEAR(m.layers()[0].kernels.data()[0], -0.01, 1e-15);
  EXPECT_NEAR(m.fusion().vectors()[0][0], -0.05, 1e-15);
}

TEST(Sgd, DecaySkipsBiasesAndFusion) {
  net::FsdsModel<double> m(tiny());
  for (double* p : m.parameter_pointers()) *p = 1.0;
  auto state = OptimizerState<double>::for_model(m);
  sgd_step(m, m.zero_grads(), state, {0.1, 0.0, 0.5, 5.0});
  const auto& l0 = m.layers()[0];
  EXPECT_NEAR(l0.kernels.data()[0], 0.95, 1e-15);
  EXPECT_EQ(l0.biases[0], 1.0);
  EXPECT_EQ(m.fusion().vectors()[0][0], 1.0);
}

TEST(Sgd, RejectsForeignBuffers) {
  net::FsdsModel<double> a(tiny());
  net::FsdsModel<double> b(net::NetworkConfig::toy());
  auto state = OptimizerState<double>::for_model(a);
  EXPECT_THROW(sgd_step(a, b.zero_grads(), state, {}), ShapeMismatch);
}

TEST(TrainConfig, JsonRoundTripAndValidation) {
  TrainConfig c;
  c.batch_size = 3;
  c.base_lr = 0.01;
  c.augment = true;
  c.precision = net::Precision::kF64;
  EXPECT_EQ(to_json(train_config_from_json(to_json(c))), to_json(c));
  EXPECT_THROW(train_config_from_json(nlohmann::json{{"batchsize", 3}}), DataFormat);
  EXPECT_THROW(train_config_from_json(nlohmann::json{{"batch_size", 0}}), ValidationError);
  EXPECT_THROW(train_config_from_json(nlohmann::json{{"base_lr", -1.0}}), ValidationError);
  const auto partial = train_config_from_json(nlohmann::json{{"seed", 11}}, c);
  EXPECT_EQ(partial.seed, 11u);
  EXPECT_EQ(partial.batch_size, 3);
}

TEST(Train, ZeroIterationsLeavesModelUntouched) {
  net::FsdsModel<float> m(tiny());
  m.initialize(5);
  const auto before = checkpoint_bytes(m);
  TrainConfig cfg;
  cfg.max_iterations = 0;
  EXPECT_TRUE(train::train(m, random_samples(2, 8, 8, 1), cfg).empty());
  EXPECT_EQ(checkpoint_bytes(m), before);
}

TEST(Train, SameSeedSameCheckpoint) {
  const auto data = random_samples(4, 10, 9, 2);
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.base_lr = 0.01;
  cfg.max_iterations = 4;
  cfg.seed = 17;
  cfg.augment = true;
  std::string bytes[2];
  for (auto& b : bytes) {
    net::FsdsModel<float> m(tiny());
    m.initialize(5);
    train::train(m, data, cfg);
    b = checkpoint_bytes(m);
  }
  EXPECT_EQ(bytes[0], bytes[1]);
  cfg.seed = 18;
  net::FsdsModel<float> m(tiny());
  m.initialize(5);
  train::train(m, data, cfg);
  EXPECT_NE(checkpoint_bytes(m), bytes[0]);
}

TEST(Train, SaveLoadSaveIsByteIdentical) {
  net::FsdsModel<float> m(tiny());
  m.initialize(8);
  TrainConfig cfg;
  cfg.batch_size = 1;
  cfg.base_lr = 0.01;
  cfg.max_iterations = 3;
  train::train(m, random_samples(2, 8, 8, 3), cfg);
  const auto a = checkpoint_bytes(m);
  std::istringstream in(a);
  net::FsdsModel<float> n(tiny());
  n.load_checkpoint(nn::read_checkpoint<float>(in));
  EXPECT_EQ(checkpoint_bytes(n), a);
}

TEST(Train, LossFallsOnASingleSample) {
  net::FsdsModel<double> m(tiny());
  m.initialize(9);
  TrainConfig cfg;
  cfg.batch_size = 1;
  cfg.base_lr = 0.05;
  cfg.max_iterations = 60;
  auto data = random_samples(1, 12, 12, 4);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 12; ++x) data[0].z(x, y) = data[0].image(x, y) > 0.5f ? 1 : 0;
  const auto log = train::train(m, data, cfg);
  ASSERT_EQ(log.size(), 60u);
  EXPECT_LT(log.back().total, 0.9 * log.front().total);
}

TEST(Train, HooksFollowCadence) {
  net::FsdsModel<float> m(tiny());
  m.initialize(1);
  TrainConfig cfg;
  cfg.batch_size = 1;
  cfg.max_iterations = 5;
  cfg.checkpoint_every = 2;
  cfg.log_every = 2;
  std::vector<std::uint64_t> saved;
  std::ostringstream log;
  train::train(m, random_samples(1, 8, 8, 5), cfg, {&log, [&](std::uint64_t it) { saved.push_back(it); }});
  EXPECT_EQ(saved, (std::vector<std::uint64_t>{2, 4, 5}));
  const std::string lines = log.str();
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 3);
}

TEST(Train, RejectsOutOfRangeClasses) {
  net::FsdsModel<float> m(tiny());
  auto data = random_samples(1, 8, 8, 6);
  data[0].z(0, 0) = 3;
  TrainConfig cfg;
  cfg.max_iterations = 1;
  EXPECT_THROW(train::train(m, data, cfg), DataFormat);
}
