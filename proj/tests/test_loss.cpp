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

#include <cmath>
#include <numeric>
#include <random>

#include "fsds/loss/class_weights.hpp"
#include "fsds/loss/softmax.hpp"
#include "fsds/loss/weighted_softmax_loss.hpp"
#include "oracles.hpp"

using namespace fsds;
using namespace fsds::loss;

TEST(ClassWeights, HandExample) {
  QuantizedScaleMap z(100, 1, 0);
  for (int i = 90; i < 99; ++i) z(i, 0) = 1;
  z(99, 0) = 2;
  const auto b = class_weights(z, 3);
  EXPECT_NEAR(b[0], 0.009901, 1e-6);
  EXPECT_NEAR(b[1], 0.099010, 1e-6);
  EXPECT_NEAR(b[2], 0.891089, 1e-6);
  EXPECT_EQ(b.counts[1], 9u);
}

TEST(ClassWeights, AbsentClassesGetZeroAndSumToOne) {
  QuantizedScaleMap z(10, 1, 0);
  z(3, 0) = 2;
  const auto b = class_weights(z, 4);
  EXPECT_EQ(b[1], 0.0);
  EXPECT_EQ(b[3], 0.0);
  EXPECT_NEAR(b[0] + b[2], 1.0, 1e-12);
  EXPECT_THROW(class_weights(z, 2), ClassOutOfRange);
}

TEST(ClassWeights, ImpliedCountFromMaximum) { EXPECT_EQ(class_weights(QuantizedScaleMap(3, 3, 2)).classes(), 3); }

TEST(Softmax, ClosedForm) {
  const std::vector<double> a = {0.0, std::log(2.0)};
  const auto p = softmax<double>(a);
  EXPECT_NEAR(p[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 2.0 / 3.0, 1e-15);
}

TEST(Softmax, LargeActivationsStayFinite) {
  const std::vector<double> a = {1000.0, 1001.0, -1000.0};
  const auto p = softmax<double>(a);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(p[2]));
}

TEST(Softmax, ChannelBackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 1.0);
  nn::Tensor<double> a({1, 4, 2, 3}), g({1, 4, 2, 3});
  for (double& v : a.values()) v = d(rng);
  for (double& v : g.values()) v = d(rng);
  const auto p = softmax_channels(a);
  const auto grad = softmax_channels_backward(p, g);
  const double h = 1e-5;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double o = a.data()[i];
    a.data()[i] = o + h;
    const double up = nn::dot(softmax_channels(a), g);
    a.data()[i] = o - h;
    const double dn = nn::dot(softmax_channels(a), g);
    a.data()[i] = o;
    EXPECT_LT(oracle::rel_err(grad.data()[i], (up - dn) / (2 * h)), 1e-6);
  }
}

TEST(SideLoss, UniformTwoPixels) {
  nn::Tensor<double> p({1, 2, 1, 2});
  p.fill(0.5);
  QuantizedScaleMap z(2, 1);
  z(1, 0) = 1;
  ClassWeights b;
  b.beta = {0.5, 0.5};
  EXPECT_NEAR(side_loss(p, z, b), 0.5 * std::log(2.0), 1e-12);
}

TEST(SideLoss, SinglePixelGradient) {
  nn::Tensor<double> p({1, 2, 1, 1});
  p.fill(0.5);
  QuantizedScaleMap z(1, 1, 1);
  ClassWeights b;
  b.beta = {0.5, 0.5};
  const auto g = side_loss_gradient(p, z, b);
  EXPECT_NEAR(g(0, 0, 0, 0), 0.25, 1e-15);
  EXPECT_NEAR(g(0, 1, 0, 0), -0.25, 1e-15);
}

TEST(SideLoss, ClassOutOfRange) {
  nn::Tensor<double> p({1, 2, 1, 1});
  p.fill(0.5);
  QuantizedScaleMap z(1, 1, 2);
  ClassWeights b;
  b.beta = {0.5, 0.5};
  EXPECT_THROW(side_loss(p, z, b), ClassOutOfRange);
}

TEST(SideLoss, GradientMatchesFiniteDifferencesThroughSoftmax) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int c = 2 + trial % 3;
    nn::Tensor<double> a({1, c, 4, 5});
    for (double& v : a.values()) v = d(rng);
    QuantizedScaleMap z(5, 4);
    for (int& v : z.values()) v = static_cast<int>(rng() % static_cast<unsigned>(c));
    const auto beta = class_weights(z, c);
    const auto g = side_loss_gradient(softmax_channels(a), z, beta);
    const double h = 1e-5;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double o = a.data()[i];
      a.data()[i] = o + h;
      const double up = side_loss(softmax_channels(a), z, beta);
      a.data()[i] = o - h;
      const double dn = side_loss(softmax_channels(a), z, beta);
      a.data()[i] = o;
      EXPECT_LT(oracle::rel_err(g.data()[i], (up - dn) / (2 * h)), 1e-6);
    }
  }
}

TEST(FusionLoss, EqualsSideLossOfSoftmax) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d(0.0, 1.0);
  nn::Tensor<double> f({1, 3, 3, 3});
  for (double& v : f.values()) v = d(rng);
  QuantizedScaleMap z(3, 3);
  for (int& v : z.values()) v = static_cast<int>(rng() % 3);
  const auto beta = class_weights(z, 3);
  const auto r = fusion_loss(f, z, beta);
  EXPECT_DOUBLE_EQ(r.value, side_loss(softmax_channels(f), z, beta));
}

TEST(Objective, TotalIsSumOfParts) {
  const auto v = total_objective({0.5, 0.25, 0.125}, 1.0);
  EXPECT_DOUBLE_EQ(v.total, 1.875);
}
