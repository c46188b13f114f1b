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
#include <random>

#include "fsds/infer/nms.hpp"
#include "fsds/infer/predict.hpp"

using namespace fsds;
using namespace fsds::infer;

namespace {

nn::Tensor<double> probs(std::vector<double> p) {
  nn::Tensor<double> t({1, static_cast<int>(p.size()), 1, 1});
  for (std::size_t k = 0; k < p.size(); ++k) t(0, static_cast<int>(k), 0, 0) = p[k];
  return t;
}

Raster<float> random_response(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  Raster<float> r(w, h);
  for (float& v : r.values()) v = u(rng);
  return r;
}

}  // namespace

TEST(Response, OneMinusBackground) {
  EXPECT_NEAR(skeleton_response(probs({0.3, 0.7}))(0, 0), 0.7f, 1e-7);
  EXPECT_NEAR(skeleton_response(probs({0.3, 0.2, 0.5}))(0, 0), 0.7f, 1e-7);
  EXPECT_THROW(skeleton_response(probs({1.0})), ShapeMismatch);
}

TEST(ScalePrediction, ExpectedField) {
  const auto sched = geometry::ReceptiveFieldSchedule({14, 40, 92});
  EXPECT_NEAR(scale_from_probs(probs({0, 0, 1, 0}), sched)(0, 0), 40.0f, 1e-5);
  EXPECT_NEAR(scale_from_probs(probs({0.1, 0.5, 0.3, 0.1}), sched)(0, 0), 28.2f, 1e-5);
  EXPECT_NEAR(scale_from_probs(probs({1, 0, 0, 0}), sched)(0, 0), 0.0f, 0.0);
  EXPECT_THROW(scale_from_probs(probs({0.5, 0.5}), sched), ShapeMismatch);
}

TEST(Predict, UntrainedModelShapes) {
  net::FsdsModel<float> m(net::NetworkConfig::toy());
  m.initialize(2);
  const auto p = predict(m, GrayImage(19, 13, 0.5f));
  EXPECT_EQ(p.response.width(), 19);
  EXPECT_EQ(p.response.height(), 13);
  EXPECT_EQ(p.scales.width(), 19);
  // Uniform stage probabilities 1/(i+1) and fusion weights 1/n, then softmax.
  const double f[4] = {(1.0 / 2 + 1.0 / 3 + 1.0 / 4) / 3, (1.0 / 2 + 1.0 / 3 + 1.0 / 4) / 3, (1.0 / 3 + 1.0 / 4) / 2,
                       1.0 / 4};
  double z = 0.0;
  for (double v : f) z += std::exp(v);
  for (float v : p.response.values()) EXPECT_NEAR(v, 1.0 - std::exp(f[0]) / z, 1e-6);
  auto cfg = net::NetworkConfig::toy();
  cfg.supervision = net::Supervision::kBinary;
  net::FsdsModel<float> b(cfg);
  b.initialize(2);
  const auto q = predict(b, GrayImage(8, 8, 0.5f));
  EXPECT_TRUE(q.scales.empty());
  EXPECT_NEAR(q.response(3, 3), 0.5f, 1e-6);
}

TEST(Threshold, StrictAndMonotone) {
  std::mt19937_64 rng(1);
  const auto r = random_response(20, 20, rng);
  EXPECT_EQ(threshold(r, 1.0).values()[0], 0);
  std::size_t prev = r.size() + 1;
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    const auto n = count_positive(threshold(r, t));
    EXPECT_LE(n, prev);
    prev = n;
  }
  Raster<float> half(1, 1, 0.5f);
  EXPECT_EQ(threshold(half, 0.5)(0, 0), 0);
  EXPECT_THROW(threshold(r, 1.5), ValidationError);
}

TEST(Nms, BandKeepsCentreRow) {
  Raster<float> r(24, 15, 0.0f);
  for (int x = 0; x < 24; ++x) {
    r(x, 6) = 0.5f;
    r(x, 7) = 1.0f;
    r(x, 8) = 0.5f;
  }
  const auto t = nms_thin(r);
  for (int y = 0; y < 15; ++y)
    for (int x = 0; x < 24; ++x) EXPECT_EQ(t(x, y), y == 7 ? 1.0f : 0.0f) << x << "," << y;
}

TEST(Nms, VerticalAndDiagonalRidges) {
  Raster<float> v(15, 20, 0.0f);
  for (int y = 0; y < 20; ++y) {
    v(4, y) = 0.3f;
    v(5, y) = 0.9f;
    v(6, y) = 0.3f;
  }
  const auto tv = nms_thin(v);
  for (int y = 0; y < 20; ++y) {
    EXPECT_EQ(tv(5, y), 0.9f);
    EXPECT_EQ(tv(4, y), 0.0f);
    EXPECT_EQ(tv(6, y), 0.0f);
  }
  Raster<float> d(20, 20, 0.0f);
  for (int i = 0; i < 20; ++i) {
    d(i, i) = 1.0f;
    if (i + 1 < 20 && i > 0) {
      d(i + 1, i - 1) = 0.4f;
      d(i - 1, i + 1) = 0.4f;
    }
  }
  const auto td = nms_thin(d);
  for (int i = 2; i < 18; ++i) {
    EXPECT_EQ(td(i, i), 1.0f);
    EXPECT_EQ(td(i + 1, i - 1), 0.0f);
    EXPECT_EQ(td(i - 1, i + 1), 0.0f);
  }
}

TEST(Nms, ThinRidgeSurvives) {
  Raster<float> r(16, 9, 0.0f);
  for (int x = 0; x < 16; ++x) r(x, 4) = 0.8f;
  EXPECT_EQ(nms_thin(r), r);
}

TEST(Nms, ZeroStaysZero) {
  Raster<float> r(10, 7, 0.0f);
  EXPECT_EQ(nms_thin(r), r);
}

TEST(Nms, IdempotentAndSubsetOfInput) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_response(17, 13, rng);
    const auto once = nms_thin(r);
    EXPECT_EQ(nms_thin(once), once);
    for (std::size_t j = 0; j < r.size(); ++j) EXPECT_TRUE(once.data()[j] == 0.0f || once.data()[j] == r.data()[j]);
    EXPECT_GT(count_positive(once), 0u);
  }
}
