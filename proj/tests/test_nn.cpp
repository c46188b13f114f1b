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

#include <random>
#include <sstream>

#include "fsds/nn/activation.hpp"
#include "fsds/nn/channels.hpp"
#include "fsds/nn/checkpoint.hpp"
#include "fsds/nn/conv2d.hpp"
#include "fsds/nn/pooling.hpp"
#include "fsds/nn/upsample.hpp"
#include "oracles.hpp"

using namespace fsds;
using namespace fsds::nn;

namespace {

template <typename T>
Tensor<T> random_tensor(Shape s, std::mt19937_64& rng, double scale = 1.0) {
  Tensor<T> t(s);
  std::normal_distribution<double> d(0.0, scale);
  for (T& v : t.values()) v = static_cast<T>(d(rng));
  return t;
}

LayerParams<double> random_params(int out, int in, int k, std::mt19937_64& rng) {
  LayerParams<double> p(out, in, k);
  p.kernels = random_tensor<double>(p.kernels.shape(), rng);
  std::normal_distribution<double> d(0.0, 1.0);
  for (double& b : p.biases) b = d(rng);
  return p;
}

}  // namespace

TEST(Conv, IdentityOneByOne) {
  std::mt19937_64 rng(1);
  const auto x = random_tensor<double>({2, 3, 5, 4}, rng);
  LayerParams<double> p(3, 3, 1);
  for (int c = 0; c < 3; ++c) p.kernels(c, c, 0, 0) = 1.0;
  EXPECT_EQ(conv2d_forward(x, p, ConvGeometry{1, 0}), x);
}

TEST(Conv, ImpulseGivesPlateau) {
  Tensor<double> x({1, 1, 7, 7});
  x(0, 0, 3, 3) = 1.0;
  LayerParams<double> p(1, 1, 3);
  p.kernels.fill(1.0);
  const auto y = conv2d_forward(x, p, ConvGeometry::same(3));
  for (int yy = 0; yy < 7; ++yy)
    for (int xx = 0; xx < 7; ++xx)
      EXPECT_EQ(y(0, 0, yy, xx), (std::abs(yy - 3) <= 1 && std::abs(xx - 3) <= 1) ? 1.0 : 0.0);
}

TEST(Conv, MatchesNestedLoops) {
  std::mt19937_64 rng(2);
  for (int k : {1, 3, 5}) {
    const auto x = random_tensor<double>({2, 3, 5, 5}, rng);
    const auto p = random_params(4, 3, k, rng);
    const auto y = conv2d_forward(x, p, ConvGeometry::same(k));
    const auto want = oracle::conv_naive(x, p, (k - 1) / 2);
    ASSERT_EQ(y.shape(), want.shape());
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y.data()[i], want.data()[i], 1e-12);
  }
}

TEST(Conv, ChannelMismatchThrows) {
  Tensor<double> x({1, 2, 4, 4});
  LayerParams<double> p(1, 3, 3);
  EXPECT_THROW(conv2d_forward(x, p, ConvGeometry::same(3)), ShapeMismatch);
}

TEST(Conv, ZeroGradOutGivesZeroGrads) {
  std::mt19937_64 rng(3);
  const auto x = random_tensor<double>({1, 2, 6, 5}, rng);
  const auto p = random_params(3, 2, 3, rng);
  const auto g = conv2d_backward(Tensor<double>({1, 3, 6, 5}), x, p, ConvGeometry::same(3));
  for (double v : g.input.values()) EXPECT_EQ(v, 0.0);
  for (double v : g.params.kernels.values()) EXPECT_EQ(v, 0.0);
  for (double v : g.params.biases) EXPECT_EQ(v, 0.0);
}

TEST(Conv, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  for (int k : {1, 3}) {
    auto x = random_tensor<double>({2, 2, 5, 6}, rng);
    auto p = random_params(3, 2, k, rng);
    const auto geom = ConvGeometry::same(k);
    const auto w = random_tensor<double>({2, 3, 5, 6}, rng);
    auto objective = [&] { return dot(conv2d_forward(x, p, geom), w); };
    const auto g = conv2d_backward(w, x, p, geom);
    const double h = 1e-5;
    for (std::size_t i = 0; i < p.parameter_count(); ++i) {
      double& v = p.flat(i);
      const double o = v;
      v = o + h;
      const double a = objective();
      v = o - h;
      const double b = objective();
      v = o;
      auto gp = g.params;
      EXPECT_LT(oracle::rel_err(gp.flat(i), (a - b) / (2 * h), 1e-3), 1e-6);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      double& v = x.data()[i];
      const double o = v;
      v = o + h;
      const double a = objective();
      v = o - h;
      const double b = objective();
      v = o;
      EXPECT_LT(oracle::rel_err(g.input.data()[i], (a - b) / (2 * h), 1e-3), 1e-6);
    }
  }
}

TEST(Conv, BackwardIsLinearInGradOut) {
  std::mt19937_64 rng(5);
  const auto x = random_tensor<double>({1, 2, 4, 4}, rng);
  const auto p = random_params(2, 2, 3, rng);
  const auto g1 = random_tensor<double>({1, 2, 4, 4}, rng);
  const auto g2 = random_tensor<double>({1, 2, 4, 4}, rng);
  auto sum = g1;
  sum += g2;
  const auto a = conv2d_backward(sum, x, p, ConvGeometry::same(3));
  const auto b1 = conv2d_backward(g1, x, p, ConvGeometry::same(3));
  const auto b2 = conv2d_backward(g2, x, p, ConvGeometry::same(3));
  for (std::size_t i = 0; i < a.input.size(); ++i)
    EXPECT_NEAR(a.input.data()[i], b1.input.data()[i] + b2.input.data()[i], 1e-12);
  for (std::size_t i = 0; i < a.params.kernels.size(); ++i)
    EXPECT_NEAR(a.params.kernels.data()[i], b1.params.kernels.data()[i] + b2.params.kernels.data()[i], 1e-12);
}

TEST(Relu, ForwardAndBackward) {
  Tensor<double> x({1, 1, 1, 4});
  x(0, 0, 0, 0) = -1.0;
  x(0, 0, 0, 1) = 2.0;
  x(0, 0, 0, 2) = 0.0;
  x(0, 0, 0, 3) = 3.0;
  const auto y = relu_forward(x);
  EXPECT_EQ(y(0, 0, 0, 0), 0.0);
  EXPECT_EQ(y(0, 0, 0, 1), 2.0);
  Tensor<double> g({1, 1, 1, 4});
  g.fill(1.0);
  const auto d = relu_backward(g, y);
  EXPECT_EQ(d(0, 0, 0, 0), 0.0);
  EXPECT_EQ(d(0, 0, 0, 1), 1.0);
  EXPECT_EQ(d(0, 0, 0, 2), 0.0);
}

TEST(Pool, ConstantInput) {
  Tensor<double> x({1, 2, 4, 6});
  x.fill(2.5);
  const auto r = maxpool2_forward(x);
  EXPECT_EQ(r.output.shape(), (Shape{1, 2, 2, 3}));
  for (double v : r.output.values()) EXPECT_EQ(v, 2.5);
}

TEST(Pool, IncreasingRasterPicksBottomRight) {
  Tensor<double> x({1, 1, 4, 4});
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = static_cast<double>(i);
  const auto r = maxpool2_forward(x);
  EXPECT_EQ(r.output(0, 0, 0, 0), 5.0);
  EXPECT_EQ(r.output(0, 0, 1, 1), 15.0);
}

TEST(Pool, MatchesLoopOracleAndOddSizes) {
  std::mt19937_64 rng(6);
  for (auto s : {Shape{2, 3, 6, 8}, Shape{1, 2, 5, 7}}) {
    const auto x = random_tensor<double>(s, rng);
    const auto r = maxpool2_forward(x);
    ASSERT_EQ(r.output.h(), (s.h + 1) / 2);
    ASSERT_EQ(r.output.w(), (s.w + 1) / 2);
    for (int n = 0; n < s.n; ++n)
      for (int c = 0; c < s.c; ++c)
        for (int y = 0; y < r.output.h(); ++y)
          for (int xx = 0; xx < r.output.w(); ++xx) {
            // Replication padding: clamp the window into the image.
            double m = -1e300;
            for (int dy = 0; dy < 2; ++dy)
              for (int dx = 0; dx < 2; ++dx)
                m = std::max(m, x(n, c, std::min(2 * y + dy, s.h - 1), std::min(2 * xx + dx, s.w - 1)));
            EXPECT_EQ(r.output(n, c, y, xx), m);
          }
  }
}

TEST(Pool, BackwardRoutesToArgmax) {
  std::mt19937_64 rng(7);
  auto x = random_tensor<double>({1, 2, 5, 6}, rng);
  const auto r = maxpool2_forward(x);
  const auto w = random_tensor<double>(r.output.shape(), rng);
  const auto g = maxpool2_backward(w, r);
  const double h = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double o = x.data()[i];
    x.data()[i] = o + h;
    const double a = dot(maxpool2_forward(x).output, w);
    x.data()[i] = o - h;
    const double b = dot(maxpool2_forward(x).output, w);
    x.data()[i] = o;
    EXPECT_NEAR(g.data()[i], (a - b) / (2 * h), 1e-6);
  }
}

TEST(Upsample, IdentityAndConstant) {
  std::mt19937_64 rng(8);
  const auto x = random_tensor<double>({1, 2, 3, 5}, rng);
  EXPECT_EQ(upsample_bilinear(x, 3, 5), x);
  Tensor<double> c({1, 1, 3, 4});
  c.fill(0.75);
  const auto up = upsample_bilinear(c, 13, 17);
  for (double v : up.values()) EXPECT_NEAR(v, 0.75, 1e-15);
}

TEST(Upsample, AdjointIdentity) {
  std::mt19937_64 rng(9);
  for (auto [h, w, H, W] : {std::array{2, 3, 16, 16}, std::array{4, 4, 16, 16}, std::array{3, 5, 13, 29}}) {
    const auto x = random_tensor<double>({2, 3, h, w}, rng);
    const auto y = random_tensor<double>({2, 3, H, W}, rng);
    const double lhs = dot(upsample_bilinear(x, H, W), y);
    const double rhs = dot(x, upsample_bilinear_backward(y, x.shape()));
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Channels, SliceConcatRoundTrip) {
  std::mt19937_64 rng(10);
  const auto t = random_tensor<double>({2, 5, 3, 4}, rng);
  EXPECT_EQ(slice_channels(t, 0, 5), t);
  const auto parts = std::vector{slice_channels(t, 0, 1), slice_channels(t, 1, 2), slice_channels(t, 3, 2)};
  EXPECT_EQ(concat_channels(parts), t);
  EXPECT_THROW(slice_channels(t, 4, 2), ShapeMismatch);
  EXPECT_THROW(concat_channels(std::vector{t, random_tensor<double>({2, 1, 3, 5}, rng)}), ShapeMismatch);
}

TEST(Checkpoint, RoundTripIsByteIdentical) {
  std::vector<CheckpointEntry<float>> e = {{"a.weight", {2, 1, 1, 3}, {1, 2, 3, 4, 5, 6}}, {"a.bias", {2}, {0.5f, -1}}};
  std::stringstream s1;
  write_checkpoint(s1, e);
  const auto back = read_checkpoint<float>(s1);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].values, e[0].values);
  EXPECT_EQ(back[1].dims, e[1].dims);
  std::stringstream s2;
  write_checkpoint(s2, back);
  EXPECT_EQ(s1.str(), s2.str());
}

TEST(Checkpoint, RejectsBadMagicAndTruncation) {
  std::stringstream bad("NOTACKPTxxxxxxxxxxxxxxxx");
  EXPECT_THROW(read_checkpoint<float>(bad), DataFormat);
  std::vector<CheckpointEntry<double>> e = {{"x", {3}, {1, 2, 3}}};
  std::stringstream s;
  write_checkpoint(s, e);
  std::string str = s.str();
  std::stringstream cut(str.substr(0, str.size() - 4));
  EXPECT_THROW(read_checkpoint<double>(cut), fsds::Error);
}

TEST(LayerParams, Validation) {
  EXPECT_THROW(LayerParams<float>(1, 1, 2), ValidationError);
  EXPECT_THROW(LayerParams<float>(1, 1, 3, 0.0), ValidationError);
}

TEST(Tensor, DeterministicInitAcrossRuns) {
  LayerParams<float> a(4, 3, 3), b(4, 3, 3);
  std::mt19937_64 r1(42), r2(42);
  he_init(a, r1);
  he_init(b, r2);
  EXPECT_EQ(a.kernels, b.kernels);
}
