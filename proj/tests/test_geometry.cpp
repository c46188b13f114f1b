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

#include "fsds/geometry/augment.hpp"
#include "fsds/geometry/distance_transform.hpp"
#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/geometry/skeleton.hpp"
#include "oracles.hpp"

using namespace fsds;
using namespace fsds::geometry;

namespace {

BinaryMask rectangle_mask(int w, int h, int x0, int y0, int rw, int rh) {
  BinaryMask m(w, h, 0);
  for (int y = y0; y < y0 + rh; ++y)
    for (int x = x0; x < x0 + rw; ++x) m(x, y) = 1;
  return m;
}

BinaryMask disk_mask(int w, int h, int cx, int cy, double r) {
  BinaryMask m(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m(x, y) = std::hypot(x - cx, y - cy) <= r;
  return m;
}

}  // namespace

TEST(Quantize, ZeroScaleIsBackground) { EXPECT_EQ(quantize_scale(0.0, ReceptiveFieldSchedule::vgg16()), 0); }

TEST(Quantize, HandExamples) {
  const auto s = ReceptiveFieldSchedule::vgg16();
  EXPECT_EQ(quantize_scale(10.0, s), 1);
  EXPECT_EQ(quantize_scale(35.0, s), 3);
  EXPECT_THROW(quantize_scale(170.0, s), ScaleOverflow);
}

TEST(Quantize, LenientClampsAndCounts) {
  OverflowCounter c;
  EXPECT_EQ(quantize_scale(170.0, ReceptiveFieldSchedule::vgg16(), OverflowPolicy::kLenient, &c), 4);
  EXPECT_EQ(c.clamped, 1u);
}

TEST(Quantize, MatchesScanOnFineGrid) {
  const auto s = ReceptiveFieldSchedule::vgg16();
  for (double v = 0.0; v < 170.0; v += 0.125) {
    bool overflow = false;
    const int want = oracle::quantize_scan(v, s.fields(), s.lambda(), &overflow);
    if (overflow) {
      EXPECT_THROW(quantize_scale(v, s), ScaleOverflow) << v;
    } else {
      EXPECT_EQ(quantize_scale(v, s), want) << v;
    }
  }
}

TEST(Quantize, MonotoneAndFieldExceedsScale) {
  const auto s = ReceptiveFieldSchedule::vgg16();
  int prev = 0;
  for (double v = 0.1; v < 196.0 / 1.2; v += 0.1) {
    const int z = quantize_scale(v, s);
    EXPECT_GE(z, prev);
    EXPECT_GT(s.field(z), s.lambda() * v);
    prev = z;
  }
}

TEST(Quantize, ScheduleValidation) {
  EXPECT_THROW(ReceptiveFieldSchedule({}), ValidationError);
  EXPECT_THROW(ReceptiveFieldSchedule({14, 14}), ValidationError);
  EXPECT_THROW(ReceptiveFieldSchedule({14, 40}, 1.0), ValidationError);
  EXPECT_THROW(quantize_scale(-1.0, ReceptiveFieldSchedule::vgg16()), ValidationError);
}

TEST(QuantizeMap, SinglePixelAndIndicator) {
  ScaleMap s(5, 4, 0.0f);
  EXPECT_EQ(count_positive(quantize_map(s, ReceptiveFieldSchedule::vgg16())), 0u);
  s(2, 1) = 10.0f;
  const auto z = quantize_map(s, ReceptiveFieldSchedule::vgg16());
  EXPECT_EQ(z(2, 1), 1);
  EXPECT_EQ(count_positive(z), 1u);
  std::mt19937 rng(4);
  std::uniform_real_distribution<float> u(0.0f, 160.0f);
  for (float& v : s.values()) v = rng() % 3 == 0 ? u(rng) : 0.0f;
  EXPECT_EQ(positive_mask(quantize_map(s, ReceptiveFieldSchedule::vgg16())), positive_mask(s));
}

TEST(ScaleAssociatedGt, Truncation) {
  QuantizedScaleMap z(4, 1);
  for (int i = 0; i < 4; ++i) z(i, 0) = i;
  const auto g = make_scale_associated_gt(z, 2);
  EXPECT_EQ(g(0, 0), 0);
  EXPECT_EQ(g(1, 0), 1);
  EXPECT_EQ(g(2, 0), 2);
  EXPECT_EQ(g(3, 0), 0);
  EXPECT_EQ(make_scale_associated_gt(z, 3), z);
  EXPECT_EQ(make_scale_associated_gt(z, 1)(3, 0), 0);
}

TEST(ScaleAssociatedGt, TruncationChain) {
  std::mt19937 rng(2);
  QuantizedScaleMap z(9, 7);
  for (int& v : z.values()) v = static_cast<int>(rng() % 5);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= i; ++j)
      EXPECT_EQ(make_scale_associated_gt(make_scale_associated_gt(z, i), j), make_scale_associated_gt(z, j));
}

TEST(DistanceTransform, MatchesBruteForce) {
  std::mt19937 rng(11);
  for (int t = 0; t < 10; ++t) {
    BinaryMask m(13, 9, 0);
    for (auto& v : m.values()) v = rng() % 4 != 0;
    const auto d = distance_to_background(m);
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x) {
        if (!m(x, y)) {
          EXPECT_EQ(d(x, y), 0.0);
          continue;
        }
        const double want = (oracle::max_disk_diameter(m, x, y) + 1.0) / 2.0;
        EXPECT_NEAR(d(x, y), want, 1e-9);
      }
  }
}

TEST(ScaleMap, EmptyMaskGivesZeroMap) {
  const auto s = compute_scale_map(BinaryMask(12, 10, 0));
  EXPECT_EQ(count_positive(s), 0u);
}

TEST(ScaleMap, RectangleCentreRow) {
  const auto m = rectangle_mask(60, 30, 10, 8, 41, 11);
  const auto s = compute_scale_map(m);
  for (int x = 10 + 6; x < 10 + 41 - 6; ++x) EXPECT_NEAR(s(x, 13), 11.0, 1.0) << x;
}

TEST(ScaleMap, DiskCollapsesToCentre) {
  const auto m = disk_mask(31, 31, 15, 15, 10.0);
  const auto s = compute_scale_map(m);
  EXPECT_LE(count_positive(s), 3u);
  EXPECT_NEAR(s(15, 15), 20.0, 1.0);
}

TEST(ScaleMap, ZeroOutsideForegroundAndThin) {
  BinaryMask m(50, 40, 0);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 50; ++x) {
      const double t = std::clamp(((x - 8) * 30.0 + (y - 8) * 20.0) / (30.0 * 30.0 + 20.0 * 20.0), 0.0, 1.0);
      m(x, y) = std::hypot(x - 8 - 30.0 * t, y - 8 - 20.0 * t) <= 5.0;
    }
  const auto s = compute_scale_map(m);
  for (int y = 0; y + 1 < 40; ++y)
    for (int x = 0; x + 1 < 50; ++x) {
      if (s(x, y) > 0) {
        EXPECT_TRUE(m(x, y));
      }
      EXPECT_FALSE(s(x, y) > 0 && s(x + 1, y) > 0 && s(x, y + 1) > 0 && s(x + 1, y + 1) > 0);
    }
  EXPECT_GT(count_positive(s), 20u);
}

TEST(Augment, DefaultSpecHas36Variants) {
  GrayImage img(6, 5, 0.5f);
  ScaleMap s(6, 5, 0.0f);
  s(2, 2) = 4.0f;
  EXPECT_EQ(AugmentSpec{}.variant_count(), 36u);
  EXPECT_EQ(augment(img, s).size(), 36u);
}

TEST(Augment, IdentityVariant) {
  GrayImage img(7, 4);
  for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = static_cast<float>(i);
  ScaleMap s(7, 4, 0.0f);
  s(3, 1) = 6.0f;
  const auto a = augment_one(img, s, 0, Flip::kNone, 1.0);
  EXPECT_EQ(a.image, img);
  EXPECT_EQ(a.scales, s);
}

TEST(Augment, FourRotationsAreIdentity) {
  Raster<float> r(7, 4);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = static_cast<float>(i) * 0.37f;
  auto t = r;
  for (int k = 0; k < 4; ++k) t = rotate90(t);
  EXPECT_EQ(t, r);
  EXPECT_EQ(rotate(r, 90).width(), 4);
  EXPECT_EQ(flip(flip(r, Flip::kUpDown), Flip::kUpDown), r);
  EXPECT_EQ(flip(flip(r, Flip::kLeftRight), Flip::kLeftRight), r);
}

TEST(Augment, RotationKeepsValues) {
  ScaleMap s(5, 3, 0.0f);
  s(1, 0) = 3.0f;
  const auto r = rotate90(s);
  EXPECT_EQ(count_positive(r), 1u);
  float v = 0.0f;
  for (float x : r.values()) v = std::max(v, x);
  EXPECT_EQ(v, 3.0f);
}

TEST(Augment, ResizeMultipliesScales) {
  ScaleMap s(20, 20, 0.0f);
  s(10, 10) = 10.0f;
  const auto small = resize_scale_map(s, 0.8);
  EXPECT_EQ(small.width(), 16);
  float v = 0.0f;
  for (float x : small.values()) v = std::max(v, x);
  EXPECT_FLOAT_EQ(v, 8.0f);

  std::mt19937 rng(3);
  for (int y = 4; y < 16; ++y) s(y, y) = static_cast<float>(2 + rng() % 9);
  for (double f : {0.8, 1.2}) {
    const auto out = resize_scale_map(s, f);
    for (float x : out.values()) {
      if (!(x > 0.0f)) continue;
      bool found = false;
      for (float y : s.values()) found = found || (y > 0.0f && y * static_cast<float>(f) == x);
      EXPECT_TRUE(found) << x;
    }
  }
}
