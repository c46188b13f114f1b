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

#include "fsds/apps/objectness.hpp"
#include "fsds/apps/part_mask.hpp"
#include "fsds/apps/segments.hpp"
#include "oracles.hpp"

using namespace fsds;
using namespace fsds::apps;

namespace {

SkeletonSegment segment(std::vector<std::pair<int, int>> px, float s, float p = 0.5f) {
  SkeletonSegment seg;
  seg.pixels = std::move(px);
  seg.scales.assign(seg.pixels.size(), s);
  seg.probs.assign(seg.pixels.size(), p);
  return seg;
}

BinaryMask square(int w, int h, int x0, int y0, int side) {
  BinaryMask m(w, h, 0);
  for (int y = y0; y < y0 + side; ++y)
    for (int x = x0; x < x0 + side; ++x) m(x, y) = 1;
  return m;
}

std::vector<SkeletonSegment> segments_of(const BinaryMask& skel) {
  return extract_segments(skel, Raster<float>(skel.width(), skel.height(), 4.0f),
                          Raster<float>(skel.width(), skel.height(), 0.9f));
}

}  // namespace

TEST(Segments, StraightLineIsOneSegment) {
  BinaryMask s(20, 10, 0);
  for (int x = 3; x < 15; ++x) s(x, 5) = 1;
  const auto segs = segments_of(s);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].size(), 12u);
  EXPECT_EQ(segs[0].pixels.front(), (std::pair{3, 5}));
  EXPECT_EQ(segs[0].pixels.back(), (std::pair{14, 5}));
  EXPECT_EQ(segs[0].scales[4], 4.0f);
  EXPECT_EQ(segs[0].probs[4], 0.9f);
}

TEST(Segments, YJunctionGivesThreeBranches) {
  BinaryMask s(21, 21, 0);
  s(10, 10) = 1;
  for (int k = 1; k <= 6; ++k) {
    s(10 - k, 10) = 1;
    s(10 + k, 10 - k) = 1;
    s(10 + k, 10 + k) = 1;
  }
  const auto segs = segments_of(s);
  ASSERT_EQ(segs.size(), 3u);
  for (const auto& g : segs) EXPECT_EQ(g.size(), 6u);
}

TEST(Segments, EmptyAndLoop) {
  EXPECT_TRUE(segments_of(BinaryMask(8, 8, 0)).empty());
  BinaryMask ring(9, 9, 0);
  for (int k = 2; k <= 6; ++k) {
    ring(k, 2) = 1;
    ring(k, 6) = 1;
    ring(2, k) = 1;
    ring(6, k) = 1;
  }
  for (int c : {2, 6})
    for (int d : {2, 6}) ring(c, d) = 0;
  const auto segs = segments_of(ring);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].size(), count_positive(ring));
}

TEST(DiskUnion, LatticeCounts) {
  EXPECT_EQ(count_positive(disk_union(segment({{5, 5}}, 1.0f), 11, 11)), 1u);
  EXPECT_EQ(count_positive(disk_union(segment({{5, 5}}, 5.0f), 11, 11)), 21u);
  EXPECT_EQ(count_positive(disk_union(segment({{5, 5}, {6, 5}}, 5.0f), 13, 11)), 26u);
  EXPECT_EQ(count_positive(disk_union(segment({{0, 0}}, 5.0f), 11, 11)), 8u);
  EXPECT_THROW(disk_union(segment({{1, 1}}, -1.0f), 4, 4), ValidationError);
}

TEST(DiskUnion, MatchesLatticeOracleAndGrowsWithScale) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<float> us(0.0f, 15.0f);
  for (int trial = 0; trial < 20; ++trial) {
    SkeletonSegment seg;
    int x = 10 + static_cast<int>(rng() % 20), y = 10 + static_cast<int>(rng() % 20);
    for (int k = 0; k < 8; ++k) {
      seg.pixels.emplace_back(x, y);
      seg.scales.push_back(us(rng));
      seg.probs.push_back(0.5f);
      x += static_cast<int>(rng() % 3) - 1;
      y += 1;
    }
    const auto m = disk_union(seg, 40, 48);
    EXPECT_EQ(m, oracle::lattice_disks(seg.pixels, seg.scales, 40, 48));
    auto bigger = seg;
    for (float& s : bigger.scales) s += 1.5f;
    const auto mb = disk_union(bigger, 40, 48);
    for (std::size_t j = 0; j < m.size(); ++j) EXPECT_TRUE(!m.data()[j] || mb.data()[j]);
  }
}

TEST(PartMask, ConfidenceIsMeanProbability) {
  auto seg = segment({{1, 1}, {2, 1}}, 3.0f);
  seg.probs = {0.2f, 0.4f};
  EXPECT_NEAR(mask_confidence(seg), 0.3, 1e-7);
  seg.probs = {0.6f, 0.8f};
  const auto pm = reconstruct_part_mask(seg, 6, 6);
  EXPECT_NEAR(pm.confidence, 0.7, 1e-7);
  EXPECT_EQ(pm.mask, disk_union(seg, 6, 6));
  EXPECT_THROW(mask_confidence(SkeletonSegment{}), ValidationError);
}

TEST(PartMask, IouAndHits) {
  const auto a = square(10, 10, 2, 2, 3);
  const auto b = square(10, 10, 3, 2, 3);
  EXPECT_NEAR(iou(a, b), 0.5, 1e-12);
  EXPECT_NEAR(iou(a, a), 1.0, 1e-12);
  EXPECT_EQ(iou(BinaryMask(4, 4, 0), BinaryMask(4, 4, 0)), 0.0);
  EXPECT_EQ(part_hits({{b, 0.9}}, {a}), std::vector<bool>{true});
  const auto c = square(10, 10, 4, 2, 3);
  EXPECT_NEAR(iou(a, c), 0.2, 1e-12);
  EXPECT_EQ(part_hits({{c, 0.9}}, {a}), std::vector<bool>{false});
}

TEST(PartMask, ConfidentPredictionClaimsGroundtruthFirst) {
  const auto g = square(10, 10, 2, 2, 3);
  const auto hits = part_hits({{square(10, 10, 3, 2, 3), 0.3}, {g, 0.9}}, {g});
  EXPECT_EQ(hits, (std::vector<bool>{false, true}));
}

TEST(PartMask, SegEvalCurve) {
  const auto g1 = square(12, 12, 0, 0, 3);
  const auto g2 = square(12, 12, 6, 6, 3);
  const std::vector<PartMask> preds = {{g1, 0.8}, {square(12, 12, 0, 8, 3), 0.6}, {g2, 0.3}};
  const auto c = part_seg_eval(preds, {g1, g2}, {0.25, 0.5, 0.7});
  EXPECT_EQ(c.points[0].counts, (eval::MatchCounts{2, 1, 0}));
  EXPECT_EQ(c.points[1].counts, (eval::MatchCounts{1, 1, 1}));
  EXPECT_EQ(c.points[2].counts, (eval::MatchCounts{1, 0, 1}));
  EXPECT_NEAR(c.best_f, 0.8, 1e-12);
  EXPECT_EQ(c.best_threshold, 0.25);
}

TEST(Objectness, HandExamples) {
  Box b{0, 0, 10, 10, 0.8, {}};
  EXPECT_EQ(objectness_score(b, {square(30, 30, 15, 15, 4)}), 0.0);
  EXPECT_NEAR(objectness_score(b, {square(30, 30, 2, 2, 4)}), 0.8, 1e-6);
  BinaryMask half(30, 30, 0);
  for (int y = 4; y < 6; ++y)
    for (int x = 6; x < 14; ++x) half(x, y) = 1;
  EXPECT_NEAR(objectness_score(b, {half}), 0.4, 1e-6);
  EXPECT_NEAR(objectness_score(b, {square(30, 30, 2, 2, 4), square(30, 30, 20, 20, 4)}), 0.8, 1e-6);
  EXPECT_THROW(objectness_score(b, {}, 0.0), ValidationError);
}

TEST(Objectness, ScoreIsBoundedByDetectorScore) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution bit(0.3);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryMask m(16, 16, 0);
    for (auto& v : m.values()) v = bit(rng) ? 1 : 0;
    const Box b{static_cast<double>(rng() % 8), static_cast<double>(rng() % 8), 6.5, 5.0, 0.7, {}};
    const double s = objectness_score(b, {m});
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 0.7);
  }
}

TEST(Objectness, BoxJsonPassThrough) {
  const auto b = box_from_json(nlohmann::json{{"x", 1}, {"y", 2}, {"w", 3}, {"h", 4}, {"score", 0.5}, {"id", "a"}});
  EXPECT_EQ(b.extra["id"], "a");
  const auto j = to_json(b, 0.25);
  EXPECT_EQ(j["id"], "a");
  EXPECT_EQ(j["rescored"], 0.25);
  EXPECT_EQ(j["w"], 3.0);
  EXPECT_THROW(box_from_json(nlohmann::json{{"x", 1}}), DataFormat);
  EXPECT_THROW(box_from_json(nlohmann::json{{"x", 1}, {"y", 2}, {"w", -3}, {"h", 4}, {"score", 0.5}}), DataFormat);
}
