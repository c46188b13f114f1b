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

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fsds/apps/segments.hpp"
#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/eval/pr_curve.hpp"

namespace fsds::apps {

struct PartMask {
  BinaryMask mask;
  double confidence = 0.0;
};

/// Union of the closed disks of diameter s_j centred on the segment pixels.
inline BinaryMask disk_union(const SkeletonSegment& seg, int width, int height) {
  BinaryMask m(width, height, 0);
  for (std::size_t j = 0; j < seg.size(); ++j) {
    const double s = seg.scales[j];
    if (!(s >= 0.0)) throw ValidationError("segment scales must be >= 0");
    const auto [cx, cy] = seg.pixels[j];
    const int r = static_cast<int>(std::floor(s / 2.0));
    const double s2 = s * s;
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (4.0 * (dx * dx + dy * dy) <= s2 && m.contains(cx + dx, cy + dy)) m(cx + dx, cy + dy) = 1;
  }
  return m;
}

/// Mean skeleton probability over the segment pixels.
inline double mask_confidence(const SkeletonSegment& seg) {
  if (seg.size() == 0) throw ValidationError("mask confidence needs a non-empty segment");
  double s = 0.0;
  for (float p : seg.probs) s += p;
  return s / static_cast<double>(seg.size());
}

inline PartMask reconstruct_part_mask(const SkeletonSegment& seg, int width, int height) {
  return {disk_union(seg, width, height), mask_confidence(seg)};
}

inline double iou(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "iou");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a.data()[i] != 0, y = b.data()[i] != 0;
    inter += x && y;
    uni += x || y;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline constexpr double kHitIoU = 0.4;

/// Per-prediction hit flags: predictions in decreasing confidence order each
/// take the unused groundtruth mask of highest IoU, a hit when IoU > 0.4.
inline std::vector<bool> part_hits(const std::vector<PartMask>& preds, const std::vector<BinaryMask>& gts) {
  std::vector<std::size_t> order(preds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return preds[a].confidence > preds[b].confidence; });
  std::vector<bool> used(gts.size(), false), hit(preds.size(), false);
  for (std::size_t i : order) {
    double best = kHitIoU;
    int pick = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double v = iou(preds[i].mask, gts[g]);
      if (v > best) {
        best = v;
        pick = static_cast<int>(g);
      }
    }
    if (pick >= 0) {
      used[static_cast<std::size_t>(pick)] = true;
      hit[i] = true;
    }
  }
  return hit;
}

struct PartImage {
  std::vector<PartMask> preds;
  std::vector<BinaryMask> gts;
};

/// Precision/recall of hits over a confidence sweep (predictions with confidence > t).
inline eval::PRCurve part_seg_eval(const std::vector<PartImage>& images,
                                   const std::vector<double>& thresholds = eval::default_thresholds()) {
  if (thresholds.empty()) throw ValidationError("part_seg_eval needs at least one threshold");
  std::vector<std::vector<bool>> hits;
  long long total_gt = 0;
  for (const auto& im : images) {
    hits.push_back(part_hits(im.preds, im.gts));
    total_gt += static_cast<long long>(im.gts.size());
  }
  eval::PRCurve curve;
  for (double t : thresholds) {
    eval::MatchCounts c;
    for (std::size_t i = 0; i < images.size(); ++i)
      for (std::size_t p = 0; p < images[i].preds.size(); ++p) {
        if (!(images[i].preds[p].confidence > t)) continue;
        if (hits[i][p]) {
          ++c.tp;
        } else {
          ++c.fp;
        }
      }
    c.fn = total_gt - c.tp;
    curve.points.push_back(eval::pr_point(t, c));
  }
  eval::finish_curve(curve);
  return curve;
}

inline eval::PRCurve part_seg_eval(const std::vector<PartMask>& preds, const std::vector<BinaryMask>& gts,
                                   const std::vector<double>& thresholds = eval::default_thresholds()) {
  return part_seg_eval(std::vector<PartImage>{{preds, gts}}, thresholds);
}

}  // namespace fsds::apps
