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

#include <utility>
#include <vector>

#include "fsds/core/raster.hpp"
#include "fsds/geometry/skeleton.hpp"

namespace fsds::apps {

struct SkeletonSegment {
  std::vector<std::pair<int, int>> pixels;  ///< 8-connected in sequence
  std::vector<float> scales;
  std::vector<float> probs;  ///< skeleton probability 1 - Pr(z = 0)

  std::size_t size() const { return pixels.size(); }
};

/// Branches of a thin skeleton. Pixels with three or more skeleton neighbours
/// are junctions; removing them leaves paths, each returned as one segment.
inline std::vector<SkeletonSegment> extract_segments(const BinaryMask& skeleton, const Raster<float>& scales,
                                                     const Raster<float>& response) {
  require_same_shape(skeleton, scales, "extract_segments");
  require_same_shape(skeleton, response, "extract_segments");
  const int w = skeleton.width(), h = skeleton.height();
  BinaryMask branch(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (skeleton(x, y) && geometry::detail::neighbour_count(skeleton, x, y) < 3) branch(x, y) = 1;

  auto degree = [&](int x, int y) { return geometry::detail::neighbour_count(branch, x, y); };
  Raster<uint8_t> used(w, h, 0);
  std::vector<SkeletonSegment> out;
  auto walk = [&](int x, int y) {
    SkeletonSegment seg;
    while (true) {
      used(x, y) = 1;
      seg.pixels.emplace_back(x, y);
      seg.scales.push_back(scales(x, y));
      seg.probs.push_back(response(x, y));
      bool moved = false;
      // 4-neighbours first so diagonal shortcuts do not skip pixels.
      for (int pass = 0; pass < 2 && !moved; ++pass)
        for (int k = pass; k < 8 && !moved; k += 2) {
          const int nx = x + geometry::detail::kNx[static_cast<std::size_t>(k)];
          const int ny = y + geometry::detail::kNy[static_cast<std::size_t>(k)];
          if (branch.at_or(nx, ny, 0) && !used(nx, ny)) {
            x = nx;
            y = ny;
            moved = true;
          }
        }
      if (!moved) break;
    }
    out.push_back(std::move(seg));
  };
  // Open paths from their ends, then whatever remains (closed loops).
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (branch(x, y) && !used(x, y) && degree(x, y) <= 1) walk(x, y);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (branch(x, y) && !used(x, y)) walk(x, y);
  return out;
}

}  // namespace fsds::apps
