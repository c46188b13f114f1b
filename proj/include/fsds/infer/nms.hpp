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

#include <cmath>
#include <numbers>

#include "fsds/core/raster.hpp"

namespace fsds::infer {

namespace detail {

inline Raster<double> box3(const Raster<float>& r) {
  Raster<double> out(r.width(), r.height(), 0.0);
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x) {
      double s = 0.0;
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (r.contains(x + dx, y + dy)) {
            s += r(x + dx, y + dy);
            ++n;
          }
      out(x, y) = s / n;
    }
  return out;
}

/// Offsets of the quantized ridge normal: 0, 45, 90 and 135 degrees.
inline constexpr int kNormalDx[4] = {1, 1, 0, -1};
inline constexpr int kNormalDy[4] = {0, 1, 1, 1};

/// Quantized normal direction at every pixel from the 3x3 second-moment
/// matrix of the gradient of the box-smoothed response.
inline Raster<int> ridge_normals(const Raster<float>& r) {
  const auto s = box3(r);
  const int w = r.width(), h = r.height();
  Raster<double> gx(w, h, 0.0), gy(w, h, 0.0);
  auto at = [&](int x, int y) { return s(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      gx(x, y) = 0.5 * (at(x + 1, y) - at(x - 1, y));
      gy(x, y) = 0.5 * (at(x, y + 1) - at(x, y - 1));
    }
  Raster<int> dir(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double jxx = 0.0, jxy = 0.0, jyy = 0.0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (!r.contains(x + dx, y + dy)) continue;
          const double a = gx(x + dx, y + dy), b = gy(x + dx, y + dy);
          jxx += a * a;
          jxy += a * b;
          jyy += b * b;
        }
      // Dominant eigenvector angle.
      double theta = 0.5 * std::atan2(2.0 * jxy, jxx - jyy);
      if (theta < 0.0) theta += std::numbers::pi;
      dir(x, y) = static_cast<int>(std::lround(theta / (std::numbers::pi / 4.0))) % 4;
    }
  return dir;
}

}  // namespace detail

/// Zeroes pixels that are not maximal along the local ridge normal; a pixel
/// survives when it is >= both normal neighbours and > at least one of them.
/// Repeated until nothing changes, so thinning twice equals thinning once.
inline Raster<float> nms_thin(const Raster<float>& response) {
  Raster<float> cur = response;
  while (true) {
    const auto dir = detail::ridge_normals(cur);
    Raster<float> next = cur;
    bool changed = false;
    for (int y = 0; y < cur.height(); ++y)
      for (int x = 0; x < cur.width(); ++x) {
        const float v = cur(x, y);
        if (!(v > 0.0f)) continue;
        const int d = dir(x, y);
        const float a = cur.at_or(x + detail::kNormalDx[d], y + detail::kNormalDy[d], 0.0f);
        const float b = cur.at_or(x - detail::kNormalDx[d], y - detail::kNormalDy[d], 0.0f);
        if (!(v >= a && v >= b && (v > a || v > b))) {
          next(x, y) = 0.0f;
          changed = true;
        }
      }
    if (!changed) return cur;
    cur = std::move(next);
  }
}

}  // namespace fsds::infer
