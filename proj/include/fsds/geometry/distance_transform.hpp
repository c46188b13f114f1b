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
#include <limits>
#include <vector>

#include "fsds/core/raster.hpp"

namespace fsds::geometry {

namespace detail {

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), in place on f.
inline void squared_edt_1d(std::vector<double>& f, std::vector<double>& out,
                           std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  out.assign(static_cast<std::size_t>(n), 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + q * static_cast<double>(q)) - (f[p] + p * static_cast<double>(p))) /
          (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    if (s <= z[k] && k == 0) {
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[q] = inf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace detail

/// Squared Euclidean distance from each pixel centre to the nearest background
/// pixel centre. Pixels beyond the image border count as background, so a
/// foreground pixel on the border has distance 1.
inline Raster<double> squared_distance_to_background(const BinaryMask& mask) {
  const int w = mask.width() + 2;
  const int h = mask.height() + 2;
  constexpr double inf = std::numeric_limits<double>::infinity();
  Raster<double> g(w, h, 0.0);
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) g(x + 1, y + 1) = mask(x, y) ? inf : 0.0;

  std::vector<double> f, out, z;
  std::vector<int> v;
  for (int x = 0; x < w; ++x) {
    f.resize(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) f[y] = g(x, y);
    detail::squared_edt_1d(f, out, v, z);
    for (int y = 0; y < h; ++y) g(x, y) = out[y];
  }
  for (int y = 0; y < h; ++y) {
    f.resize(static_cast<std::size_t>(w));
    for (int x = 0; x < w; ++x) f[x] = g(x, y);
    detail::squared_edt_1d(f, out, v, z);
    for (int x = 0; x < w; ++x) g(x, y) = out[x];
  }

  Raster<double> result(mask.width(), mask.height(), 0.0);
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) result(x, y) = g(x + 1, y + 1);
  return result;
}

inline Raster<double> distance_to_background(const BinaryMask& mask) {
  Raster<double> d = squared_distance_to_background(mask);
  for (double& v : d.values()) v = std::sqrt(v);
  return d;
}

/// Diameter of the largest disk centred at a pixel that stays inside the
/// foreground, measured to the pixel boundary: 2 * (d - 1/2) for centre
/// distance d to the nearest background centre.
inline double disk_diameter_from_center_distance(double d) {
  return d > 0.0 ? 2.0 * d - 1.0 : 0.0;
}

}  // namespace fsds::geometry
