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
#include <cstdlib>
#include <string>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"

namespace fsds::geometry {

enum class Flip { kNone, kUpDown, kLeftRight };

inline std::string to_string(Flip f) {
  switch (f) {
    case Flip::kNone: return "none";
    case Flip::kUpDown: return "up-down";
    case Flip::kLeftRight: return "left-right";
  }
  return "?";
}

/// Rotates by 90 degrees clockwise.
template <typename T>
Raster<T> rotate90(const Raster<T>& in) {
  Raster<T> out(in.height(), in.width());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) out(in.height() - 1 - y, x) = in(x, y);
  return out;
}

/// Rotation by a multiple of 90 degrees (clockwise).
template <typename T>
Raster<T> rotate(const Raster<T>& in, int degrees) {
  if (degrees % 90 != 0) throw ValidationError("rotation must be a multiple of 90 degrees");
  const int quarter = ((degrees / 90) % 4 + 4) % 4;
  Raster<T> out = in;
  for (int i = 0; i < quarter; ++i) out = rotate90(out);
  return out;
}

template <typename T>
Raster<T> flip(const Raster<T>& in, Flip mode) {
  if (mode == Flip::kNone) return in;
  Raster<T> out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      if (mode == Flip::kUpDown) {
        out(x, in.height() - 1 - y) = in(x, y);
      } else {
        out(in.width() - 1 - x, y) = in(x, y);
      }
    }
  }
  return out;
}

inline int resized_extent(int n, double factor) {
  return std::max(1, static_cast<int>(std::lround(n * factor)));
}

/// Bilinear resampling with pixel-centre alignment.
inline GrayImage resize_bilinear(const GrayImage& in, double factor) {
  if (!(factor > 0.0)) throw ValidationError("resize factor must be positive");
  const int w = resized_extent(in.width(), factor);
  const int h = resized_extent(in.height(), factor);
  GrayImage out(w, h);
  const double sx = static_cast<double>(in.width()) / w;
  const double sy = static_cast<double>(in.height()) / h;
  for (int y = 0; y < h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, in.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, in.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, in.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, in.width() - 1);
      const double tx = fx - x0;
      const double top = (1 - tx) * in(x0, y0) + tx * in(x1, y0);
      const double bot = (1 - tx) * in(x0, y1) + tx * in(x1, y1);
      out(x, y) = static_cast<float>((1 - ty) * top + ty * bot);
    }
  }
  return out;
}

namespace detail {

inline int map_coord(int c, double factor, int extent) {
  return std::clamp(static_cast<int>(std::floor((c + 0.5) * factor)), 0, extent - 1);
}

template <typename F>
void bresenham(int x0, int y0, int x1, int y1, F&& plot) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    plot(x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace detail

/// Resizes a scale map by moving each skeleton pixel to its nearest target
/// pixel and multiplying its value by `factor`. When enlarging, 8-adjacent
/// skeleton pixels are reconnected with digital lines so the skeleton stays
/// thin and connected. Every positive output value is `factor` times some
/// input value.
inline ScaleMap resize_scale_map(const ScaleMap& in, double factor) {
  if (!(factor > 0.0)) throw ValidationError("resize factor must be positive");
  const int w = resized_extent(in.width(), factor);
  const int h = resized_extent(in.height(), factor);
  ScaleMap out(w, h, 0.0f);
  auto put = [&](int x, int y, float v) { out(x, y) = std::max(out(x, y), v); };
  const float f = static_cast<float>(factor);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      const float v = in(x, y);
      if (!(v > 0.0f)) continue;
      const int tx = detail::map_coord(x, factor, w);
      const int ty = detail::map_coord(y, factor, h);
      put(tx, ty, v * f);
      if (factor <= 1.0) continue;
      // Forward neighbours only, so each adjacent pair is joined once.
      constexpr int nx[4] = {1, -1, 0, 1};
      constexpr int ny[4] = {0, 1, 1, 1};
      for (int k = 0; k < 4; ++k) {
        const int qx = x + nx[k], qy = y + ny[k];
        if (!in.contains(qx, qy) || !(in(qx, qy) > 0.0f)) continue;
        const float joined = std::max(v, in(qx, qy)) * f;
        detail::bresenham(tx, ty, detail::map_coord(qx, factor, w), detail::map_coord(qy, factor, h),
                          [&](int px, int py) { put(px, py, joined); });
      }
    }
  }
  return out;
}

/// Augmentation grid; the defaults give the 4 x 3 x 3 = 36 variants.
struct AugmentSpec {
  std::vector<int> rotations = {0, 90, 180, 270};
  std::vector<Flip> flips = {Flip::kNone, Flip::kUpDown, Flip::kLeftRight};
  std::vector<double> factors = {0.8, 1.0, 1.2};

  std::size_t variant_count() const { return rotations.size() * flips.size() * factors.size(); }
};

struct AugmentedSample {
  GrayImage image;
  ScaleMap scales;
  int rotation = 0;
  Flip flip = Flip::kNone;
  double factor = 1.0;
};

/// A single variant: rotate, then flip, then resize.
inline AugmentedSample augment_one(const GrayImage& image, const ScaleMap& scales, int rotation,
                                   Flip flip_mode, double factor) {
  require_same_shape(image, scales, "augment");
  GrayImage img = flip(rotate(image, rotation), flip_mode);
  ScaleMap s = flip(rotate(scales, rotation), flip_mode);
  if (factor != 1.0) {
    img = resize_bilinear(img, factor);
    s = resize_scale_map(s, factor);
  }
  return {std::move(img), std::move(s), rotation, flip_mode, factor};
}

inline std::vector<AugmentedSample> augment(const GrayImage& image, const ScaleMap& scales,
                                            const AugmentSpec& spec = {}) {
  std::vector<AugmentedSample> out;
  out.reserve(spec.variant_count());
  for (int r : spec.rotations)
    for (Flip f : spec.flips)
      for (double k : spec.factors) out.push_back(augment_one(image, scales, r, f, k));
  return out;
}

}  // namespace fsds::geometry
