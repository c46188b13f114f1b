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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/geometry/augment.hpp"
#include "fsds/net/network_config.hpp"

namespace fsds::data {

enum class ShapeFamily { kCapsule, kRectangle, kTJunction, kComposite };

inline std::string to_string(ShapeFamily f) {
  switch (f) {
    case ShapeFamily::kCapsule: return "capsule";
    case ShapeFamily::kRectangle: return "rectangle";
    case ShapeFamily::kTJunction: return "t-junction";
    case ShapeFamily::kComposite: return "composite";
  }
  return "?";
}

inline ShapeFamily shape_family_from_string(const std::string& s) {
  if (s == "capsule") return ShapeFamily::kCapsule;
  if (s == "rectangle") return ShapeFamily::kRectangle;
  if (s == "t-junction") return ShapeFamily::kTJunction;
  if (s == "composite") return ShapeFamily::kComposite;
  throw DataFormat("unknown shape family '" + s + "'");
}

struct SyntheticSpec {
  int width = 128;
  int height = 128;
  std::vector<ShapeFamily> families = {ShapeFamily::kCapsule, ShapeFamily::kComposite};
  int shapes_per_image = 1;
  double half_width_min = 2.0;
  double half_width_max = 35.0;
  int count = 250;
  int train_count = 200;
  double noise = 0.04;
  std::uint64_t seed = 0;

  /// Half widths must keep every scale below r_M / lambda.
  void validate(double max_field = 92.0, double lambda = 1.2) const {
    if (width < 8 || height < 8) throw ValidationError("synthetic images must be at least 8x8");
    if (families.empty()) throw ValidationError("at least one shape family is required");
    if (shapes_per_image < 1) throw ValidationError("shapes_per_image must be >= 1");
    if (!(half_width_min > 1.0) || !(half_width_max >= half_width_min))
      throw ValidationError("half-width range must satisfy 1 < min <= max");
    if (!(2.0 * half_width_max * lambda < max_field))
      throw ValidationError("half_width_max " + std::to_string(half_width_max) +
                            " would overflow the largest receptive field");
    if (2.0 * half_width_max + 4.0 > std::min(width, height))
      throw ValidationError("half_width_max does not fit the image size");
    if (count < 1 || train_count < 0 || train_count > count)
      throw ValidationError("need count >= 1 and 0 <= train_count <= count");
    if (!(noise >= 0.0)) throw ValidationError("noise must be >= 0");
  }
};

inline nlohmann::json to_json(const SyntheticSpec& s) {
  std::vector<std::string> fam;
  for (auto f : s.families) fam.push_back(to_string(f));
  return {{"width", s.width},
          {"height", s.height},
          {"families", fam},
          {"shapes_per_image", s.shapes_per_image},
          {"half_width_min", s.half_width_min},
          {"half_width_max", s.half_width_max},
          {"count", s.count},
          {"train_count", s.train_count},
          {"noise", s.noise},
          {"seed", s.seed}};
}

inline SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j, SyntheticSpec s = {}) {
  net::detail::reject_unknown(j,
                              {"width", "height", "families", "shapes_per_image", "half_width_min",
                               "half_width_max", "count", "train_count", "noise", "seed"},
                              "synthetic spec");
  try {
    if (j.contains("width")) s.width = j.at("width").get<int>();
    if (j.contains("height")) s.height = j.at("height").get<int>();
    if (j.contains("families")) {
      s.families.clear();
      for (const auto& f : j.at("families")) s.families.push_back(shape_family_from_string(f.get<std::string>()));
    }
    if (j.contains("shapes_per_image")) s.shapes_per_image = j.at("shapes_per_image").get<int>();
    if (j.contains("half_width_min")) s.half_width_min = j.at("half_width_min").get<double>();
    if (j.contains("half_width_max")) s.half_width_max = j.at("half_width_max").get<double>();
    if (j.contains("count")) s.count = j.at("count").get<int>();
    if (j.contains("train_count")) s.train_count = j.at("train_count").get<int>();
    if (j.contains("noise")) s.noise = j.at("noise").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormat(std::string("synthetic spec: ") + e.what());
  }
  return s;
}

/// Rounded segment: all points within `half_width` of the axis from a to b.
struct Capsule {
  int ax = 0, ay = 0, bx = 0, by = 0;
  double half_width = 1.0;

  double axis_distance(double px, double py) const {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
  }
  bool contains(double px, double py) const { return axis_distance(px, py) <= half_width; }
};

/// Axis-aligned rectangle covering pixels [x0, x1] x [y0, y1], odd side lengths.
struct Rectangle {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  /// Distance from the pixel centre to the nearest side; sides lie half a pixel outside.
  double side_distance(int x, int y) const {
    return std::min({x - x0, x1 - x, y - y0, y1 - y}) + 0.5;
  }
};

/// A shape as its parts plus its analytic skeleton with scales.
struct Shape {
  std::vector<Capsule> capsules;
  std::vector<Rectangle> rects;
  std::vector<std::pair<int, int>> skeleton;
  std::vector<float> scales;

  bool contains(int x, int y) const {
    for (const auto& c : capsules)
      if (c.contains(x, y)) return true;
    for (const auto& r : rects)
      if (r.contains(x, y)) return true;
    return false;
  }

  /// Largest inscribed-radius estimate over the capsule parts.
  double capsule_depth(int x, int y) const {
    double best = 0.0;
    for (const auto& c : capsules) best = std::max(best, c.half_width - c.axis_distance(x, y));
    return best;
  }
};

struct SyntheticSample {
  GrayImage image;
  BinaryMask mask;
  ScaleMap scales;
  ShapeFamily family = ShapeFamily::kCapsule;
};

namespace detail {

inline void add_axis(Shape& s, const Capsule& c) {
  geometry::detail::bresenham(c.ax, c.ay, c.bx, c.by, [&](int x, int y) {
    s.skeleton.emplace_back(x, y);
    s.scales.push_back(0.0f);
  });
}

/// Scale of each capsule-axis pixel: twice the deepest part containing it.
inline void finish_capsule_scales(Shape& s) {
  for (std::size_t i = 0; i < s.skeleton.size(); ++i)
    s.scales[i] = static_cast<float>(2.0 * s.capsule_depth(s.skeleton[i].first, s.skeleton[i].second));
}

/// Rotates (x, y) about (cx, cy) by r quarter turns, 0 <= r < 4.
inline std::pair<int, int> turn(int x, int y, int cx, int cy, int r) {
  int dx = x - cx, dy = y - cy;
  for (int k = 0; k < r; ++k) {
    const int t = dx;
    dx = -dy;
    dy = t;
  }
  return {cx + dx, cy + dy};
}

template <typename Rng>
double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <typename Rng>
int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool capsule_fits(const Capsule& c, int w, int h) {
  const double m = c.half_width + 1.0;
  auto in = [&](int x, int y) { return x >= m && y >= m && x <= w - 1 - m && y <= h - 1 - m; };
  return in(c.ax, c.ay) && in(c.bx, c.by);
}

template <typename Rng>
Capsule random_capsule(Rng& rng, const SyntheticSpec& spec, double hw) {
  const double m = hw + 1.0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double angle = uniform(rng, 0.0, M_PI);
    const double span = std::min(spec.width, spec.height) - 2.0 * m - 1.0;
    const double len = uniform(rng, 0.3, 1.0) * span;
    const double cx = uniform(rng, m + 0.5 * len * std::abs(std::cos(angle)),
                              spec.width - 1 - m - 0.5 * len * std::abs(std::cos(angle)));
    const double cy = uniform(rng, m + 0.5 * len * std::abs(std::sin(angle)),
                              spec.height - 1 - m - 0.5 * len * std::abs(std::sin(angle)));
    Capsule c{static_cast<int>(std::lround(cx - 0.5 * len * std::cos(angle))),
              static_cast<int>(std::lround(cy - 0.5 * len * std::sin(angle))),
              static_cast<int>(std::lround(cx + 0.5 * len * std::cos(angle))),
              static_cast<int>(std::lround(cy + 0.5 * len * std::sin(angle))), hw};
    if (capsule_fits(c, spec.width, spec.height)) return c;
  }
  const int cx = spec.width / 2, cy = spec.height / 2;
  return {cx, cy, cx, cy, hw};
}

template <typename Rng>
Shape make_capsule(Rng& rng, const SyntheticSpec& spec) {
  Shape s;
  s.capsules.push_back(random_capsule(rng, spec, uniform(rng, spec.half_width_min, spec.half_width_max)));
  add_axis(s, s.capsules.back());
  finish_capsule_scales(s);
  return s;
}

template <typename Rng>
Shape make_rectangle(Rng& rng, const SyntheticSpec& spec) {
  const int hw_lo = static_cast<int>(std::ceil(spec.half_width_min - 0.5));
  const int hw_hi = std::max(hw_lo, static_cast<int>(std::floor(spec.half_width_max - 0.5)));
  const int k = uniform_int(rng, hw_lo, hw_hi);  // short side = 2k + 1
  const int short_side = 2 * k + 1;
  const int max_long = std::max(spec.width, spec.height) - 4;
  const int long_cap = std::min(spec.width, spec.height) - 4;
  const int long_side = 2 * uniform_int(rng, k, std::max(k, (std::min(max_long, long_cap) - 1) / 2)) + 1;
  const bool horizontal = uniform_int(rng, 0, 1) == 0;
  const int rw = horizontal ? long_side : short_side;
  const int rh = horizontal ? short_side : long_side;
  const int x0 = uniform_int(rng, 2, spec.width - 2 - rw);
  const int y0 = uniform_int(rng, 2, spec.height - 2 - rh);
  Rectangle r{x0, y0, x0 + rw - 1, y0 + rh - 1};
  Shape s;
  s.rects.push_back(r);
  auto put = [&](int x, int y) {
    if (std::find(s.skeleton.begin(), s.skeleton.end(), std::make_pair(x, y)) != s.skeleton.end()) return;
    s.skeleton.emplace_back(x, y);
    s.scales.push_back(static_cast<float>(2.0 * r.side_distance(x, y)));
  };
  // Centre segment plus the four corner diagonals.
  if (horizontal) {
    const int yc = r.y0 + k;
    for (int x = r.x0 + k; x <= r.x1 - k; ++x) put(x, yc);
  } else {
    const int xc = r.x0 + k;
    for (int y = r.y0 + k; y <= r.y1 - k; ++y) put(xc, y);
  }
  for (int t = 0; t < k; ++t) {
    put(r.x0 + t, r.y0 + t);
    put(r.x1 - t, r.y0 + t);
    put(r.x0 + t, r.y1 - t);
    put(r.x1 - t, r.y1 - t);
  }
  return s;
}

/// Bar with a perpendicular stem from its midpoint, in one of four orientations.
template <typename Rng>
Shape make_t_junction(Rng& rng, const SyntheticSpec& spec) {
  const int extent = std::min(spec.width, spec.height);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double hb = uniform(rng, spec.half_width_min, spec.half_width_max);
    const double hs = uniform(rng, spec.half_width_min, hb);
    const int a = uniform_int(rng, static_cast<int>(std::ceil(hs)) + 2, std::max(4, extent / 2 - 4));
    const int len = uniform_int(rng, static_cast<int>(std::ceil(hb + hs)) + 2, std::max(4, extent - 6));
    const int rot = uniform_int(rng, 0, 3);
    const int cx = uniform_int(rng, 0, spec.width - 1), cy = uniform_int(rng, 0, spec.height - 1);
    auto [l0x, l0y] = turn(cx - a, cy, cx, cy, rot);
    auto [l1x, l1y] = turn(cx + a, cy, cx, cy, rot);
    auto [sx, sy] = turn(cx, cy + len, cx, cy, rot);
    Capsule bar{l0x, l0y, l1x, l1y, hb};
    Capsule stem{cx, cy, sx, sy, hs};
    if (!capsule_fits(bar, spec.width, spec.height) || !capsule_fits(stem, spec.width, spec.height)) continue;
    Shape s;
    s.capsules = {bar, stem};
    add_axis(s, bar);
    auto [s1x, s1y] = turn(cx, cy + 1, cx, cy, rot);
    add_axis(s, Capsule{s1x, s1y, sx, sy, hs});
    finish_capsule_scales(s);
    return s;
  }
  return make_capsule(rng, spec);
}

/// Main capsule with one or two narrower branches leaving from axis pixels.
template <typename Rng>
Shape make_composite(Rng& rng, const SyntheticSpec& spec) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double hm = uniform(rng, spec.half_width_min, spec.half_width_max);
    Capsule main = random_capsule(rng, spec, hm);
    Shape s;
    s.capsules.push_back(main);
    add_axis(s, main);
    const int branches = uniform_int(rng, 1, 2);
    bool ok = true;
    for (int b = 0; b < branches && ok; ++b) {
      const auto [jx, jy] = s.skeleton[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(s.skeleton.size()) - 1))];
      const double hb = uniform(rng, spec.half_width_min, hm);
      const double angle = uniform(rng, 0.0, 2.0 * M_PI);
      const double len = uniform(rng, hm + hb + 3.0, hm + hb + 3.0 + 0.5 * std::min(spec.width, spec.height));
      Capsule br{jx, jy, static_cast<int>(std::lround(jx + len * std::cos(angle))),
                 static_cast<int>(std::lround(jy + len * std::sin(angle))), hb};
      if (!capsule_fits(br, spec.width, spec.height)) {
        ok = false;
        break;
      }
      s.capsules.push_back(br);
      const std::size_t before = s.skeleton.size();
      add_axis(s, br);
      // Drop the shared start pixel.
      s.skeleton.erase(s.skeleton.begin() + static_cast<std::ptrdiff_t>(before));
      s.scales.erase(s.scales.begin() + static_cast<std::ptrdiff_t>(before));
    }
    if (!ok) continue;
    finish_capsule_scales(s);
    return s;
  }
  return make_capsule(rng, spec);
}

template <typename Rng>
Shape make_shape(Rng& rng, const SyntheticSpec& spec, ShapeFamily f) {
  switch (f) {
    case ShapeFamily::kCapsule: return make_capsule(rng, spec);
    case ShapeFamily::kRectangle: return make_rectangle(rng, spec);
    case ShapeFamily::kTJunction: return make_t_junction(rng, spec);
    case ShapeFamily::kComposite: return make_composite(rng, spec);
  }
  return make_capsule(rng, spec);
}

}  // namespace detail

/// Renders one sample: bright shapes on a darker flat background with Gaussian
/// noise, the union mask, and the analytic skeleton scales (max where shapes overlap).
template <typename Rng>
SyntheticSample render_sample(Rng& rng, const SyntheticSpec& spec, ShapeFamily family) {
  SyntheticSample out;
  out.family = family;
  out.mask = BinaryMask(spec.width, spec.height, 0);
  out.scales = ScaleMap(spec.width, spec.height, 0.0f);
  out.image = GrayImage(spec.width, spec.height, 0.0f);
  const double bg = detail::uniform(rng, 0.15, 0.45);
  std::vector<double> level(static_cast<std::size_t>(spec.shapes_per_image));
  Raster<int> owner(spec.width, spec.height, -1);
  for (int k = 0; k < spec.shapes_per_image; ++k) {
    Shape shape;
    bool placed = false;
    for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
      shape = detail::make_shape(rng, spec, family);
      placed = true;
      // Keep shapes two pixels apart so each keeps its own skeleton.
      for (int y = 0; y < spec.height && placed; ++y)
        for (int x = 0; x < spec.width && placed; ++x)
          if (shape.contains(x, y))
            for (int dy = -2; dy <= 2 && placed; ++dy)
              for (int dx = -2; dx <= 2 && placed; ++dx)
                if (out.mask.at_or(x + dx, y + dy, 0)) placed = false;
    }
    if (!placed) break;
    level[static_cast<std::size_t>(k)] = std::min(1.0, bg + detail::uniform(rng, 0.25, 0.5));
    for (int y = 0; y < spec.height; ++y)
      for (int x = 0; x < spec.width; ++x)
        if (shape.contains(x, y)) {
          out.mask(x, y) = 1;
          owner(x, y) = k;
        }
    for (std::size_t i = 0; i < shape.skeleton.size(); ++i) {
      const auto [x, y] = shape.skeleton[i];
      if (out.scales.contains(x, y)) out.scales(x, y) = std::max(out.scales(x, y), shape.scales[i]);
    }
  }
  std::normal_distribution<double> noise(0.0, spec.noise);
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) {
      const int k = owner(x, y);
      const double v = (k < 0 ? bg : level[static_cast<std::size_t>(k)]) + (spec.noise > 0.0 ? noise(rng) : 0.0);
      // Stored as 8-bit gray, so quantize here.
      out.image(x, y) = static_cast<float>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)) / 255.0f;
    }
  return out;
}

/// The full synthetic set; families cycle in order.
inline std::vector<SyntheticSample> generate_synthetic(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::vector<SyntheticSample> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i)
    out.push_back(render_sample(rng, spec, spec.families[static_cast<std::size_t>(i) % spec.families.size()]));
  return out;
}

}  // namespace fsds::data
