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
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "fsds/core/raster.hpp"
#include "fsds/geometry/distance_transform.hpp"

namespace fsds::geometry {

/// Tuning of the medial-axis extraction behind compute_scale_map.
struct SkeletonOptions {
  /// A pixel is a medial anchor unless a neighbour's distance grows by at
  /// least (step length - slack), i.e. its disk is swallowed by that neighbour's.
  double anchor_slack = 0.6;
  /// End branches whose disks extend the reconstruction beyond the junction
  /// disk by less than max(min_gain, gain_ratio * junction radius) are pruned.
  double min_prune_gain = 3.0;
  double prune_gain_ratio = 0.5;
  /// An end pixel whose disk lies inside the disk of a pixel at most
  /// `trim_reach` steps along the skeleton (up to `trim_slack`) is trimmed.
  double trim_slack = 0.5;
  int trim_reach = 3;
};

namespace detail {

// Neighbour order P2..P9 clockwise from north, as in Zhang-Suen.
inline constexpr std::array<int, 8> kNx = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr std::array<int, 8> kNy = {-1, -1, 0, 1, 1, 1, 0, -1};

inline std::array<int, 8> ring(const BinaryMask& s, int x, int y) {
  std::array<int, 8> p{};
  for (int k = 0; k < 8; ++k) p[k] = s.at_or(x + kNx[k], y + kNy[k], 0) ? 1 : 0;
  return p;
}

inline int neighbour_count(const BinaryMask& s, int x, int y) {
  const auto p = ring(s, x, y);
  return std::accumulate(p.begin(), p.end(), 0);
}

// Yokoi 8-connectivity number; 1 means removing the pixel preserves topology.
inline int connectivity_number(const std::array<int, 8>& p) {
  // Yokoi indexing: x1 = east, counter-clockwise. Map from the clockwise-from-north ring.
  const std::array<int, 8> x = {p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]};
  int n = 0;
  for (int k = 0; k < 8; k += 2) {
    const int a = 1 - x[k];
    const int b = 1 - x[(k + 1) % 8];
    const int c = 1 - x[(k + 2) % 8];
    n += a - a * b * c;
  }
  return n;
}

inline bool is_simple(const BinaryMask& s, int x, int y) {
  return connectivity_number(ring(s, x, y)) == 1;
}

// Removes simple, non-anchor pixels in order of increasing distance until stable.
inline void ordered_homotopic_thinning(BinaryMask& s, const BinaryMask& anchors,
                                       const Raster<double>& dist) {
  std::vector<int> order;
  order.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.data()[i] && !anchors.data()[i]) order.push_back(static_cast<int>(i));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist.data()[a] < dist.data()[b]; });
  bool changed = true;
  while (changed) {
    changed = false;
    for (int idx : order) {
      if (!s.data()[idx]) continue;
      const int x = idx % s.width();
      const int y = idx / s.width();
      if (is_simple(s, x, y)) {
        s.data()[idx] = 0;
        changed = true;
      }
    }
  }
}

// Two-subiteration Zhang-Suen thinning down to one-pixel width.
inline void zhang_suen(BinaryMask& s) {
  std::vector<std::size_t> kill;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      kill.clear();
      for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
          if (!s(x, y)) continue;
          const auto p = ring(s, x, y);
          const int b = std::accumulate(p.begin(), p.end(), 0);
          if (b < 2 || b > 6) continue;
          int a = 0;
          for (int k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
          if (a != 1) continue;
          // p[0]=N p[2]=E p[4]=S p[6]=W
          if (pass == 0) {
            if (p[0] * p[2] * p[4] != 0 || p[2] * p[4] * p[6] != 0) continue;
          } else {
            if (p[0] * p[2] * p[6] != 0 || p[0] * p[4] * p[6] != 0) continue;
          }
          kill.push_back(s.index(x, y));
        }
      }
      for (std::size_t i : kill) s.data()[i] = 0;
      changed = changed || !kill.empty();
    }
  }
}

// Removes the inner corner pixel of 4-connected staircases left by Zhang-Suen.
inline void remove_staircases(BinaryMask& s) {
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      if (!s(x, y)) continue;
      const auto p = ring(s, x, y);
      const bool corner = (p[0] && p[2]) || (p[2] && p[4]) || (p[4] && p[6]) || (p[6] && p[0]);
      if (!corner || std::accumulate(p.begin(), p.end(), 0) < 2) continue;
      if (connectivity_number(p) == 1) s(x, y) = 0;
    }
  }
}

// Repeatedly trims end pixels whose disks are covered by a nearby skeleton disk.
inline void trim_contained_ends(BinaryMask& s, const Raster<double>& radius,
                                const SkeletonOptions& opt) {
  std::vector<std::pair<int, int>> frontier, next, seen;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < s.height(); ++y) {
      for (int x = 0; x < s.width(); ++x) {
        if (!s(x, y) || neighbour_count(s, x, y) != 1) continue;
        seen.assign(1, {x, y});
        frontier.assign(1, {x, y});
        bool covered = false;
        for (int step = 0; step < opt.trim_reach && !covered && !frontier.empty(); ++step) {
          next.clear();
          for (auto [fx, fy] : frontier) {
            for (int k = 0; k < 8; ++k) {
              const int qx = fx + kNx[k], qy = fy + kNy[k];
              if (!s.at_or(qx, qy, 0)) continue;
              if (std::find(seen.begin(), seen.end(), std::pair{qx, qy}) != seen.end()) continue;
              seen.emplace_back(qx, qy);
              next.emplace_back(qx, qy);
              const double dx = qx - x, dy = qy - y;
              if (std::sqrt(dx * dx + dy * dy) + radius(x, y) <= radius(qx, qy) + opt.trim_slack)
                covered = true;
            }
          }
          frontier.swap(next);
        }
        if (covered) {
          s(x, y) = 0;
          changed = true;
        }
      }
    }
  }
}

// Drops end branches that add little beyond the disk of the junction they hang from.
inline void prune_spurs(BinaryMask& s, const Raster<double>& radius, const SkeletonOptions& opt) {
  bool changed = true;
  std::vector<std::pair<int, int>> branch;
  while (changed) {
    changed = false;
    for (int y0 = 0; y0 < s.height(); ++y0) {
      for (int x0 = 0; x0 < s.width(); ++x0) {
        if (!s(x0, y0) || neighbour_count(s, x0, y0) != 1) continue;
        branch.clear();
        int x = x0, y = y0, px = -1, py = -1;
        bool reached_junction = false;
        int jx = -1, jy = -1;
        while (true) {
          const int n = neighbour_count(s, x, y);
          if (n >= 3) {
            reached_junction = true;
            jx = x;
            jy = y;
            break;
          }
          branch.emplace_back(x, y);
          int nx = -1, ny = -1;
          for (int k = 0; k < 8; ++k) {
            const int qx = x + kNx[k], qy = y + kNy[k];
            if (!s.at_or(qx, qy, 0) || (qx == px && qy == py)) continue;
            if (std::find(branch.begin(), branch.end(), std::pair{qx, qy}) != branch.end()) continue;
            nx = qx;
            ny = qy;
            break;
          }
          if (nx < 0) break;
          px = x;
          py = y;
          x = nx;
          y = ny;
        }
        if (!reached_junction) continue;
        const double rj = radius(jx, jy);
        double gain = 0.0;
        for (auto [bx, by] : branch) {
          const double dx = bx - jx, dy = by - jy;
          gain = std::max(gain, std::sqrt(dx * dx + dy * dy) + radius(bx, by) - rj);
        }
        if (gain < std::max(opt.min_prune_gain, opt.prune_gain_ratio * rj)) {
          for (auto [bx, by] : branch) s(bx, by) = 0;
          changed = true;
        }
      }
    }
  }
}

}  // namespace detail

/// Medial-axis skeleton of a binary mask with per-pixel maximal-disk diameter.
///
/// Distance transform ridges serve as anchors for distance-ordered homotopic
/// thinning; the result is thinned to one pixel and short spurs are pruned.
/// Each surviving pixel carries 2 * (distance to the shape boundary), where the
/// boundary lies half a pixel outside the foreground pixel centres.
inline ScaleMap compute_scale_map(const BinaryMask& mask, const SkeletonOptions& opt = {}) {
  ScaleMap out(mask.width(), mask.height(), 0.0f);
  if (mask.empty() || count_positive(mask) == 0) return out;

  const Raster<double> dist = distance_to_background(mask);
  BinaryMask anchors(mask.width(), mask.height(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      const double d = dist(x, y);
      bool swallowed = false;
      for (int k = 0; k < 8 && !swallowed; ++k) {
        const int qx = x + detail::kNx[k], qy = y + detail::kNy[k];
        if (!mask.contains(qx, qy) || !mask(qx, qy)) continue;
        const double step = (detail::kNx[k] != 0 && detail::kNy[k] != 0) ? std::sqrt(2.0) : 1.0;
        if (dist(qx, qy) - d >= step - opt.anchor_slack) swallowed = true;
      }
      anchors(x, y) = swallowed ? 0 : 1;
    }
  }

  BinaryMask skel = mask;
  detail::ordered_homotopic_thinning(skel, anchors, dist);
  detail::zhang_suen(skel);
  detail::remove_staircases(skel);

  Raster<double> radius(mask.width(), mask.height(), 0.0);
  for (std::size_t i = 0; i < radius.size(); ++i)
    radius.data()[i] = 0.5 * disk_diameter_from_center_distance(dist.data()[i]);
  detail::trim_contained_ends(skel, radius, opt);
  detail::prune_spurs(skel, radius, opt);
  detail::zhang_suen(skel);
  detail::trim_contained_ends(skel, radius, opt);
  detail::remove_staircases(skel);

  for (std::size_t i = 0; i < out.size(); ++i)
    if (skel.data()[i]) out.data()[i] = static_cast<float>(2.0 * radius.data()[i]);
  return out;
}

}  // namespace fsds::geometry
