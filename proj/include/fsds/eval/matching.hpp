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
#include <tuple>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"

namespace fsds::eval {

struct MatchConfig {
  double tolerance = 0.0075;
  bool relative = true;  ///< tolerance is a fraction of the image diagonal

  double pixels(int width, int height) const {
    return relative ? tolerance * std::hypot(static_cast<double>(width), static_cast<double>(height)) : tolerance;
  }
  void validate() const {
    if (!(tolerance >= 0.0)) throw ValidationError("match tolerance must be >= 0");
  }
};

struct MatchCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const MatchCounts&) const = default;
};

namespace detail {

struct Point {
  int x, y;
};

inline std::vector<Point> positives(const BinaryMask& m) {
  std::vector<Point> out;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m(x, y)) out.push_back({x, y});
  return out;
}

/// Augmenting-path search from prediction p.
inline bool augment(int p, const std::vector<std::vector<int>>& adj, std::vector<int>& gt_of,
                    std::vector<int>& pred_of, std::vector<char>& seen) {
  for (int g : adj[static_cast<std::size_t>(p)]) {
    if (seen[static_cast<std::size_t>(g)]) continue;
    seen[static_cast<std::size_t>(g)] = 1;
    const int owner = pred_of[static_cast<std::size_t>(g)];
    if (owner < 0 || augment(owner, adj, gt_of, pred_of, seen)) {
      gt_of[static_cast<std::size_t>(p)] = g;
      pred_of[static_cast<std::size_t>(g)] = p;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// One-to-one matching of predicted to groundtruth pixels within `tol` pixels
/// (Euclidean). Pairs are first taken greedily nearest-first, then augmenting
/// paths raise the matching to maximum cardinality.
inline MatchCounts match_maps_px(const BinaryMask& pred, const BinaryMask& gt, double tol) {
  require_same_shape(pred, gt, "match_maps");
  const auto ps = detail::positives(pred);
  const auto gs = detail::positives(gt);
  const int r = static_cast<int>(std::floor(tol));
  Raster<int> gt_index(gt.width(), gt.height(), -1);
  for (std::size_t i = 0; i < gs.size(); ++i) gt_index(gs[i].x, gs[i].y) = static_cast<int>(i);

  std::vector<std::vector<int>> adj(ps.size());
  std::vector<std::tuple<double, int, int>> pairs;
  for (std::size_t p = 0; p < ps.size(); ++p) {
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        const int x = ps[p].x + dx, y = ps[p].y + dy;
        if (!gt.contains(x, y) || gt_index(x, y) < 0) continue;
        const double d = std::hypot(dx, dy);
        if (d > tol) continue;
        adj[p].push_back(gt_index(x, y));
        pairs.emplace_back(d, static_cast<int>(p), gt_index(x, y));
      }
    std::sort(adj[p].begin(), adj[p].end());
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> gt_of(ps.size(), -1), pred_of(gs.size(), -1);
  for (const auto& [d, p, g] : pairs) {
    if (gt_of[static_cast<std::size_t>(p)] >= 0 || pred_of[static_cast<std::size_t>(g)] >= 0) continue;
    gt_of[static_cast<std::size_t>(p)] = g;
    pred_of[static_cast<std::size_t>(g)] = p;
  }
  std::vector<char> seen(gs.size());
  for (std::size_t p = 0; p < ps.size(); ++p) {
    if (gt_of[p] >= 0 || adj[p].empty()) continue;
    std::fill(seen.begin(), seen.end(), 0);
    detail::augment(static_cast<int>(p), adj, gt_of, pred_of, seen);
  }
  MatchCounts c;
  for (int g : gt_of) c.tp += g >= 0 ? 1 : 0;
  c.fp = static_cast<long long>(ps.size()) - c.tp;
  c.fn = static_cast<long long>(gs.size()) - c.tp;
  return c;
}

inline MatchCounts match_maps(const BinaryMask& pred, const BinaryMask& gt, const MatchConfig& cfg = {}) {
  cfg.validate();
  return match_maps_px(pred, gt, cfg.pixels(gt.width(), gt.height()));
}

}  // namespace fsds::eval
