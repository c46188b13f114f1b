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

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/eval/matching.hpp"
#include "fsds/infer/predict.hpp"

namespace fsds::eval {

struct PRPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  MatchCounts counts;

  double f() const { return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0; }
};

struct PRCurve {
  std::vector<PRPoint> points;
  double best_f = 0.0;
  double best_threshold = 0.0;
};

/// n evenly spaced thresholds strictly inside (0, 1): (i + 1) / (n + 1).
inline std::vector<double> default_thresholds(int n = 100) {
  if (n < 1) throw ValidationError("need at least one threshold");
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(static_cast<double>(i + 1) / (n + 1));
  return t;
}

inline PRPoint pr_point(double t, const MatchCounts& c) {
  PRPoint p{t, 1.0, 1.0, c};
  if (c.tp + c.fp > 0) p.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) p.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return p;
}

/// Maximum F over the points; ties go to the lowest threshold.
inline std::pair<double, double> max_f(const PRCurve& curve) {
  if (curve.points.empty()) throw ValidationError("max_f needs a non-empty curve");
  double best = -1.0, at = 0.0;
  for (const auto& p : curve.points) {
    const double f = p.f();
    if (f > best || (f == best && p.threshold < at)) {
      best = f;
      at = p.threshold;
    }
  }
  return {best, at};
}

inline void finish_curve(PRCurve& c) {
  const auto [f, t] = max_f(c);
  c.best_f = f;
  c.best_threshold = t;
}

/// Dataset curve: counts are summed over all images at each threshold.
/// Responses are expected to be thinned already.
inline PRCurve pr_curve(const std::vector<infer::SkeletonResponse>& responses, const std::vector<BinaryMask>& gts,
                        const std::vector<double>& thresholds, const MatchConfig& cfg = {}) {
  if (thresholds.empty()) throw ValidationError("pr_curve needs at least one threshold");
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1])) throw ValidationError("thresholds must be strictly increasing");
  if (responses.size() != gts.size()) throw ShapeMismatch("one groundtruth map per response is required");
  PRCurve curve;
  for (double t : thresholds) {
    MatchCounts total;
    for (std::size_t i = 0; i < responses.size(); ++i) total += match_maps(infer::threshold(responses[i], t), gts[i], cfg);
    curve.points.push_back(pr_point(t, total));
  }
  finish_curve(curve);
  return curve;
}

inline PRCurve pr_curve(const infer::SkeletonResponse& response, const BinaryMask& gt,
                        const std::vector<double>& thresholds, const MatchConfig& cfg = {}) {
  return pr_curve(std::vector<infer::SkeletonResponse>{response}, std::vector<BinaryMask>{gt}, thresholds, cfg);
}

inline nlohmann::json to_json(const PRCurve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points)
    pts.push_back({{"threshold", p.threshold},
                   {"precision", p.precision},
                   {"recall", p.recall},
                   {"tp", p.counts.tp},
                   {"fp", p.counts.fp},
                   {"fn", p.counts.fn}});
  return {{"max_f", c.best_f}, {"best_threshold", c.best_threshold}, {"points", pts}};
}

/// threshold,precision,recall per line.
inline void write_curve_csv(std::ostream& os, const PRCurve& c) {
  os << "threshold,precision,recall\n";
  for (const auto& p : c.points) os << p.threshold << ',' << p.precision << ',' << p.recall << '\n';
}

}  // namespace fsds::eval
