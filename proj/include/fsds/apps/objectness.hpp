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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"

namespace fsds::apps {

inline constexpr double kObjectnessEpsilon = 1e-6;

/// Box covering pixels with x <= px < x + w and y <= py < y + h.
struct Box {
  double x = 0.0, y = 0.0, w = 0.0, h = 0.0;
  double score = 0.0;
  nlohmann::json extra = nlohmann::json::object();  ///< other keys, passed through
};

struct MaskStats {
  std::size_t area = 0;
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  ///< bounding box of the mask pixels
};

inline MaskStats mask_stats(const BinaryMask& m) {
  MaskStats s{0, m.width(), m.height(), -1, -1};
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m(x, y)) {
        ++s.area;
        s.x0 = std::min(s.x0, x);
        s.y0 = std::min(s.y0, y);
        s.x1 = std::max(s.x1, x);
        s.y1 = std::max(s.y1, y);
      }
  return s;
}

inline std::size_t box_intersection(const BinaryMask& m, const Box& b) {
  const int bx0 = std::max(0, static_cast<int>(std::ceil(b.x)));
  const int by0 = std::max(0, static_cast<int>(std::ceil(b.y)));
  const int bx1 = std::min(m.width(), static_cast<int>(std::ceil(b.x + b.w)));
  const int by1 = std::min(m.height(), static_cast<int>(std::ceil(b.y + b.h)));
  std::size_t n = 0;
  for (int y = by0; y < by1; ++y)
    for (int x = bx0; x < bx1; ++x) n += m(x, y) != 0;
  return n;
}

/// h_B = sum |M n B| / (sum |M| + eps) * h_E over the masks meeting B.
inline double objectness_score(const Box& b, const std::vector<BinaryMask>& masks,
                               double eps = kObjectnessEpsilon) {
  if (!(eps > 0.0)) throw ValidationError("objectness epsilon must be positive");
  double inter = 0.0, area = 0.0;
  for (const auto& m : masks) {
    const std::size_t i = box_intersection(m, b);
    if (i == 0) continue;
    inter += static_cast<double>(i);
    area += static_cast<double>(mask_stats(m).area);
  }
  return inter / (area + eps) * b.score;
}

inline std::vector<double> objectness_rescore(const std::vector<Box>& boxes, const std::vector<BinaryMask>& masks,
                                              double eps = kObjectnessEpsilon) {
  std::vector<double> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) out.push_back(objectness_score(b, masks, eps));
  return out;
}

inline Box box_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataFormat("box line must be a JSON object");
  Box b;
  try {
    b.x = j.at("x").get<double>();
    b.y = j.at("y").get<double>();
    b.w = j.at("w").get<double>();
    b.h = j.at("h").get<double>();
    b.score = j.at("score").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormat(std::string("box: ") + e.what());
  }
  if (b.w < 0.0 || b.h < 0.0) throw DataFormat("box width and height must be >= 0");
  for (const auto& [k, v] : j.items())
    if (k != "x" && k != "y" && k != "w" && k != "h" && k != "score") b.extra[k] = v;
  return b;
}

inline nlohmann::json to_json(const Box& b, double rescored) {
  nlohmann::json j = b.extra;
  j["x"] = b.x;
  j["y"] = b.y;
  j["w"] = b.w;
  j["h"] = b.h;
  j["score"] = b.score;
  j["rescored"] = rescored;
  return j;
}

}  // namespace fsds::apps
