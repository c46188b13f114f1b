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

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"

namespace fsds::net {

enum class Supervision {
  kScaleAssociated,  ///< stage i predicts classes 0..i; per-class fusion
  kBinary,           ///< HED-style ablation: skeleton/background everywhere, one shared fusion vector
};

enum class Precision { kF32, kF64 };

struct StageSpec {
  std::vector<int> conv_channels;
  int kernel = 3;
  bool pool_after = true;
};

/// Backbone layout, side-output taps and supervision mode.
struct NetworkConfig {
  int input_channels = 1;
  std::vector<StageSpec> stages;
  /// 1-based indices of the stages carrying side outputs; a contiguous run ending at the last stage.
  std::vector<int> taps;
  Supervision supervision = Supervision::kScaleAssociated;
  Precision precision = Precision::kF32;
  double lambda = 1.2;

  /// Number of side outputs M.
  int side_outputs() const { return static_cast<int>(taps.size()); }

  /// Channels of side output i (1-based): i + 1, or 2 in binary mode.
  int side_classes(int i) const { return supervision == Supervision::kBinary ? 2 : i + 1; }

  int fused_classes() const { return supervision == Supervision::kBinary ? 2 : side_outputs() + 1; }

  /// Total downsampling factor at the deepest tap.
  int total_stride() const {
    int s = 1;
    for (std::size_t i = 0; i + 1 < stages.size(); ++i)
      if (stages[i].pool_after) s *= 2;
    return s;
  }

  void validate() const {
    if (input_channels < 1) throw ValidationError("input_channels must be >= 1");
    if (stages.empty()) throw ValidationError("network needs at least one stage");
    for (const auto& s : stages) {
      if (s.conv_channels.empty()) throw ValidationError("every stage needs at least one convolution");
      if (s.kernel < 1 || s.kernel % 2 == 0) throw ValidationError("stage kernel size must be odd");
      for (int c : s.conv_channels)
        if (c < 1) throw ValidationError("convolution channel counts must be positive");
    }
    if (taps.empty()) throw ValidationError("network needs at least one side-output tap");
    for (std::size_t i = 0; i < taps.size(); ++i) {
      if (taps[i] < 1 || taps[i] > static_cast<int>(stages.size()))
        throw ValidationError("tap index " + std::to_string(taps[i]) + " out of range");
      if (i > 0 && taps[i] != taps[i - 1] + 1) throw ValidationError("taps must be consecutive stages");
    }
    if (taps.back() != static_cast<int>(stages.size()))
      throw ValidationError("taps must extend to the last stage");
    if (!(lambda > 1.0)) throw ValidationError("lambda must exceed 1");
  }

  /// VGG-16 layer pattern with every width divided by `width_divisor`,
  /// keeping `stage_count` stages and tapping every stage after the first.
  static NetworkConfig vgg_pattern(int width_divisor, int stage_count) {
    static const std::vector<std::vector<int>> widths = {
        {64, 64}, {128, 128}, {256, 256, 256}, {512, 512, 512}, {512, 512, 512}};
    if (stage_count < 2 || stage_count > 5) throw ValidationError("VGG pattern has 2..5 stages");
    NetworkConfig cfg;
    for (int s = 0; s < stage_count; ++s) {
      StageSpec st;
      for (int w : widths[static_cast<std::size_t>(s)]) st.conv_channels.push_back(std::max(1, w / width_divisor));
      st.pool_after = s + 1 < stage_count;
      cfg.stages.push_back(st);
    }
    for (int s = 2; s <= stage_count; ++s) cfg.taps.push_back(s);
    return cfg;
  }

  /// Reference taps conv2_2, conv3_3, conv4_3, conv5_3.
  static NetworkConfig vgg16() { return vgg_pattern(1, 5); }

  /// Desk-scale default: widths / 8, taps after stages 2-4 (M = 3).
  static NetworkConfig toy() { return vgg_pattern(8, 4); }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw DataFormat(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw DataFormat("unknown key '" + key + "' in " + where);
}

}  // namespace detail

inline nlohmann::json to_json(const NetworkConfig& cfg) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : cfg.stages)
    stages.push_back({{"convs", s.conv_channels}, {"kernel", s.kernel}, {"pool_after", s.pool_after}});
  return {{"input_channels", cfg.input_channels},
          {"stages", stages},
          {"taps", cfg.taps},
          {"supervision", cfg.supervision == Supervision::kBinary ? "binary" : "scale"},
          {"precision", cfg.precision == Precision::kF64 ? "f64" : "f32"},
          {"lambda", cfg.lambda}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline NetworkConfig network_config_from_json(const nlohmann::json& j) {
  detail::reject_unknown(j, {"input_channels", "stages", "taps", "supervision", "precision", "lambda", "preset"},
                         "network config");
  NetworkConfig cfg;
  try {
    if (j.contains("preset")) {
      const auto preset = j.at("preset").get<std::string>();
      if (preset == "toy") {
        cfg = NetworkConfig::toy();
      } else if (preset == "vgg16") {
        cfg = NetworkConfig::vgg16();
      } else {
        throw DataFormat("unknown network preset '" + preset + "'");
      }
    }
    if (j.contains("input_channels")) cfg.input_channels = j.at("input_channels").get<int>();
    if (j.contains("stages")) {
      cfg.stages.clear();
      for (const auto& s : j.at("stages")) {
        detail::reject_unknown(s, {"convs", "kernel", "pool_after"}, "stage");
        StageSpec st;
        st.conv_channels = s.at("convs").get<std::vector<int>>();
        if (s.contains("kernel")) st.kernel = s.at("kernel").get<int>();
        if (s.contains("pool_after")) st.pool_after = s.at("pool_after").get<bool>();
        cfg.stages.push_back(st);
      }
    }
    if (j.contains("taps")) cfg.taps = j.at("taps").get<std::vector<int>>();
    if (j.contains("supervision")) {
      const auto m = j.at("supervision").get<std::string>();
      if (m == "scale") {
        cfg.supervision = Supervision::kScaleAssociated;
      } else if (m == "binary") {
        cfg.supervision = Supervision::kBinary;
      } else {
        throw DataFormat("supervision must be 'scale' or 'binary', got '" + m + "'");
      }
    }
    if (j.contains("precision")) {
      const auto p = j.at("precision").get<std::string>();
      if (p == "f32") {
        cfg.precision = Precision::kF32;
      } else if (p == "f64") {
        cfg.precision = Precision::kF64;
      } else {
        throw DataFormat("precision must be 'f32' or 'f64', got '" + p + "'");
      }
    }
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormat(std::string("network config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace fsds::net
