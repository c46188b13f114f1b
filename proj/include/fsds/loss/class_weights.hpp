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

#include <cstddef>
#include <string>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"

namespace fsds::loss {

/// Per-class loss weights beta_k, inversely proportional to class frequency
/// and normalised over the classes that occur. Absent classes weigh 0.
struct ClassWeights {
  std::vector<double> beta;
  std::vector<std::size_t> counts;

  int classes() const { return static_cast<int>(beta.size()); }
  double operator[](int k) const { return beta[static_cast<std::size_t>(k)]; }
};

inline ClassWeights class_weights(const QuantizedScaleMap& gt, int num_classes) {
  if (gt.empty()) throw DataFormat("class weights need a non-empty groundtruth map");
  if (num_classes < 1) throw ValidationError("class count must be positive");
  ClassWeights w{std::vector<double>(static_cast<std::size_t>(num_classes), 0.0),
                 std::vector<std::size_t>(static_cast<std::size_t>(num_classes), 0)};
  for (int z : gt.values()) {
    if (z < 0 || z >= num_classes)
      throw ClassOutOfRange("groundtruth class " + std::to_string(z) + " outside [0, " +
                            std::to_string(num_classes) + ")");
    ++w.counts[static_cast<std::size_t>(z)];
  }
  double norm = 0.0;
  for (std::size_t k = 0; k < w.counts.size(); ++k)
    if (w.counts[k] > 0) norm += 1.0 / static_cast<double>(w.counts[k]);
  for (std::size_t k = 0; k < w.counts.size(); ++k)
    if (w.counts[k] > 0) w.beta[k] = (1.0 / static_cast<double>(w.counts[k])) / norm;
  return w;
}

/// Number of classes is taken as max(gt) + 1.
inline ClassWeights class_weights(const QuantizedScaleMap& gt) {
  int k = 0;
  for (int z : gt.values()) k = std::max(k, z);
  return class_weights(gt, k + 1);
}

}  // namespace fsds::loss
