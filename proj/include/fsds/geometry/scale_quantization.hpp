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

namespace fsds::geometry {

/// Receptive field sizes r_1 < ... < r_M of the tapped stages, and the
/// safety margin lambda > 1 a scale must fit within.
class ReceptiveFieldSchedule {
 public:
  ReceptiveFieldSchedule(std::vector<int> fields, double lambda = 1.2)
      : fields_(std::move(fields)), lambda_(lambda) {
    if (fields_.empty()) throw ValidationError("receptive field schedule needs at least one stage");
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      if (fields_[i] <= 0) throw ValidationError("receptive fields must be positive");
      if (i > 0 && fields_[i] <= fields_[i - 1])
        throw ValidationError("receptive fields must be strictly increasing");
    }
    if (!(lambda_ > 1.0)) throw ValidationError("lambda must exceed 1");
  }

  /// Reference schedule of the VGG-16 taps conv2_2..conv5_3.
  static ReceptiveFieldSchedule vgg16() { return ReceptiveFieldSchedule({14, 40, 92, 196}, 1.2); }

  int stages() const { return static_cast<int>(fields_.size()); }
  /// r_i for 1-based stage i.
  int field(int stage) const { return fields_.at(static_cast<std::size_t>(stage - 1)); }
  const std::vector<int>& fields() const { return fields_; }
  double lambda() const { return lambda_; }

  friend bool operator==(const ReceptiveFieldSchedule&, const ReceptiveFieldSchedule&) = default;

 private:
  std::vector<int> fields_;
  double lambda_;
};

enum class OverflowPolicy {
  kStrict,   ///< throw ScaleOverflow
  kLenient,  ///< clamp to M and count the event
};

/// Counts clamped scales under the lenient policy.
struct OverflowCounter {
  std::size_t clamped = 0;
};

/// Class 0 for s = 0, else the first stage whose receptive field exceeds lambda * s.
inline int quantize_scale(double s, const ReceptiveFieldSchedule& sched,
                          OverflowPolicy policy = OverflowPolicy::kStrict,
                          OverflowCounter* counter = nullptr) {
  if (s < 0.0) throw ValidationError("scale must be non-negative");
  if (s == 0.0) return 0;
  const double need = sched.lambda() * s;
  for (int i = 1; i <= sched.stages(); ++i) {
    if (static_cast<double>(sched.field(i)) > need) return i;
  }
  if (policy == OverflowPolicy::kStrict) {
    throw ScaleOverflow("scale " + std::to_string(s) + " needs a receptive field above " +
                        std::to_string(need) + " but the largest is " +
                        std::to_string(sched.field(sched.stages())));
  }
  if (counter) ++counter->clamped;
  return sched.stages();
}

inline QuantizedScaleMap quantize_map(const ScaleMap& s, const ReceptiveFieldSchedule& sched,
                                      OverflowPolicy policy = OverflowPolicy::kStrict,
                                      OverflowCounter* counter = nullptr) {
  QuantizedScaleMap z(s.width(), s.height());
  for (std::size_t i = 0; i < s.size(); ++i)
    z.data()[i] = quantize_scale(static_cast<double>(s.data()[i]), sched, policy, counter);
  return z;
}

/// Groundtruth for side output `stage`: classes above the stage are background.
inline QuantizedScaleMap make_scale_associated_gt(const QuantizedScaleMap& z, int stage) {
  if (stage < 1) throw ValidationError("stage index must be >= 1");
  QuantizedScaleMap out(z.width(), z.height());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const int v = z.data()[i];
    out.data()[i] = v <= stage ? v : 0;
  }
  return out;
}

/// Collapses every positive class to 1 (binary skeleton groundtruth).
inline QuantizedScaleMap binarize_classes(const QuantizedScaleMap& z) {
  QuantizedScaleMap out(z.width(), z.height());
  for (std::size_t i = 0; i < z.size(); ++i) out.data()[i] = z.data()[i] > 0 ? 1 : 0;
  return out;
}

}  // namespace fsds::geometry
