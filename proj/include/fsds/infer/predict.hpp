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

#include <string>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/net/image_tensor.hpp"
#include "fsds/net/model.hpp"

namespace fsds::infer {

using SkeletonResponse = Raster<float>;
using PredictedScaleMap = Raster<float>;

/// y = 1 - Pr(z = 0) from a fused probability stack.
template <typename T>
SkeletonResponse skeleton_response(const nn::Tensor<T>& fused_probs, int item = 0) {
  if (fused_probs.c() < 2) throw ShapeMismatch("fused stack needs at least two classes");
  SkeletonResponse r(fused_probs.w(), fused_probs.h());
  const T* p0 = fused_probs.plane(item, 0);
  for (std::size_t j = 0; j < r.size(); ++j) r.data()[j] = static_cast<float>(T{1} - p0[j]);
  return r;
}

/// s = sum_{i>=1} Pr(z = i) r_i from a fused probability stack with M + 1 classes.
template <typename T>
PredictedScaleMap scale_from_probs(const nn::Tensor<T>& fused_probs, const geometry::ReceptiveFieldSchedule& sched,
                                   int item = 0) {
  if (fused_probs.c() != sched.stages() + 1)
    throw ShapeMismatch("scale prediction needs " + std::to_string(sched.stages() + 1) + " fused classes, got " +
                        std::to_string(fused_probs.c()));
  PredictedScaleMap s(fused_probs.w(), fused_probs.h(), 0.0f);
  for (int i = 1; i <= sched.stages(); ++i) {
    const T* p = fused_probs.plane(item, i);
    const double r = sched.field(i);
    for (std::size_t j = 0; j < s.size(); ++j) s.data()[j] += static_cast<float>(static_cast<double>(p[j]) * r);
  }
  return s;
}

template <typename T>
SkeletonResponse predict_skeleton_map(const net::FsdsModel<T>& model, const GrayImage& image) {
  return skeleton_response(model.forward(net::image_tensor<T>(image)).fused_probs);
}

template <typename T>
PredictedScaleMap predict_scale_map(const net::FsdsModel<T>& model, const GrayImage& image,
                                    const geometry::ReceptiveFieldSchedule& sched) {
  return scale_from_probs(model.forward(net::image_tensor<T>(image)).fused_probs, sched);
}

struct Prediction {
  SkeletonResponse response;
  PredictedScaleMap scales;  ///< empty for binary supervision
};

/// One forward pass giving both maps.
template <typename T>
Prediction predict(const net::FsdsModel<T>& model, const GrayImage& image) {
  const auto fwd = model.forward(net::image_tensor<T>(image));
  Prediction p;
  p.response = skeleton_response(fwd.fused_probs);
  if (model.config().supervision == net::Supervision::kScaleAssociated)
    p.scales = scale_from_probs(fwd.fused_probs, model.schedule());
  return p;
}

/// Indicator(response > t).
inline BinaryMask threshold(const SkeletonResponse& r, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
  BinaryMask m(r.width(), r.height(), 0);
  for (std::size_t j = 0; j < r.size(); ++j) m.data()[j] = r.data()[j] > t ? 1 : 0;
  return m;
}

}  // namespace fsds::infer
