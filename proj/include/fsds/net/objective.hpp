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

#include <vector>

#include "fsds/core/raster.hpp"
#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/loss/class_weights.hpp"
#include "fsds/loss/weighted_softmax_loss.hpp"
#include "fsds/net/model.hpp"

namespace fsds::net {

/// Groundtruth for side output i (1-based) derived from the quantized map z.
inline QuantizedScaleMap side_target(const NetworkConfig& cfg, const QuantizedScaleMap& z, int i) {
  return cfg.supervision == Supervision::kBinary ? geometry::binarize_classes(z)
                                                 : geometry::make_scale_associated_gt(z, i);
}

inline QuantizedScaleMap fused_target(const NetworkConfig& cfg, const QuantizedScaleMap& z) {
  return cfg.supervision == Supervision::kBinary ? geometry::binarize_classes(z) : z;
}

template <typename T>
struct ObjectiveResult {
  loss::LossValue loss;
  ModelGrads<T> grads;
  ForwardResult<T> forward;
};

/// Loss of one (1, C, H, W) image against its quantized scale map, and optionally its gradient.
template <typename T>
ObjectiveResult<T> evaluate_objective(const FsdsModel<T>& model, const nn::Tensor<T>& image,
                                      const QuantizedScaleMap& z, bool with_gradient = true) {
  if (image.n() != 1) throw ShapeMismatch("objective is evaluated one image at a time");
  if (z.width() != image.w() || z.height() != image.h())
    throw ShapeMismatch("groundtruth " + std::to_string(z.width()) + "x" + std::to_string(z.height()) +
                        " does not match image " + std::to_string(image.w()) + "x" + std::to_string(image.h()));
  const auto& cfg = model.config();
  const int m = cfg.side_outputs();
  for (int v : z.values())
    if (v < 0 || v > m) throw ClassOutOfRange("quantized class " + std::to_string(v) + " outside 0.." + std::to_string(m));

  ForwardCache<T> cache;
  ObjectiveResult<T> r;
  r.forward = model.forward(image, with_gradient ? &cache : nullptr);

  ObjectiveGradients<T> up;
  std::vector<double> side;
  for (int i = 1; i <= m; ++i) {
    const auto gt = side_target(cfg, z, i);
    const auto beta = loss::class_weights(gt, cfg.side_classes(i));
    const auto& p = r.forward.stage_probs[static_cast<std::size_t>(i - 1)];
    side.push_back(loss::side_loss(p, gt, beta));
    if (with_gradient) up.stage_activations.push_back(loss::side_loss_gradient(p, gt, beta));
  }
  const auto fgt = fused_target(cfg, z);
  const auto fl = loss::fusion_loss(r.forward.fused_activations, fgt, loss::class_weights(fgt, cfg.fused_classes()));
  r.loss = loss::total_objective(std::move(side), fl.value);
  if (with_gradient) {
    up.fused_activations = fl.gradient;
    r.grads = model.backward(cache, up);
  }
  return r;
}

}  // namespace fsds::net
