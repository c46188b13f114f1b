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
#include <limits>
#include <string>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/loss/class_weights.hpp"
#include "fsds/loss/softmax.hpp"
#include "fsds/nn/tensor.hpp"

namespace fsds::loss {

namespace detail {

template <typename T>
void check_stack(const nn::Tensor<T>& stack, int item, const QuantizedScaleMap& gt, const ClassWeights& beta) {
  if (item < 0 || item >= stack.n()) throw ShapeMismatch("batch item out of range");
  if (stack.h() != gt.height() || stack.w() != gt.width())
    throw ShapeMismatch("score stack " + stack.shape().str() + " vs groundtruth " + std::to_string(gt.width()) +
                        "x" + std::to_string(gt.height()));
  if (beta.classes() != stack.c())
    throw ShapeMismatch("class weights cover " + std::to_string(beta.classes()) + " classes, stack has " +
                        std::to_string(stack.c()));
  for (int z : gt.values())
    if (z < 0 || z >= stack.c())
      throw ClassOutOfRange("groundtruth class " + std::to_string(z) + " but the stack has " +
                            std::to_string(stack.c()) + " channels");
}

}  // namespace detail

/// Class-balanced negative log-likelihood averaged over all pixels:
/// -(1/|X|) sum_j beta[z_j] log Pr_j(z_j).
template <typename T>
double side_loss(const nn::Tensor<T>& probs, const QuantizedScaleMap& gt, const ClassWeights& beta, int item = 0) {
  detail::check_stack(probs, item, gt, beta);
  const std::size_t plane = probs.shape().plane();
  const T* p = probs.plane(item, 0);
  double sum = 0.0;
  for (std::size_t j = 0; j < plane; ++j) {
    const int z = gt.data()[j];
    const double b = beta[z];
    if (b == 0.0) continue;
    const double pr = std::max(static_cast<double>(p[static_cast<std::size_t>(z) * plane + j]),
                               std::numeric_limits<double>::min());
    sum -= b * std::log(pr);
  }
  return sum / static_cast<double>(plane);
}

/// d(side_loss)/d(activation) at every pixel and class:
/// -(1/|X|) * beta[z_j] * (1[z_j == l] - Pr_j(l)).
template <typename T>
nn::Tensor<T> side_loss_gradient(const nn::Tensor<T>& probs, const QuantizedScaleMap& gt, const ClassWeights& beta,
                                 int item = 0) {
  detail::check_stack(probs, item, gt, beta);
  const std::size_t plane = probs.shape().plane();
  const int c = probs.c();
  nn::Tensor<T> g(nn::Shape{1, c, probs.h(), probs.w()});
  const T* p = probs.plane(item, 0);
  T* out = g.plane(0, 0);
  const double inv = 1.0 / static_cast<double>(plane);
  for (std::size_t j = 0; j < plane; ++j) {
    const int z = gt.data()[j];
    const double b = beta[z];
    for (int l = 0; l < c; ++l) {
      const double ind = l == z ? 1.0 : 0.0;
      out[static_cast<std::size_t>(l) * plane + j] =
          static_cast<T>(-inv * b * (ind - static_cast<double>(p[static_cast<std::size_t>(l) * plane + j])));
    }
  }
  return g;
}

template <typename T>
struct LossAndGradient {
  double value = 0.0;
  nn::Tensor<T> gradient;  ///< w.r.t. the activations that were fed to the softmax
  nn::Tensor<T> probs;
};

/// Fusion loss on fused activations f: the weighted form above applied to softmax(f).
template <typename T>
LossAndGradient<T> fusion_loss(const nn::Tensor<T>& fused_activations, const QuantizedScaleMap& z,
                               const ClassWeights& beta, int item = 0) {
  nn::Tensor<T> one = fused_activations;
  if (fused_activations.n() != 1) {
    if (item < 0 || item >= fused_activations.n()) throw ShapeMismatch("batch item out of range");
    one = nn::Tensor<T>(nn::Shape{1, fused_activations.c(), fused_activations.h(), fused_activations.w()});
    std::copy_n(fused_activations.plane(item, 0), one.size(), one.data());
  }
  LossAndGradient<T> r;
  r.probs = softmax_channels(one);
  r.value = side_loss(r.probs, z, beta);
  r.gradient = side_loss_gradient(r.probs, z, beta);
  return r;
}

/// Per-stage side losses, the fusion loss and their weighted total.
struct LossValue {
  std::vector<double> side;
  double fusion = 0.0;
  double total = 0.0;
};

inline LossValue total_objective(std::vector<double> side_losses, double fusion, double side_weight = 1.0) {
  LossValue v{std::move(side_losses), fusion, 0.0};
  for (double s : v.side) v.total += side_weight * s;
  v.total += fusion;
  return v;
}

}  // namespace fsds::loss
