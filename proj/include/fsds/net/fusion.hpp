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
#include <string>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/nn/tensor.hpp"

namespace fsds::net {

/// Scale-specific fusion weights: class k mixes the class-k maps of stages
/// max(k, 1)..M. In tied mode one vector over all M stages serves every class.
template <typename T>
class FusionWeights {
 public:
  FusionWeights() = default;

  /// M + 1 vectors, vector k of length M - max(k, 1) + 1, each initialised to 1/n.
  static FusionWeights scale_specific(int stages) {
    if (stages < 1) throw ValidationError("fusion needs at least one stage");
    FusionWeights f;
    f.stages_ = stages;
    f.classes_ = stages + 1;
    for (int k = 0; k <= stages; ++k) {
      const int n = stages - std::max(k, 1) + 1;
      f.vectors_.emplace_back(static_cast<std::size_t>(n), T{1} / static_cast<T>(n));
    }
    return f;
  }

  /// One vector over every stage shared by `classes` classes.
  static FusionWeights tied(int stages, int classes = 2) {
    if (stages < 1) throw ValidationError("fusion needs at least one stage");
    FusionWeights f;
    f.stages_ = stages;
    f.classes_ = classes;
    f.tied_ = true;
    f.vectors_.emplace_back(static_cast<std::size_t>(stages), T{1} / static_cast<T>(stages));
    return f;
  }

  int stages() const { return stages_; }
  int classes() const { return classes_; }
  bool is_tied() const { return tied_; }

  /// First stage (1-based) contributing to class k.
  int first_stage(int k) const { return tied_ ? 1 : std::max(k, 1); }

  /// Weight of stage i (1-based) for class k.
  T& weight(int k, int i) { return vectors_[vector_index(k)][static_cast<std::size_t>(i - first_stage(k))]; }
  const T& weight(int k, int i) const {
    return vectors_[vector_index(k)][static_cast<std::size_t>(i - first_stage(k))];
  }

  std::vector<std::vector<T>>& vectors() { return vectors_; }
  const std::vector<std::vector<T>>& vectors() const { return vectors_; }

  FusionWeights zeros_like() const {
    FusionWeights z = *this;
    for (auto& v : z.vectors_) std::fill(v.begin(), v.end(), T{});
    return z;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& v : vectors_) n += v.size();
    return n;
  }

  friend bool operator==(const FusionWeights&, const FusionWeights&) = default;

 private:
  std::size_t vector_index(int k) const {
    if (k < 0 || k >= classes_) throw ShapeMismatch("fusion class " + std::to_string(k) + " out of range");
    return tied_ ? 0u : static_cast<std::size_t>(k);
  }

  int stages_ = 0;
  int classes_ = 0;
  bool tied_ = false;
  std::vector<std::vector<T>> vectors_;
};

namespace detail {

template <typename T>
void check_fusion_inputs(const std::vector<nn::Tensor<T>>& stage_probs, const FusionWeights<T>& a) {
  if (static_cast<int>(stage_probs.size()) != a.stages())
    throw ShapeMismatch("fusion expects " + std::to_string(a.stages()) + " stage stacks, got " +
                        std::to_string(stage_probs.size()));
  const auto& s0 = stage_probs.front().shape();
  for (int i = 1; i <= a.stages(); ++i) {
    const auto& s = stage_probs[static_cast<std::size_t>(i - 1)].shape();
    if (s.n != s0.n || s.h != s0.h || s.w != s0.w) throw ShapeMismatch("fusion stage stacks differ in size");
    for (int k = 0; k < a.classes(); ++k)
      if (i >= a.first_stage(k) && k >= s.c)
        throw ShapeMismatch("stage " + std::to_string(i) + " lacks class " + std::to_string(k));
  }
}

}  // namespace detail

/// f_k = sum_{i >= first_stage(k)} a_k^(i) * Pr_i(k).
template <typename T>
nn::Tensor<T> fuse(const std::vector<nn::Tensor<T>>& stage_probs, const FusionWeights<T>& a) {
  detail::check_fusion_inputs(stage_probs, a);
  const auto& s0 = stage_probs.front().shape();
  nn::Tensor<T> f(nn::Shape{s0.n, a.classes(), s0.h, s0.w});
  const std::size_t plane = s0.plane();
  for (int n = 0; n < s0.n; ++n) {
    for (int k = 0; k < a.classes(); ++k) {
      T* dst = f.plane(n, k);
      for (int i = a.first_stage(k); i <= a.stages(); ++i) {
        const T w = a.weight(k, i);
        const T* src = stage_probs[static_cast<std::size_t>(i - 1)].plane(n, k);
        for (std::size_t j = 0; j < plane; ++j) dst[j] += w * src[j];
      }
    }
  }
  return f;
}

template <typename T>
struct FusionGrads {
  std::vector<nn::Tensor<T>> stage_probs;
  FusionWeights<T> weights;
};

template <typename T>
FusionGrads<T> fuse_backward(const nn::Tensor<T>& grad_f, const std::vector<nn::Tensor<T>>& stage_probs,
                             const FusionWeights<T>& a) {
  detail::check_fusion_inputs(stage_probs, a);
  const auto& s0 = stage_probs.front().shape();
  if (grad_f.shape() != nn::Shape{s0.n, a.classes(), s0.h, s0.w}) throw ShapeMismatch("fusion grad shape mismatch");
  FusionGrads<T> g{{}, a.zeros_like()};
  for (const auto& p : stage_probs) g.stage_probs.emplace_back(p.shape());
  const std::size_t plane = s0.plane();
  for (int n = 0; n < s0.n; ++n) {
    for (int k = 0; k < a.classes(); ++k) {
      const T* gf = grad_f.plane(n, k);
      for (int i = a.first_stage(k); i <= a.stages(); ++i) {
        const auto si = static_cast<std::size_t>(i - 1);
        const T w = a.weight(k, i);
        const T* p = stage_probs[si].plane(n, k);
        T* gp = g.stage_probs[si].plane(n, k);
        T acc{};
        for (std::size_t j = 0; j < plane; ++j) {
          gp[j] += w * gf[j];
          acc += gf[j] * p[j];
        }
        g.weights.weight(k, i) += acc;
      }
    }
  }
  return g;
}

}  // namespace fsds::net
