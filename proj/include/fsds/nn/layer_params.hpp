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
#include <random>
#include <string>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/nn/tensor.hpp"

namespace fsds::nn {

/// Convolution kernels (out, in, kh, kw), per-output biases and the
/// optimiser hints attached to a layer.
template <typename T>
struct LayerParams {
  Tensor<T> kernels;
  std::vector<T> biases;
  double lr_mult = 1.0;
  bool decay = true;
  bool has_bias = true;

  LayerParams() = default;
  LayerParams(int out_channels, int in_channels, int kernel, double lr_multiplier = 1.0,
              bool weight_decay = true, bool bias = true)
      : kernels(Shape{out_channels, in_channels, kernel, kernel}),
        biases(bias ? static_cast<std::size_t>(out_channels) : 0u, T{}),
        lr_mult(lr_multiplier), decay(weight_decay), has_bias(bias) {
    if (kernel < 1 || kernel % 2 == 0) throw ValidationError("kernel size must be odd");
    if (!(lr_multiplier > 0.0)) throw ValidationError("learning-rate multiplier must be positive");
  }

  int out_channels() const { return kernels.n(); }
  int in_channels() const { return kernels.c(); }
  int kernel_size() const { return kernels.h(); }
  std::size_t parameter_count() const { return kernels.size() + biases.size(); }

  /// Gradient buffer with the same layout and zero values.
  LayerParams zeros_like() const {
    LayerParams g = *this;
    g.kernels.fill(T{});
    std::fill(g.biases.begin(), g.biases.end(), T{});
    return g;
  }

  void accumulate(const LayerParams& g, T scale = T{1}) {
    if (g.kernels.shape() != kernels.shape() || g.biases.size() != biases.size())
      throw ShapeMismatch("layer gradient shape mismatch");
    for (std::size_t i = 0; i < kernels.size(); ++i) kernels.data()[i] += scale * g.kernels.data()[i];
    for (std::size_t i = 0; i < biases.size(); ++i) biases[i] += scale * g.biases[i];
  }

  /// Scalar view over kernels then biases, for optimisers and gradient checks.
  T& flat(std::size_t i) { return i < kernels.size() ? kernels.data()[i] : biases[i - kernels.size()]; }
  const T& flat(std::size_t i) const {
    return i < kernels.size() ? kernels.data()[i] : biases[i - kernels.size()];
  }
};

/// He-normal kernels, zero biases.
template <typename T, typename Rng>
void he_init(LayerParams<T>& p, Rng& rng) {
  const double fan_in = static_cast<double>(p.in_channels()) * p.kernel_size() * p.kernel_size();
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
  for (T& v : p.kernels.values()) v = static_cast<T>(dist(rng));
  std::fill(p.biases.begin(), p.biases.end(), T{});
}

}  // namespace fsds::nn
