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
#include <span>
#include <vector>

#include "fsds/nn/tensor.hpp"

namespace fsds::loss {

/// Max-shifted softmax of one activation vector.
template <typename T>
std::vector<T> softmax(std::span<const T> a) {
  std::vector<T> p(a.size());
  if (a.empty()) return p;
  const T m = *std::max_element(a.begin(), a.end());
  T sum{};
  for (std::size_t k = 0; k < a.size(); ++k) {
    p[k] = std::exp(a[k] - m);
    sum += p[k];
  }
  for (T& v : p) v /= sum;
  return p;
}

/// Softmax over the channel axis at every pixel of every batch item.
template <typename T>
nn::Tensor<T> softmax_channels(const nn::Tensor<T>& a) {
  nn::Tensor<T> p(a.shape());
  const std::size_t plane = a.shape().plane();
  const int c = a.c();
  for (int n = 0; n < a.n(); ++n) {
    const T* src = a.plane(n, 0);
    T* dst = p.plane(n, 0);
    for (std::size_t j = 0; j < plane; ++j) {
      T m = src[j];
      for (int k = 1; k < c; ++k) m = std::max(m, src[k * plane + j]);
      T sum{};
      for (int k = 0; k < c; ++k) {
        const T e = std::exp(src[k * plane + j] - m);
        dst[k * plane + j] = e;
        sum += e;
      }
      for (int k = 0; k < c; ++k) dst[k * plane + j] /= sum;
    }
  }
  return p;
}

/// Vector-Jacobian product of the channel softmax: given p = softmax(a) and
/// dL/dp, returns dL/da = p * (dL/dp - <dL/dp, p>).
template <typename T>
nn::Tensor<T> softmax_channels_backward(const nn::Tensor<T>& p, const nn::Tensor<T>& grad_p) {
  if (p.shape() != grad_p.shape()) throw ShapeMismatch("softmax backward shape mismatch");
  nn::Tensor<T> g(p.shape());
  const std::size_t plane = p.shape().plane();
  const int c = p.c();
  for (int n = 0; n < p.n(); ++n) {
    const T* pv = p.plane(n, 0);
    const T* gp = grad_p.plane(n, 0);
    T* out = g.plane(n, 0);
    for (std::size_t j = 0; j < plane; ++j) {
      T inner{};
      for (int k = 0; k < c; ++k) inner += gp[k * plane + j] * pv[k * plane + j];
      for (int k = 0; k < c; ++k) out[k * plane + j] = pv[k * plane + j] * (gp[k * plane + j] - inner);
    }
  }
  return g;
}

}  // namespace fsds::loss
