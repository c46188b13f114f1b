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
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/nn/tensor.hpp"

namespace fsds::nn {

/// Fixed bilinear interpolation weights along one axis (pixel-centre aligned,
/// clamped at the borders). Each output sample mixes two input samples.
struct LinearTaps {
  std::vector<int> lo, hi;
  std::vector<double> w_hi;

  LinearTaps(int in, int out) : lo(out), hi(out), w_hi(out) {
    const double scale = static_cast<double>(in) / out;
    for (int i = 0; i < out; ++i) {
      const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, in - 1.0);
      lo[i] = static_cast<int>(src);
      hi[i] = std::min(lo[i] + 1, in - 1);
      w_hi[i] = src - lo[i];
    }
  }
};

template <typename T>
Tensor<T> upsample_bilinear(const Tensor<T>& in, int out_h, int out_w) {
  if (out_h < in.h() || out_w < in.w()) throw ShapeMismatch("upsample target smaller than input");
  if (out_h == in.h() && out_w == in.w()) return in;
  const LinearTaps ty(in.h(), out_h), tx(in.w(), out_w);
  Tensor<T> out(Shape{in.n(), in.c(), out_h, out_w});
  std::vector<T> row(static_cast<std::size_t>(out_w));
  for (int n = 0; n < in.n(); ++n) {
    for (int c = 0; c < in.c(); ++c) {
      const T* src = in.plane(n, c);
      T* dst = out.plane(n, c);
      for (int y = 0; y < out_h; ++y) {
        const T* r0 = src + static_cast<std::size_t>(ty.lo[y]) * in.w();
        const T* r1 = src + static_cast<std::size_t>(ty.hi[y]) * in.w();
        const T wy = static_cast<T>(ty.w_hi[y]);
        for (int x = 0; x < out_w; ++x) {
          const T wx = static_cast<T>(tx.w_hi[x]);
          const T top = (T{1} - wx) * r0[tx.lo[x]] + wx * r0[tx.hi[x]];
          const T bot = (T{1} - wx) * r1[tx.lo[x]] + wx * r1[tx.hi[x]];
          dst[static_cast<std::size_t>(y) * out_w + x] = (T{1} - wy) * top + wy * bot;
        }
      }
    }
  }
  return out;
}

/// Exact adjoint of upsample_bilinear for an input of shape `in_shape`.
template <typename T>
Tensor<T> upsample_bilinear_backward(const Tensor<T>& grad_out, const Shape& in_shape) {
  if (grad_out.n() != in_shape.n || grad_out.c() != in_shape.c)
    throw ShapeMismatch("upsample backward batch/channel mismatch");
  if (grad_out.h() == in_shape.h && grad_out.w() == in_shape.w) return grad_out;
  const int out_h = grad_out.h(), out_w = grad_out.w();
  const LinearTaps ty(in_shape.h, out_h), tx(in_shape.w, out_w);
  Tensor<T> g(in_shape);
  for (int n = 0; n < in_shape.n; ++n) {
    for (int c = 0; c < in_shape.c; ++c) {
      const T* src = grad_out.plane(n, c);
      T* dst = g.plane(n, c);
      for (int y = 0; y < out_h; ++y) {
        T* r0 = dst + static_cast<std::size_t>(ty.lo[y]) * in_shape.w;
        T* r1 = dst + static_cast<std::size_t>(ty.hi[y]) * in_shape.w;
        const T wy = static_cast<T>(ty.w_hi[y]);
        for (int x = 0; x < out_w; ++x) {
          const T v = src[static_cast<std::size_t>(y) * out_w + x];
          const T wx = static_cast<T>(tx.w_hi[x]);
          r0[tx.lo[x]] += (T{1} - wy) * (T{1} - wx) * v;
          r0[tx.hi[x]] += (T{1} - wy) * wx * v;
          r1[tx.lo[x]] += wy * (T{1} - wx) * v;
          r1[tx.hi[x]] += wy * wx * v;
        }
      }
    }
  }
  return g;
}

}  // namespace fsds::nn
