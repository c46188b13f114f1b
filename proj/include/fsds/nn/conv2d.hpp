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

#include <Eigen/Core>

#include "fsds/core/error.hpp"
#include "fsds/nn/layer_params.hpp"
#include "fsds/nn/tensor.hpp"

namespace fsds::nn {

struct ConvGeometry {
  int stride = 1;
  int pad = 0;

  /// Zero padding that keeps the spatial size for stride 1.
  static ConvGeometry same(int kernel) { return {1, (kernel - 1) / 2}; }

  int out_extent(int in, int kernel) const { return (in + 2 * pad - kernel) / stride + 1; }
};

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  LayerParams<T> params;
};

namespace detail {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMatrix<T>>;

// Column matrix (C*k*k) x (Ho*Wo) for one batch item.
template <typename T>
void im2col(const Tensor<T>& in, int n, int k, const ConvGeometry& g, int ho, int wo,
            AlignedVector<T>& cols) {
  const int c_in = in.c(), h = in.h(), w = in.w();
  cols.assign(static_cast<std::size_t>(c_in) * k * k * ho * wo, T{});
  std::size_t row = 0;
  for (int c = 0; c < c_in; ++c) {
    const T* plane = in.plane(n, c);
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        T* dst = cols.data() + row * static_cast<std::size_t>(ho) * wo;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= h) continue;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < w) dst[oy * wo + ox] = plane[iy * w + ix];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const AlignedVector<T>& cols, Tensor<T>& out, int n, int k, const ConvGeometry& g, int ho, int wo) {
  const int c_in = out.c(), h = out.h(), w = out.w();
  std::size_t row = 0;
  for (int c = 0; c < c_in; ++c) {
    T* plane = out.plane(n, c);
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        const T* src = cols.data() + row * static_cast<std::size_t>(ho) * wo;
        for (int oy = 0; oy < ho; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= h) continue;
          for (int ox = 0; ox < wo; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < w) plane[iy * w + ix] += src[oy * wo + ox];
          }
        }
      }
    }
  }
}

template <typename T>
void check_conv(const Tensor<T>& input, const LayerParams<T>& params, const ConvGeometry& g) {
  if (input.c() != params.in_channels())
    throw ShapeMismatch("conv expects " + std::to_string(params.in_channels()) + " input channels, got " +
                        std::to_string(input.c()));
  if (g.stride < 1 || g.pad < 0) throw ShapeMismatch("invalid conv stride/pad");
  if (g.out_extent(input.h(), params.kernel_size()) < 1 || g.out_extent(input.w(), params.kernel_size()) < 1)
    throw ShapeMismatch("conv output would be empty for input " + input.shape().str());
}

}  // namespace detail

/// Cross-correlation plus bias.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const LayerParams<T>& params, const ConvGeometry& g) {
  detail::check_conv(input, params, g);
  const int k = params.kernel_size();
  const int ho = g.out_extent(input.h(), k), wo = g.out_extent(input.w(), k);
  const int o = params.out_channels();
  Tensor<T> out(Shape{input.n(), o, ho, wo});
  const Eigen::Index inner = static_cast<Eigen::Index>(input.c()) * k * k;
  const Eigen::Index pixels = static_cast<Eigen::Index>(ho) * wo;
  detail::ConstMatMap<T> weights(params.kernels.data(), o, inner);
  AlignedVector<T> cols;
  for (int n = 0; n < input.n(); ++n) {
    detail::MatMap<T> result(out.plane(n, 0), o, pixels);
    if (k == 1 && g.stride == 1 && g.pad == 0) {
      detail::ConstMatMap<T> src(input.plane(n, 0), inner, pixels);
      result.noalias() = weights * src;
    } else {
      detail::im2col(input, n, k, g, ho, wo, cols);
      detail::ConstMatMap<T> src(cols.data(), inner, pixels);
      result.noalias() = weights * src;
    }
    if (params.has_bias) {
      for (int c = 0; c < o; ++c) result.row(c).array() += params.biases[c];
    }
  }
  return out;
}

/// Gradients w.r.t. the input and the layer parameters.
template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& grad_out, const Tensor<T>& input, const LayerParams<T>& params,
                             const ConvGeometry& g) {
  detail::check_conv(input, params, g);
  const int k = params.kernel_size();
  const int ho = g.out_extent(input.h(), k), wo = g.out_extent(input.w(), k);
  const int o = params.out_channels();
  if (grad_out.shape() != Shape{input.n(), o, ho, wo})
    throw ShapeMismatch("conv grad_out " + grad_out.shape().str() + " does not match forward output");
  ConvGrads<T> grads{Tensor<T>(input.shape()), params.zeros_like()};
  const Eigen::Index inner = static_cast<Eigen::Index>(input.c()) * k * k;
  const Eigen::Index pixels = static_cast<Eigen::Index>(ho) * wo;
  detail::ConstMatMap<T> weights(params.kernels.data(), o, inner);
  detail::MatMap<T> dweights(grads.params.kernels.data(), o, inner);
  AlignedVector<T> cols;
  AlignedVector<T> dcols;
  const bool pointwise = k == 1 && g.stride == 1 && g.pad == 0;
  for (int n = 0; n < input.n(); ++n) {
    detail::ConstMatMap<T> dout(grad_out.plane(n, 0), o, pixels);
    if (pointwise) {
      detail::ConstMatMap<T> src(input.plane(n, 0), inner, pixels);
      dweights.noalias() += dout * src.transpose();
      detail::MatMap<T> din(grads.input.plane(n, 0), inner, pixels);
      din.noalias() = weights.transpose() * dout;
    } else {
      detail::im2col(input, n, k, g, ho, wo, cols);
      detail::ConstMatMap<T> src(cols.data(), inner, pixels);
      dweights.noalias() += dout * src.transpose();
      dcols.assign(static_cast<std::size_t>(inner * pixels), T{});
      detail::MatMap<T> dsrc(dcols.data(), inner, pixels);
      dsrc.noalias() = weights.transpose() * dout;
      detail::col2im(dcols, grads.input, n, k, g, ho, wo);
    }
    if (params.has_bias) {
      for (int c = 0; c < o; ++c) grads.params.biases[c] += dout.row(c).sum();
    }
  }
  return grads;
}

}  // namespace fsds::nn
