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

#include "fsds/nn/tensor.hpp"

namespace fsds::nn {

template <typename T>
struct PoolResult {
  Tensor<T> output;
  /// Flat input offset of the selected element for every output element.
  std::vector<std::size_t> argmax;
  Shape input_shape;
};

/// 2x2 stride-2 max pooling. Odd extents are covered by a final partial
/// window (equivalent to replicating the last row/column).
template <typename T>
PoolResult<T> maxpool2_forward(const Tensor<T>& in) {
  const int ho = (in.h() + 1) / 2, wo = (in.w() + 1) / 2;
  PoolResult<T> r{Tensor<T>(Shape{in.n(), in.c(), ho, wo}), {}, in.shape()};
  r.argmax.resize(r.output.size());
  std::size_t o = 0;
  for (int n = 0; n < in.n(); ++n) {
    for (int c = 0; c < in.c(); ++c) {
      for (int oy = 0; oy < ho; ++oy) {
        for (int ox = 0; ox < wo; ++ox, ++o) {
          std::size_t best = in.offset(n, c, 2 * oy, 2 * ox);
          for (int dy = 0; dy < 2; ++dy) {
            for (int dx = 0; dx < 2; ++dx) {
              const int y = 2 * oy + dy, x = 2 * ox + dx;
              if (y >= in.h() || x >= in.w()) continue;
              const std::size_t idx = in.offset(n, c, y, x);
              if (in.data()[idx] > in.data()[best]) best = idx;
            }
          }
          r.argmax[o] = best;
          r.output.data()[o] = in.data()[best];
        }
      }
    }
  }
  return r;
}

template <typename T>
Tensor<T> maxpool2_backward(const Tensor<T>& grad_out, const PoolResult<T>& fwd) {
  if (grad_out.shape() != fwd.output.shape()) throw ShapeMismatch("maxpool backward shape mismatch");
  Tensor<T> g(fwd.input_shape);
  for (std::size_t i = 0; i < grad_out.size(); ++i) g.data()[fwd.argmax[i]] += grad_out.data()[i];
  return g;
}

}  // namespace fsds::nn
