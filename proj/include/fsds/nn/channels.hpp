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

/// Channels [begin, begin + count) of every batch item.
template <typename T>
Tensor<T> slice_channels(const Tensor<T>& t, int begin, int count) {
  if (begin < 0 || count < 0 || begin + count > t.c())
    throw ShapeMismatch("channel slice [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                        ") out of range for " + t.shape().str());
  Tensor<T> out(Shape{t.n(), count, t.h(), t.w()});
  for (int n = 0; n < t.n(); ++n)
    std::copy_n(t.plane(n, begin), static_cast<std::size_t>(count) * t.shape().plane(), out.plane(n, 0));
  return out;
}

template <typename T>
Tensor<T> concat_channels(const std::vector<Tensor<T>>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat of zero tensors");
  const Shape& s0 = parts.front().shape();
  int channels = 0;
  for (const auto& p : parts) {
    if (p.n() != s0.n || p.h() != s0.h || p.w() != s0.w)
      throw ShapeMismatch("concat spatial mismatch " + p.shape().str() + " vs " + s0.str());
    channels += p.c();
  }
  Tensor<T> out(Shape{s0.n, channels, s0.h, s0.w});
  for (int n = 0; n < s0.n; ++n) {
    int at = 0;
    for (const auto& p : parts) {
      std::copy_n(p.plane(n, 0), static_cast<std::size_t>(p.c()) * s0.plane(), out.plane(n, at));
      at += p.c();
    }
  }
  return out;
}

}  // namespace fsds::nn
