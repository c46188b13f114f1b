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

#include "fsds/nn/tensor.hpp"

namespace fsds::nn {

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& x) {
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] = x.data()[i] > T{} ? x.data()[i] : T{};
  return y;
}

/// Uses the forward output: gradient passes where the output is positive.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const Tensor<T>& output) {
  if (grad_out.shape() != output.shape()) throw ShapeMismatch("relu backward shape mismatch");
  Tensor<T> g(output.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = output.data()[i] > T{} ? grad_out.data()[i] : T{};
  return g;
}

}  // namespace fsds::nn
