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

#include "fsds/core/raster.hpp"
#include "fsds/nn/tensor.hpp"

namespace fsds::net {

/// Gray image as a (1, 1, H, W) tensor.
template <typename T>
nn::Tensor<T> image_tensor(const GrayImage& img) {
  nn::Tensor<T> t(nn::Shape{1, 1, img.height(), img.width()});
  for (std::size_t i = 0; i < img.size(); ++i) t.data()[i] = static_cast<T>(img.data()[i]);
  return t;
}

/// Channel c of batch item n as a raster.
template <typename T>
Raster<float> channel_raster(const nn::Tensor<T>& t, int c, int n = 0) {
  Raster<float> r(t.w(), t.h());
  const T* p = t.plane(n, c);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = static_cast<float>(p[i]);
  return r;
}

}  // namespace fsds::net
