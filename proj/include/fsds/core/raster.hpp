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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsds/core/error.hpp"

namespace fsds {

/// Dense row-major 2-D grid of values with (x, y) addressing.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height),
        values_(static_cast<std::size_t>(checked(width)) *
                    static_cast<std::size_t>(checked(height)),
                fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) { return values_[index(x, y)]; }
  const T& operator()(int x, int y) const { return values_[index(x, y)]; }

  /// Value at (x, y), or `outside` when the coordinate is off the grid.
  T at_or(int x, int y, T outside) const {
    return contains(x, y) ? (*this)(x, y) : outside;
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

  template <typename U>
  bool same_shape(const Raster<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster& a, const Raster& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.values_ == b.values_;
  }

 private:
  static int checked(int n) {
    if (n < 0) throw ShapeMismatch("raster dimensions must be non-negative");
    return n;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

/// Foreground/background mask, 1 = foreground.
using BinaryMask = Raster<std::uint8_t>;
/// Per-pixel maximal-disk diameter in pixels; zero off the skeleton.
using ScaleMap = Raster<float>;
/// Per-pixel quantized scale class in {0..M}.
using QuantizedScaleMap = Raster<int>;
/// Grayscale image with intensities in [0, 1].
using GrayImage = Raster<float>;

template <typename A, typename B>
void require_same_shape(const Raster<A>& a, const Raster<B>& b,
                        const std::string& what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ShapeMismatch(what + ": " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " +
                        std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
  }
}

/// Indicator of strictly positive values.
template <typename T>
BinaryMask positive_mask(const Raster<T>& r) {
  BinaryMask out(r.width(), r.height());
  for (std::size_t i = 0; i < r.size(); ++i) out.data()[i] = r.data()[i] > T{} ? 1 : 0;
  return out;
}

template <typename T>
std::size_t count_positive(const Raster<T>& r) {
  return static_cast<std::size_t>(
      std::count_if(r.values().begin(), r.values().end(), [](T v) { return v > T{}; }));
}

}  // namespace fsds
