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

#include <stdexcept>
#include <string>

namespace fsds {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or raster dimensions that do not fit together.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A positive scale whose lambda-scaled size reaches the largest receptive field.
class ScaleOverflow : public Error {
 public:
  using Error::Error;
};

/// Groundtruth class label outside the channel range of a score stack.
class ClassOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents, configs or samples.
class DataFormat : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure; the message carries the path and the cause.
class IOFailure : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration value (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsds
