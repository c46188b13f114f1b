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

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "fsds/core/binary_io.hpp"
#include "fsds/core/error.hpp"
#include "fsds/core/image_io.hpp"

namespace fsds::nn {

// Layout (all integers u32 little-endian):
//   "FSDSCKPT" version precision_bits entry_count
//   per entry: name_len name_bytes rank dims[rank] values[prod(dims)]
// Values are f32 or f64 little-endian according to precision_bits.

inline constexpr char kCheckpointMagic[8] = {'F', 'S', 'D', 'S', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
struct CheckpointEntry {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<T> values;
};

template <typename T>
constexpr std::uint32_t precision_bits() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? 32u : 64u;
}

template <typename T>
void write_checkpoint(std::ostream& os, const std::vector<CheckpointEntry<T>>& entries) {
  os.write(kCheckpointMagic, 8);
  io::write_u32(os, kCheckpointVersion);
  io::write_u32(os, precision_bits<T>());
  io::write_u32(os, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    std::size_t count = 1;
    for (auto d : e.dims) count *= d;
    if (count != e.values.size()) throw ShapeMismatch("checkpoint entry '" + e.name + "' has inconsistent dims");
    io::write_u32(os, static_cast<std::uint32_t>(e.name.size()));
    os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    io::write_u32(os, static_cast<std::uint32_t>(e.dims.size()));
    for (auto d : e.dims) io::write_u32(os, d);
    for (T v : e.values) {
      if constexpr (std::is_same_v<T, float>) {
        io::write_f32(os, v);
      } else {
        io::write_f64(os, v);
      }
    }
  }
}

/// Reads a checkpoint of either precision, converting values to T.
template <typename T>
std::vector<CheckpointEntry<T>> read_checkpoint(std::istream& is, const std::string& what = "checkpoint") {
  char magic[8];
  io::read_exact(is, magic, 8, what + " header");
  if (std::memcmp(magic, kCheckpointMagic, 8) != 0) throw DataFormat(what + ": bad checkpoint magic");
  const std::uint32_t version = io::read_u32(is, what);
  if (version != kCheckpointVersion) throw DataFormat(what + ": unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t bits = io::read_u32(is, what);
  if (bits != 32 && bits != 64) throw DataFormat(what + ": unsupported precision " + std::to_string(bits));
  const std::uint32_t count = io::read_u32(is, what);
  std::vector<CheckpointEntry<T>> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    CheckpointEntry<T> e;
    const std::uint32_t len = io::read_u32(is, what);
    if (len > 4096) throw DataFormat(what + ": implausible entry name length");
    e.name.resize(len);
    io::read_exact(is, e.name.data(), len, what + " entry name");
    const std::uint32_t rank = io::read_u32(is, what);
    if (rank > 8) throw DataFormat(what + ": implausible rank for '" + e.name + "'");
    std::size_t n = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      e.dims.push_back(io::read_u32(is, what));
      n *= e.dims.back();
    }
    if (n > (std::size_t{1} << 31)) throw DataFormat(what + ": implausible entry size for '" + e.name + "'");
    e.values.resize(n);
    for (auto& v : e.values)
      v = static_cast<T>(bits == 32 ? static_cast<double>(io::read_f32(is, what)) : io::read_f64(is, what));
    entries.push_back(std::move(e));
  }
  return entries;
}

template <typename T>
void save_checkpoint(const std::filesystem::path& path, const std::vector<CheckpointEntry<T>>& entries) {
  auto os = io::detail::open_out(path);
  write_checkpoint(os, entries);
  io::detail::finish(os, path);
}

template <typename T>
std::vector<CheckpointEntry<T>> load_checkpoint(const std::filesystem::path& path) {
  auto is = io::detail::open_in(path);
  return read_checkpoint<T>(is, path.string());
}

}  // namespace fsds::nn
