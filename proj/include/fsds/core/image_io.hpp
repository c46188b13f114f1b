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
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fsds/core/binary_io.hpp"
#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"

namespace fsds::io {

namespace detail {

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IOFailure("cannot open " + path.string() + " for reading: " + std::strerror(errno));
  return is;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IOFailure("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  return os;
}

inline void finish(std::ostream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IOFailure("write failed for " + path.string());
}

// Next whitespace-delimited header token, skipping '#' comments.
inline std::string pnm_token(std::istream& is) {
  std::string tok;
  int c = is.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
    } else if (std::isspace(c)) {
      if (!tok.empty()) break;
    } else {
      tok.push_back(static_cast<char>(c));
    }
    c = is.get();
  }
  return tok;
}

inline int pnm_int(std::istream& is, const std::string& what) {
  const std::string tok = pnm_token(is);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 0) throw DataFormat("");
    return v;
  } catch (const std::exception&) {
    throw DataFormat("bad PGM header field '" + tok + "' in " + what);
  }
}

}  // namespace detail

/// Raw 8/16-bit samples of a binary PGM (P5) plus its maxval.
struct PgmData {
  Raster<std::uint16_t> samples;
  int maxval = 255;
};

inline PgmData read_pgm_raw(std::istream& is, const std::string& what) {
  if (detail::pnm_token(is) != "P5") throw DataFormat(what + ": not a binary PGM (P5)");
  const int w = detail::pnm_int(is, what);
  const int h = detail::pnm_int(is, what);
  const int maxval = detail::pnm_int(is, what);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
    throw DataFormat(what + ": invalid PGM dimensions or maxval");
  PgmData out{Raster<std::uint16_t>(w, h), maxval};
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::string buf(out.samples.size() * bytes_per, '\0');
  read_exact(is, buf.data(), buf.size(), what + " pixel data");
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    if (bytes_per == 1) {
      out.samples.data()[i] = static_cast<unsigned char>(buf[i]);
    } else {
      out.samples.data()[i] = static_cast<std::uint16_t>(
          (static_cast<unsigned char>(buf[2 * i]) << 8) | static_cast<unsigned char>(buf[2 * i + 1]));
    }
  }
  return out;
}

inline PgmData read_pgm_raw(const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  return read_pgm_raw(is, path.string());
}

/// Writes 8-bit samples; values are clamped to [0, 255].
template <typename T>
void write_pgm_bytes(const std::filesystem::path& path, const Raster<T>& r) {
  auto os = detail::open_out(path);
  os << "P5\n" << r.width() << " " << r.height() << "\n255\n";
  std::string buf(r.size(), '\0');
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = std::clamp(static_cast<double>(r.data()[i]), 0.0, 255.0);
    buf[i] = static_cast<char>(static_cast<unsigned char>(v));
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  detail::finish(os, path);
}

/// Mask pixels above half of maxval are foreground.
inline BinaryMask read_mask_pgm(const std::filesystem::path& path) {
  const PgmData p = read_pgm_raw(path);
  BinaryMask m(p.samples.width(), p.samples.height());
  for (std::size_t i = 0; i < m.size(); ++i)
    m.data()[i] = 2 * static_cast<int>(p.samples.data()[i]) > p.maxval ? 1 : 0;
  return m;
}

inline void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& m) {
  Raster<std::uint8_t> bytes(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) bytes.data()[i] = m.data()[i] ? 255 : 0;
  write_pgm_bytes(path, bytes);
}

inline GrayImage read_gray_pgm(const std::filesystem::path& path) {
  const PgmData p = read_pgm_raw(path);
  GrayImage img(p.samples.width(), p.samples.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    img.data()[i] = static_cast<float>(p.samples.data()[i]) / static_cast<float>(p.maxval);
  return img;
}

inline void write_gray_pgm(const std::filesystem::path& path, const GrayImage& img) {
  Raster<float> bytes(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    bytes.data()[i] = std::round(std::clamp(img.data()[i], 0.0f, 1.0f) * 255.0f);
  write_pgm_bytes(path, bytes);
}

/// Quantized scale classes stored as raw gray levels 0..M.
inline void write_class_pgm(const std::filesystem::path& path, const QuantizedScaleMap& z) {
  write_pgm_bytes(path, z);
}

inline QuantizedScaleMap read_class_pgm(const std::filesystem::path& path) {
  const PgmData p = read_pgm_raw(path);
  QuantizedScaleMap z(p.samples.width(), p.samples.height());
  for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] = p.samples.data()[i];
  return z;
}

// ".f32map": "F32M", u32 width, u32 height, width*height little-endian f32, row-major.
inline constexpr char kF32MapMagic[4] = {'F', '3', '2', 'M'};

inline void write_f32map(std::ostream& os, const Raster<float>& r) {
  os.write(kF32MapMagic, 4);
  write_u32(os, static_cast<std::uint32_t>(r.width()));
  write_u32(os, static_cast<std::uint32_t>(r.height()));
  for (float v : r.values()) write_f32(os, v);
}

inline void write_f32map(const std::filesystem::path& path, const Raster<float>& r) {
  auto os = detail::open_out(path);
  write_f32map(os, r);
  detail::finish(os, path);
}

inline Raster<float> read_f32map(std::istream& is, const std::string& what) {
  char magic[4];
  read_exact(is, magic, 4, what + " header");
  if (std::memcmp(magic, kF32MapMagic, 4) != 0) throw DataFormat(what + ": bad F32M magic");
  const std::uint32_t w = read_u32(is, what);
  const std::uint32_t h = read_u32(is, what);
  if (w == 0 || h == 0 || w > (1u << 15) || h > (1u << 15))
    throw DataFormat(what + ": implausible f32map dimensions");
  Raster<float> r(static_cast<int>(w), static_cast<int>(h));
  for (float& v : r.values()) v = read_f32(is, what);
  return r;
}

inline Raster<float> read_f32map(const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  return read_f32map(is, path.string());
}

}  // namespace fsds::io
