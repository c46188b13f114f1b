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

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"
#include "fsds/core/image_io.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/data/synthetic.hpp"
#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/geometry/skeleton.hpp"
#include "fsds/train/trainer.hpp"

namespace fsds::data {

namespace fs = std::filesystem;

/// One manifest row. Paths are relative to the manifest directory. Either the
/// mask or the scale map may be missing, not both.
struct DatasetEntry {
  std::string image;
  std::string mask;
  std::string scale;
  std::string split;
};

struct DatasetManifest {
  std::vector<DatasetEntry> entries;
  nlohmann::json meta = nlohmann::json::object();
};

inline nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json e = nlohmann::json::array();
  for (const auto& x : m.entries) {
    nlohmann::json row = {{"image", x.image}, {"split", x.split}};
    if (!x.mask.empty()) row["mask"] = x.mask;
    if (!x.scale.empty()) row["scale"] = x.scale;
    e.push_back(row);
  }
  return {{"entries", e}, {"meta", m.meta}};
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  net::detail::reject_unknown(j, {"entries", "meta"}, "manifest");
  DatasetManifest m;
  try {
    if (j.contains("meta")) m.meta = j.at("meta");
    for (const auto& row : j.at("entries")) {
      net::detail::reject_unknown(row, {"image", "mask", "scale", "split"}, "manifest entry");
      DatasetEntry e;
      e.image = row.at("image").get<std::string>();
      e.split = row.value("split", std::string("train"));
      e.mask = row.value("mask", std::string());
      e.scale = row.value("scale", std::string());
      if (e.mask.empty() && e.scale.empty())
        throw DataFormat("manifest entry '" + e.image + "' needs a mask or a scale map");
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataFormat(std::string("manifest: ") + e.what());
  }
  return m;
}

inline fs::path manifest_path(const fs::path& dir) { return dir / "manifest.json"; }

inline DatasetManifest read_manifest(const fs::path& dir) {
  std::ifstream is(manifest_path(dir));
  if (!is) throw IOFailure("cannot open " + manifest_path(dir).string() + ": " + std::strerror(errno));
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataFormat(manifest_path(dir).string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

inline void write_manifest(const fs::path& dir, const DatasetManifest& m) {
  auto os = io::detail::open_out(manifest_path(dir));
  os << to_json(m).dump(2) << '\n';
  io::detail::finish(os, manifest_path(dir));
}

inline std::string sample_stem(std::size_t i) {
  std::ostringstream s;
  s << std::setw(4) << std::setfill('0') << i;
  return s.str();
}

/// Writes images/, masks/, scales/ and manifest.json; the first train_count samples form the train split.
inline DatasetManifest write_synthetic_dataset(const fs::path& dir, const std::vector<SyntheticSample>& samples,
                                               const SyntheticSpec& spec) {
  DatasetManifest m;
  m.meta = {{"generator", "synthetic"}, {"spec", to_json(spec)}};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string stem = sample_stem(i);
    DatasetEntry e{"images/" + stem + ".pgm", "masks/" + stem + ".pgm", "scales/" + stem + ".f32map",
                   static_cast<int>(i) < spec.train_count ? "train" : "test"};
    io::write_gray_pgm(dir / e.image, samples[i].image);
    io::write_mask_pgm(dir / e.mask, samples[i].mask);
    io::write_f32map(dir / e.scale, samples[i].scales);
    m.entries.push_back(std::move(e));
  }
  write_manifest(dir, m);
  return m;
}

struct LoadedSample {
  std::string name;
  GrayImage image;
  std::optional<BinaryMask> mask;
  ScaleMap scales;  ///< analytic when the manifest has one, else computed from the mask
};

/// Loads the entries of one split ("" loads every entry).
inline std::vector<LoadedSample> load_split(const fs::path& dir, const std::string& split) {
  const auto m = read_manifest(dir);
  std::vector<LoadedSample> out;
  for (const auto& e : m.entries) {
    if (!split.empty() && e.split != split) continue;
    LoadedSample s;
    s.name = e.image;
    s.image = io::read_gray_pgm(dir / e.image);
    if (!e.mask.empty()) s.mask = io::read_mask_pgm(dir / e.mask);
    s.scales = !e.scale.empty() ? io::read_f32map(dir / e.scale) : geometry::compute_scale_map(*s.mask);
    if (!s.image.same_shape(s.scales) || (s.mask && !s.image.same_shape(*s.mask)))
      throw DataFormat("dataset entry '" + e.image + "': image, mask and scale map sizes differ");
    out.push_back(std::move(s));
  }
  if (out.empty()) throw DataFormat("dataset " + dir.string() + " has no entries in split '" + split + "'");
  return out;
}

/// Quantizes every scale map into a training sample.
inline std::vector<train::TrainSample> to_train_samples(const std::vector<LoadedSample>& in,
                                                        const geometry::ReceptiveFieldSchedule& sched,
                                                        geometry::OverflowPolicy policy,
                                                        geometry::OverflowCounter* counter = nullptr) {
  std::vector<train::TrainSample> out;
  out.reserve(in.size());
  for (const auto& s : in) out.push_back({s.image, geometry::quantize_map(s.scales, sched, policy, counter)});
  return out;
}

}  // namespace fsds::data
