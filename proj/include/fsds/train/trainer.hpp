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
#include <filesystem>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/geometry/augment.hpp"
#include "fsds/net/image_tensor.hpp"
#include "fsds/net/network_config.hpp"
#include "fsds/net/objective.hpp"
#include "fsds/train/sgd.hpp"

namespace fsds::train {

struct TrainConfig {
  int batch_size = 10;
  double base_lr = 1e-6;
  double momentum = 0.9;
  double weight_decay = 2e-4;
  double fusion_lr_mult = net::kFusionLrMult;
  int max_iterations = 20000;
  std::uint64_t seed = 0;
  int checkpoint_every = 0;  ///< 0: final checkpoint only
  net::Precision precision = net::Precision::kF32;
  bool augment = false;  ///< random 90-degree rotation and flip per drawn sample
  int log_every = 1;

  SgdConfig sgd() const { return {base_lr, momentum, weight_decay, fusion_lr_mult}; }

  void validate() const {
    if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
    if (!(base_lr >= 0.0) || !(momentum >= 0.0) || !(weight_decay >= 0.0) || !(fusion_lr_mult >= 0.0))
      throw ValidationError("learning rates, momentum and weight decay must be >= 0");
    if (max_iterations < 0) throw ValidationError("max_iterations must be >= 0");
    if (checkpoint_every < 0) throw ValidationError("checkpoint_every must be >= 0");
    if (log_every < 1) throw ValidationError("log_every must be >= 1");
  }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  return {{"batch_size", c.batch_size},
          {"base_lr", c.base_lr},
          {"momentum", c.momentum},
          {"weight_decay", c.weight_decay},
          {"fusion_lr_mult", c.fusion_lr_mult},
          {"max_iterations", c.max_iterations},
          {"seed", c.seed},
          {"checkpoint_every", c.checkpoint_every},
          {"precision", c.precision == net::Precision::kF64 ? "f64" : "f32"},
          {"augment", c.augment},
          {"log_every", c.log_every}};
}

/// Applies the keys present in `j` on top of `base`; unknown keys are rejected.
inline TrainConfig train_config_from_json(const nlohmann::json& j, TrainConfig base = {}) {
  net::detail::reject_unknown(j,
                              {"batch_size", "base_lr", "momentum", "weight_decay", "fusion_lr_mult",
                               "max_iterations", "seed", "checkpoint_every", "precision", "augment", "log_every"},
                              "train config");
  TrainConfig c = base;
  try {
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<int>();
    if (j.contains("base_lr")) c.base_lr = j.at("base_lr").get<double>();
    if (j.contains("momentum")) c.momentum = j.at("momentum").get<double>();
    if (j.contains("weight_decay")) c.weight_decay = j.at("weight_decay").get<double>();
    if (j.contains("fusion_lr_mult")) c.fusion_lr_mult = j.at("fusion_lr_mult").get<double>();
    if (j.contains("max_iterations")) c.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("checkpoint_every")) c.checkpoint_every = j.at("checkpoint_every").get<int>();
    if (j.contains("augment")) c.augment = j.at("augment").get<bool>();
    if (j.contains("log_every")) c.log_every = j.at("log_every").get<int>();
    if (j.contains("precision")) {
      const auto p = j.at("precision").get<std::string>();
      if (p == "f32") {
        c.precision = net::Precision::kF32;
      } else if (p == "f64") {
        c.precision = net::Precision::kF64;
      } else {
        throw DataFormat("precision must be \"f32\" or \"f64\", got \"" + p + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataFormat(std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

/// One training example: an image and its quantized scale map.
struct TrainSample {
  GrayImage image;
  QuantizedScaleMap z;
};

struct LogEntry {
  std::uint64_t iteration = 0;
  std::vector<double> side;
  double fusion = 0.0;
  double total = 0.0;
};

inline nlohmann::json to_json(const LogEntry& e) {
  return {{"iteration", e.iteration}, {"side", e.side}, {"fusion", e.fusion}, {"total", e.total}};
}

struct TrainHooks {
  std::ostream* log = nullptr;  ///< JSON lines
  /// Called with the iteration count every checkpoint_every iterations and once at the end.
  std::function<void(std::uint64_t)> checkpoint;
};

namespace detail {

inline void check_samples(const std::vector<TrainSample>& data, int max_class) {
  if (data.empty()) throw DataFormat("training set is empty");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data[i];
    if (s.image.empty() || !s.image.same_shape(s.z))
      throw DataFormat("training sample " + std::to_string(i) + ": image and scale map sizes differ");
    for (int v : s.z.values())
      if (v < 0 || v > max_class)
        throw DataFormat("training sample " + std::to_string(i) + ": quantized class " + std::to_string(v) +
                         " outside 0.." + std::to_string(max_class));
  }
}

}  // namespace detail

/// Mini-batch momentum SGD on the joint objective. The gradient of a batch is the
/// mean of its per-sample gradients. Deterministic given the seed and precision.
template <typename T>
std::vector<LogEntry> train(net::FsdsModel<T>& model, const std::vector<TrainSample>& data, const TrainConfig& cfg,
                            const TrainHooks& hooks = {}) {
  cfg.validate();
  if (cfg.max_iterations == 0) return {};
  detail::check_samples(data, model.side_outputs());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::uniform_int_distribution<int> pick_rot(0, 3);
  std::uniform_int_distribution<int> pick_flip(0, 2);

  std::vector<nn::Tensor<T>> tensors;
  tensors.reserve(data.size());
  for (const auto& s : data) tensors.push_back(net::image_tensor<T>(s.image));

  auto state = OptimizerState<T>::for_model(model);
  const auto sgd = cfg.sgd();
  const T inv_batch = static_cast<T>(1.0 / cfg.batch_size);
  std::vector<LogEntry> log;

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    auto grads = model.zero_grads();
    LogEntry entry;
    entry.iteration = static_cast<std::uint64_t>(it);
    entry.side.assign(static_cast<std::size_t>(model.side_outputs()), 0.0);
    for (int b = 0; b < cfg.batch_size; ++b) {
      const std::size_t idx = pick(rng);
      net::ObjectiveResult<T> r;
      if (cfg.augment) {
        const int rot = 90 * pick_rot(rng);
        const auto fl = static_cast<geometry::Flip>(pick_flip(rng));
        const auto img = geometry::flip(geometry::rotate(data[idx].image, rot), fl);
        const auto z = geometry::flip(geometry::rotate(data[idx].z, rot), fl);
        r = net::evaluate_objective(model, net::image_tensor<T>(img), z);
      } else {
        r = net::evaluate_objective(model, tensors[idx], data[idx].z);
      }
      grads.accumulate(r.grads, inv_batch);
      for (std::size_t i = 0; i < entry.side.size(); ++i) entry.side[i] += r.loss.side[i] / cfg.batch_size;
      entry.fusion += r.loss.fusion / cfg.batch_size;
      entry.total += r.loss.total / cfg.batch_size;
    }
    sgd_step(model, grads, state, sgd);
    if (hooks.log && (it % cfg.log_every == 0 || it == cfg.max_iterations)) *hooks.log << to_json(entry).dump() << '\n';
    log.push_back(std::move(entry));
    if (hooks.checkpoint && cfg.checkpoint_every > 0 && it % cfg.checkpoint_every == 0 && it != cfg.max_iterations)
      hooks.checkpoint(static_cast<std::uint64_t>(it));
  }
  if (hooks.checkpoint) hooks.checkpoint(static_cast<std::uint64_t>(cfg.max_iterations));
  return log;
}

}  // namespace fsds::train
