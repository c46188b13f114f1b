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

#include "fsds/core/error.hpp"
#include "fsds/net/model.hpp"

namespace fsds::train {

struct SgdConfig {
  double base_lr = 1e-6;
  double momentum = 0.9;
  double weight_decay = 2e-4;
  double fusion_lr_mult = net::kFusionLrMult;
};

template <typename T>
struct OptimizerState {
  net::ModelGrads<T> velocity;
  std::uint64_t iteration = 0;

  static OptimizerState for_model(const net::FsdsModel<T>& model) { return {model.zero_grads(), 0}; }
};

namespace detail {

template <typename T>
void momentum_update(T& p, T& v, T g, double mu, double lr, double wd) {
  v = static_cast<T>(mu * static_cast<double>(v) -
                     lr * (static_cast<double>(g) + wd * static_cast<double>(p)));
  p += v;
}

template <typename T>
void require_mirror(const net::FsdsModel<T>& model, const net::ModelGrads<T>& g, const char* what) {
  bool ok = g.layers.size() == model.layers().size() &&
            g.fusion.vectors().size() == model.fusion().vectors().size();
  for (std::size_t l = 0; ok && l < g.layers.size(); ++l)
    ok = g.layers[l].kernels.shape() == model.layers()[l].kernels.shape() &&
         g.layers[l].biases.size() == model.layers()[l].biases.size();
  for (std::size_t v = 0; ok && v < g.fusion.vectors().size(); ++v)
    ok = g.fusion.vectors()[v].size() == model.fusion().vectors()[v].size();
  if (!ok) throw ShapeMismatch(std::string(what) + " do not mirror the model parameters");
}

}  // namespace detail

/// v <- mu v - lr_layer (g + wd p); p <- p + v. Decay touches kernel weights only.
template <typename T>
void sgd_step(net::FsdsModel<T>& model, const net::ModelGrads<T>& grads, OptimizerState<T>& state,
              const SgdConfig& cfg) {
  detail::require_mirror(model, grads, "gradients");
  detail::require_mirror(model, state.velocity, "velocity buffers");
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    auto& p = model.layers()[l];
    auto& v = state.velocity.layers[l];
    const auto& g = grads.layers[l];
    const double lr = cfg.base_lr * p.lr_mult;
    const double wd = p.decay ? cfg.weight_decay : 0.0;
    auto pk = p.kernels.values();
    auto vk = v.kernels.values();
    auto gk = g.kernels.values();
    for (std::size_t i = 0; i < pk.size(); ++i) detail::momentum_update(pk[i], vk[i], gk[i], cfg.momentum, lr, wd);
    for (std::size_t i = 0; i < p.biases.size(); ++i)
      detail::momentum_update(p.biases[i], v.biases[i], g.biases[i], cfg.momentum, lr, 0.0);
  }
  const double flr = cfg.base_lr * cfg.fusion_lr_mult;
  auto& fv = model.fusion().vectors();
  for (std::size_t k = 0; k < fv.size(); ++k)
    for (std::size_t i = 0; i < fv[k].size(); ++i)
      detail::momentum_update(fv[k][i], state.velocity.fusion.vectors()[k][i], grads.fusion.vectors()[k][i],
                              cfg.momentum, flr, 0.0);
  ++state.iteration;
}

}  // namespace fsds::train
