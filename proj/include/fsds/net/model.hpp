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
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fsds/core/error.hpp"
#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/loss/softmax.hpp"
#include "fsds/net/fusion.hpp"
#include "fsds/net/network_config.hpp"
#include "fsds/net/receptive_field.hpp"
#include "fsds/nn/activation.hpp"
#include "fsds/nn/checkpoint.hpp"
#include "fsds/nn/conv2d.hpp"
#include "fsds/nn/layer_params.hpp"
#include "fsds/nn/pooling.hpp"
#include "fsds/nn/upsample.hpp"

namespace fsds::net {

/// Learning-rate multiplier of the fusion weights relative to the base rate.
inline constexpr double kFusionLrMult = 5.0;

/// Constant subtracted from [0, 1] input intensities.
inline constexpr double kInputShift = 0.5;

template <typename T>
struct ForwardResult {
  /// Per side output i: softmax probabilities over side_classes(i), at input resolution.
  std::vector<nn::Tensor<T>> stage_probs;
  nn::Tensor<T> fused_activations;
  nn::Tensor<T> fused_probs;
};

/// Intermediate values kept for the backward pass.
template <typename T>
struct ForwardCache {
  std::vector<nn::Tensor<T>> conv_inputs;
  std::vector<nn::Tensor<T>> conv_outputs;  // after ReLU
  std::vector<nn::PoolResult<T>> pools;     // one per stage with a pool that feeds a later stage
  std::vector<nn::Shape> side_low_shapes;
  std::vector<std::size_t> side_feature_layer;  // conv_outputs index feeding each side head
  ForwardResult<T> result;
};

/// dL/d(stage activations before softmax) and dL/d(fused activations).
template <typename T>
struct ObjectiveGradients {
  std::vector<nn::Tensor<T>> stage_activations;
  nn::Tensor<T> fused_activations;
};

template <typename T>
struct ModelGrads {
  std::vector<nn::LayerParams<T>> layers;
  FusionWeights<T> fusion;

  void accumulate(const ModelGrads& g, T scale = T{1}) {
    for (std::size_t l = 0; l < layers.size(); ++l) layers[l].accumulate(g.layers[l], scale);
    for (std::size_t v = 0; v < fusion.vectors().size(); ++v)
      for (std::size_t i = 0; i < fusion.vectors()[v].size(); ++i)
        fusion.vectors()[v][i] += scale * g.fusion.vectors()[v][i];
  }

  void scale(T s) {
    for (auto& l : layers) {
      l.kernels *= s;
      for (T& b : l.biases) b *= s;
    }
    for (auto& v : fusion.vectors())
      for (T& w : v) w *= s;
  }
};

/// Multi-stage network with scale-associated side outputs and scale-specific fusion.
template <typename T>
class FsdsModel {
 public:
  explicit FsdsModel(NetworkConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    int in = cfg_.input_channels;
    for (std::size_t s = 0; s < cfg_.stages.size(); ++s) {
      const auto& st = cfg_.stages[s];
      for (std::size_t c = 0; c < st.conv_channels.size(); ++c) {
        layers_.emplace_back(st.conv_channels[c], in, st.kernel);
        names_.push_back("conv" + std::to_string(s + 1) + "_" + std::to_string(c + 1));
        in = st.conv_channels[c];
      }
      stage_last_layer_.push_back(layers_.size() - 1);
    }
    for (int i = 1; i <= cfg_.side_outputs(); ++i) {
      const int stage = cfg_.taps[static_cast<std::size_t>(i - 1)];
      const int channels = cfg_.stages[static_cast<std::size_t>(stage - 1)].conv_channels.back();
      side_index_.push_back(layers_.size());
      layers_.emplace_back(cfg_.side_classes(i), channels, 1);
      names_.push_back("side" + std::to_string(i));
    }
    fusion_ = cfg_.supervision == Supervision::kBinary ? FusionWeights<T>::tied(cfg_.side_outputs())
                                                       : FusionWeights<T>::scale_specific(cfg_.side_outputs());
  }

  const NetworkConfig& config() const { return cfg_; }
  int side_outputs() const { return cfg_.side_outputs(); }
  geometry::ReceptiveFieldSchedule schedule() const { return compute_receptive_fields(cfg_); }

  std::vector<nn::LayerParams<T>>& layers() { return layers_; }
  const std::vector<nn::LayerParams<T>>& layers() const { return layers_; }
  const std::vector<std::string>& layer_names() const { return names_; }
  FusionWeights<T>& fusion() { return fusion_; }
  const FusionWeights<T>& fusion() const { return fusion_; }
  nn::LayerParams<T>& side_head(int i) { return layers_[side_index_[static_cast<std::size_t>(i - 1)]]; }
  const nn::LayerParams<T>& side_head(int i) const { return layers_[side_index_[static_cast<std::size_t>(i - 1)]]; }

  /// Backbone: seeded He-normal kernels. Side heads: zero. Fusion: 1/n.
  void initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      if (is_side_layer(l)) {
        layers_[l].kernels.fill(T{});
        std::fill(layers_[l].biases.begin(), layers_[l].biases.end(), T{});
      } else {
        nn::he_init(layers_[l], rng);
      }
    }
    fusion_ = cfg_.supervision == Supervision::kBinary ? FusionWeights<T>::tied(cfg_.side_outputs())
                                                       : FusionWeights<T>::scale_specific(cfg_.side_outputs());
  }

  bool is_side_layer(std::size_t l) const {
    return std::find(side_index_.begin(), side_index_.end(), l) != side_index_.end();
  }

  ModelGrads<T> zero_grads() const {
    ModelGrads<T> g;
    for (const auto& l : layers_) g.layers.push_back(l.zeros_like());
    g.fusion = fusion_.zeros_like();
    return g;
  }

  std::size_t parameter_count() const {
    std::size_t n = fusion_.parameter_count();
    for (const auto& l : layers_) n += l.parameter_count();
    return n;
  }

  /// Forward pass over an (N, C, H, W) batch of [0, 1] images.
  ForwardResult<T> forward(const nn::Tensor<T>& image, ForwardCache<T>* cache = nullptr) const {
    if (image.c() != cfg_.input_channels)
      throw ShapeMismatch("model expects " + std::to_string(cfg_.input_channels) + " input channels, got " +
                          std::to_string(image.c()));
    if (image.h() < 1 || image.w() < 1 || image.n() < 1) throw ShapeMismatch("empty input image");
    ForwardCache<T> local;
    ForwardCache<T>& c = cache ? *cache : local;
    c = ForwardCache<T>{};
    nn::Tensor<T> x = image;
    for (T& v : x.values()) v -= static_cast<T>(kInputShift);
    std::size_t layer = 0;
    int side = 0;
    for (std::size_t s = 0; s < cfg_.stages.size(); ++s) {
      const auto& st = cfg_.stages[s];
      const auto geom = nn::ConvGeometry::same(st.kernel);
      for (std::size_t j = 0; j < st.conv_channels.size(); ++j, ++layer) {
        nn::Tensor<T> z = nn::conv2d_forward(x, layers_[layer], geom);
        if (cache) c.conv_inputs.push_back(std::move(x));
        x = nn::relu_forward(z);
        if (cache) c.conv_outputs.push_back(x);
      }
      if (side < cfg_.side_outputs() && cfg_.taps[static_cast<std::size_t>(side)] == static_cast<int>(s) + 1) {
        const auto& head = layers_[side_index_[static_cast<std::size_t>(side)]];
        nn::Tensor<T> low = nn::conv2d_forward(x, head, nn::ConvGeometry{1, 0});
        if (cache) {
          c.side_low_shapes.push_back(low.shape());
          c.side_feature_layer.push_back(layer - 1);
        }
        c.result.stage_probs.push_back(
            loss::softmax_channels(nn::upsample_bilinear(low, image.h(), image.w())));
        ++side;
      }
      if (st.pool_after && s + 1 < cfg_.stages.size()) {
        auto pooled = nn::maxpool2_forward(x);
        x = pooled.output;
        if (cache) c.pools.push_back(std::move(pooled));
      }
    }
    c.result.fused_activations = fuse(c.result.stage_probs, fusion_);
    c.result.fused_probs = loss::softmax_channels(c.result.fused_activations);
    if (cache) return c.result;
    return std::move(local.result);
  }

  /// Parameter gradients given loss gradients w.r.t. stage and fused activations.
  ModelGrads<T> backward(const ForwardCache<T>& c, const ObjectiveGradients<T>& up) const {
    const int m = cfg_.side_outputs();
    if (static_cast<int>(up.stage_activations.size()) != m) throw ShapeMismatch("expected one gradient per side output");
    if (c.conv_inputs.size() != stage_last_layer_.back() + 1) throw ShapeMismatch("forward cache is incomplete");
    ModelGrads<T> g = zero_grads();

    const auto fg = fuse_backward(up.fused_activations, c.result.stage_probs, fusion_);
    g.fusion = fg.weights;

    // Gradient arriving at each tapped feature map.
    std::vector<nn::Tensor<T>> feature_grads(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const auto si = static_cast<std::size_t>(i);
      nn::Tensor<T> da = loss::softmax_channels_backward(c.result.stage_probs[si], fg.stage_probs[si]);
      da += up.stage_activations[si];
      const nn::Tensor<T> dlow = nn::upsample_bilinear_backward(da, c.side_low_shapes[si]);
      auto hg = nn::conv2d_backward(dlow, c.conv_outputs[c.side_feature_layer[si]], layers_[side_index_[si]],
                                    nn::ConvGeometry{1, 0});
      g.layers[side_index_[si]] = std::move(hg.params);
      feature_grads[si] = std::move(hg.input);
    }

    nn::Tensor<T> grad;  // w.r.t. the output of the current stage
    int pool = static_cast<int>(c.pools.size()) - 1;
    for (int s = static_cast<int>(cfg_.stages.size()) - 1; s >= 0; --s) {
      const auto& st = cfg_.stages[static_cast<std::size_t>(s)];
      const std::size_t last = stage_last_layer_[static_cast<std::size_t>(s)];
      if (st.pool_after && s + 1 < static_cast<int>(cfg_.stages.size())) {
        grad = nn::maxpool2_backward(grad, c.pools[static_cast<std::size_t>(pool--)]);
      } else {
        grad = nn::Tensor<T>(c.conv_outputs[last].shape());
      }
      for (int i = 0; i < m; ++i)
        if (cfg_.taps[static_cast<std::size_t>(i)] == s + 1) grad += feature_grads[static_cast<std::size_t>(i)];
      const auto geom = nn::ConvGeometry::same(st.kernel);
      for (std::size_t j = st.conv_channels.size(); j-- > 0;) {
        const std::size_t l = last - (st.conv_channels.size() - 1 - j);
        const nn::Tensor<T> dz = nn::relu_backward(grad, c.conv_outputs[l]);
        auto cg = nn::conv2d_backward(dz, c.conv_inputs[l], layers_[l], geom);
        g.layers[l] = std::move(cg.params);
        grad = std::move(cg.input);
      }
    }
    return g;
  }

  /// Flat views over every scalar parameter in a fixed order: layer kernels,
  /// layer biases, then fusion vectors.
  std::vector<T*> parameter_pointers() { return pointers(layers_, fusion_); }
  static std::vector<T*> gradient_pointers(ModelGrads<T>& g) { return pointers(g.layers, g.fusion); }

  std::vector<nn::CheckpointEntry<T>> to_checkpoint() const {
    std::vector<nn::CheckpointEntry<T>> out;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& p = layers_[l];
      const auto& s = p.kernels.shape();
      out.push_back({names_[l] + ".weight",
                     {static_cast<std::uint32_t>(s.n), static_cast<std::uint32_t>(s.c),
                      static_cast<std::uint32_t>(s.h), static_cast<std::uint32_t>(s.w)},
                     {p.kernels.values().begin(), p.kernels.values().end()}});
      out.push_back({names_[l] + ".bias", {static_cast<std::uint32_t>(p.biases.size())}, p.biases});
    }
    for (std::size_t v = 0; v < fusion_.vectors().size(); ++v) {
      const auto& vec = fusion_.vectors()[v];
      out.push_back({"fuse.a" + std::to_string(v), {static_cast<std::uint32_t>(vec.size())}, vec});
    }
    return out;
  }

  void load_checkpoint(const std::vector<nn::CheckpointEntry<T>>& entries) {
    auto expected = to_checkpoint();
    if (entries.size() != expected.size())
      throw DataFormat("checkpoint has " + std::to_string(entries.size()) + " entries, model needs " +
                       std::to_string(expected.size()));
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (entries[e].name != expected[e].name || entries[e].dims != expected[e].dims)
        throw DataFormat("checkpoint entry '" + entries[e].name + "' does not match model entry '" +
                         expected[e].name + "'");
    }
    std::size_t e = 0;
    for (auto& p : layers_) {
      std::copy(entries[e].values.begin(), entries[e].values.end(), p.kernels.data());
      p.biases = entries[e + 1].values;
      e += 2;
    }
    for (auto& vec : fusion_.vectors()) vec = entries[e++].values;
  }

 private:
  static std::vector<T*> pointers(std::vector<nn::LayerParams<T>>& layers, FusionWeights<T>& fusion) {
    std::vector<T*> out;
    for (auto& l : layers) {
      for (T& v : l.kernels.values()) out.push_back(&v);
      for (T& v : l.biases) out.push_back(&v);
    }
    for (auto& vec : fusion.vectors())
      for (T& v : vec) out.push_back(&v);
    return out;
  }

  NetworkConfig cfg_;
  std::vector<nn::LayerParams<T>> layers_;
  std::vector<std::string> names_;
  std::vector<std::size_t> stage_last_layer_;
  std::vector<std::size_t> side_index_;
  FusionWeights<T> fusion_;
};

}  // namespace fsds::net
