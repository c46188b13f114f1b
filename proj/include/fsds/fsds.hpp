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

#include "fsds/core/error.hpp"
#include "fsds/core/image_io.hpp"
#include "fsds/core/raster.hpp"
#include "fsds/geometry/augment.hpp"
#include "fsds/geometry/distance_transform.hpp"
#include "fsds/geometry/scale_quantization.hpp"
#include "fsds/geometry/skeleton.hpp"
#include "fsds/nn/activation.hpp"
#include "fsds/nn/channels.hpp"
#include "fsds/nn/checkpoint.hpp"
#include "fsds/nn/conv2d.hpp"
#include "fsds/nn/layer_params.hpp"
#include "fsds/nn/pooling.hpp"
#include "fsds/nn/tensor.hpp"
#include "fsds/nn/upsample.hpp"
#include "fsds/loss/class_weights.hpp"
#include "fsds/loss/softmax.hpp"
#include "fsds/loss/weighted_softmax_loss.hpp"
#include "fsds/net/fusion.hpp"
#include "fsds/net/image_tensor.hpp"
#include "fsds/net/model.hpp"
#include "fsds/net/network_config.hpp"
#include "fsds/net/objective.hpp"
#include "fsds/net/receptive_field.hpp"
#include "fsds/train/sgd.hpp"
#include "fsds/train/trainer.hpp"
#include "fsds/infer/nms.hpp"
#include "fsds/infer/predict.hpp"
#include "fsds/eval/cross_eval.hpp"
#include "fsds/eval/matching.hpp"
#include "fsds/eval/pr_curve.hpp"
#include "fsds/apps/objectness.hpp"
#include "fsds/apps/part_mask.hpp"
#include "fsds/apps/segments.hpp"
#include "fsds/data/dataset.hpp"
#include "fsds/data/synthetic.hpp"
