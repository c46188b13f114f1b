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

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"
#include "fsds/data/dataset.hpp"
#include "fsds/eval/pr_curve.hpp"
#include "fsds/infer/nms.hpp"
#include "fsds/infer/predict.hpp"
#include "fsds/net/model.hpp"

namespace fsds::eval {

/// Thinned skeleton responses of a model over a set of samples.
template <typename T>
std::vector<infer::SkeletonResponse> thinned_responses(const net::FsdsModel<T>& model,
                                                       const std::vector<data::LoadedSample>& samples) {
  std::vector<infer::SkeletonResponse> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(infer::nms_thin(infer::predict_skeleton_map(model, s.image)));
  return out;
}

inline std::vector<BinaryMask> skeleton_groundtruth(const std::vector<data::LoadedSample>& samples) {
  std::vector<BinaryMask> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(positive_mask(s.scales));
  return out;
}

template <typename T>
PRCurve evaluate_model(const net::FsdsModel<T>& model, const std::vector<data::LoadedSample>& test,
                       const MatchConfig& cfg = {}, const std::vector<double>& thresholds = default_thresholds()) {
  if (test.empty()) throw DataFormat("evaluation set is empty");
  return pr_curve(thinned_responses(model, test), skeleton_groundtruth(test), thresholds, cfg);
}

struct CrossRow {
  std::string train;
  std::string test;
  double max_f = 0.0;
  double threshold = 0.0;
};

struct CrossReport {
  std::vector<CrossRow> rows;
  std::vector<std::string> train_tags;
  std::vector<std::string> test_tags;

  /// Every (train, test) pair present exactly once.
  bool complete() const {
    if (rows.size() != train_tags.size() * test_tags.size()) return false;
    for (const auto& a : train_tags)
      for (const auto& b : test_tags) {
        int n = 0;
        for (const auto& r : rows) n += r.train == a && r.test == b;
        if (n != 1) return false;
      }
    return true;
  }
};

template <typename T>
struct TaggedModel {
  std::string tag;
  const net::FsdsModel<T>* model = nullptr;
};

struct TaggedDataset {
  std::string tag;
  std::vector<data::LoadedSample> samples;
};

/// Max F of every model on every test set.
template <typename T>
CrossReport cross_eval(const std::vector<TaggedModel<T>>& models, const std::vector<TaggedDataset>& datasets,
                       const MatchConfig& cfg = {}) {
  if (models.empty() || datasets.empty()) throw DataFormat("cross evaluation needs models and datasets");
  CrossReport rep;
  for (const auto& d : datasets) {
    if (d.samples.empty()) throw DataFormat("test set '" + d.tag + "' is empty");
    rep.test_tags.push_back(d.tag);
  }
  for (const auto& m : models) {
    rep.train_tags.push_back(m.tag);
    for (const auto& d : datasets) {
      const auto c = evaluate_model(*m.model, d.samples, cfg);
      rep.rows.push_back({m.tag, d.tag, c.best_f, c.best_threshold});
    }
  }
  return rep;
}

inline nlohmann::json to_json(const CrossReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"train", x.train}, {"test", x.test}, {"max_f", x.max_f}, {"threshold", x.threshold}});
  return {{"rows", rows}, {"train_tags", r.train_tags}, {"test_tags", r.test_tags}, {"complete", r.complete()}};
}

}  // namespace fsds::eval
