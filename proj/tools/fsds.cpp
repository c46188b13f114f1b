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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli_config.hpp"
#include "fsds/fsds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fsds::cli {
namespace {

json read_json_file(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw IOFailure("cannot open " + p.string() + ": " + std::strerror(errno));
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw DataFormat(p.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& p, const json& j) {
  auto os = io::detail::open_out(p);
  os << j.dump(2) << '\n';
  io::detail::finish(os, p);
}

net::NetworkConfig network_from_setting(const json& s) {
  net::NetworkConfig cfg = net::NetworkConfig::toy();
  try {
    if (s.contains("network")) {
      const auto& n = s.at("network");
      cfg = n.is_string() ? net::network_config_from_json(json{{"preset", n}}) : net::network_config_from_json(n);
    }
    if (s.contains("supervision")) {
      const auto sup = get<std::string>(s, "supervision", "scale");
      if (sup == "scale") {
        cfg.supervision = net::Supervision::kScaleAssociated;
      } else if (sup == "binary") {
        cfg.supervision = net::Supervision::kBinary;
      } else {
        throw ValidationError("supervision must be \"scale\" or \"binary\"");
      }
    }
    if (s.contains("lambda")) cfg.lambda = get<double>(s, "lambda", cfg.lambda);
  } catch (const DataFormat& e) {
    throw ValidationError(e.what());
  }
  cfg.validate();
  return cfg;
}

// Model directories hold network.json, train.json and model.ckpt.
template <typename T>
void save_model_dir(const fs::path& dir, const net::FsdsModel<T>& model, const train::TrainConfig& tc) {
  write_json_file(dir / "network.json", net::to_json(model.config()));
  write_json_file(dir / "train.json", train::to_json(tc));
  nn::save_checkpoint(dir / "model.ckpt", model.to_checkpoint());
}

template <typename T>
net::FsdsModel<T> load_model_dir(const fs::path& dir) {
  net::FsdsModel<T> m(net::network_config_from_json(read_json_file(dir / "network.json")));
  m.load_checkpoint(nn::load_checkpoint<T>(dir / "model.ckpt"));
  return m;
}

net::Precision model_precision(const fs::path& dir) {
  const auto tc = train::train_config_from_json(read_json_file(dir / "train.json"));
  return tc.precision;
}

/// Runs fn.template operator()<T>() for the precision scalar type.
template <typename F>
void with_precision(net::Precision p, F&& fn) {
  if (p == net::Precision::kF64) {
    fn.template operator()<double>();
  } else {
    fn.template operator()<float>();
  }
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------- gen-data

const std::set<std::string> kGenKeys = {"out", "width", "height", "families", "shapes_per_image", "half_width_min",
                                        "half_width_max", "count", "train_count", "noise", "seed"};

void run_gen_data(const json& s) {
  const fs::path out = require<std::string>(s, "out");
  data::SyntheticSpec spec;
  try {
    std::set<std::string> keys = kGenKeys;
    keys.erase("out");
    spec = data::synthetic_spec_from_json(pick(s, keys));
  } catch (const DataFormat& e) {
    throw ValidationError(e.what());
  }
  spec.validate();
  const auto samples = data::generate_synthetic(spec);
  data::write_synthetic_dataset(out, samples, spec);
  std::cout << json{{"out", out.string()}, {"count", samples.size()}, {"train", spec.train_count},
                    {"test", spec.count - spec.train_count}}.dump()
            << '\n';
}

// ----------------------------------------------------------------- make-gt

const std::set<std::string> kMakeGtKeys = {"masks", "out", "network", "lambda", "lenient"};

void run_make_gt(const json& s) {
  const fs::path masks = require<std::string>(s, "masks");
  const fs::path out = require<std::string>(s, "out");
  const auto sched = net::compute_receptive_fields(network_from_setting(s));
  const auto policy = get<bool>(s, "lenient", false) ? geometry::OverflowPolicy::kLenient
                                                      : geometry::OverflowPolicy::kStrict;
  if (!fs::is_directory(masks)) throw IOFailure("mask directory " + masks.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(masks))
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataFormat("no .pgm masks in " + masks.string());
  geometry::OverflowCounter counter;
  for (const auto& f : files) {
    const auto mask = io::read_mask_pgm(f);
    const auto scales = geometry::compute_scale_map(mask);
    QuantizedScaleMap z;
    try {
      z = geometry::quantize_map(scales, sched, policy, &counter);
    } catch (const ScaleOverflow& e) {
      throw ScaleOverflow(f.string() + ": " + e.what());
    }
    io::write_f32map(out / "scales" / (f.stem().string() + ".f32map"), scales);
    io::write_class_pgm(out / "quantized" / (f.stem().string() + ".pgm"), z);
  }
  std::cout << json{{"masks", files.size()}, {"clamped", counter.clamped}}.dump() << '\n';
}

// ------------------------------------------------------------------- train

const std::set<std::string> kTrainConfigKeys = {"batch_size", "base_lr", "momentum", "weight_decay",
                                                "fusion_lr_mult", "max_iterations", "seed", "checkpoint_every",
                                                "precision", "augment", "log_every"};

std::set<std::string> train_keys() {
  std::set<std::string> k = kTrainConfigKeys;
  k.insert({"data", "out", "split", "network", "supervision", "lambda", "lenient"});
  return k;
}

void run_train(const json& s) {
  const fs::path dir = require<std::string>(s, "data");
  const fs::path out = require<std::string>(s, "out");
  const auto net_cfg = network_from_setting(s);
  train::TrainConfig tc;
  try {
    tc = train::train_config_from_json(pick(s, kTrainConfigKeys));
  } catch (const DataFormat& e) {
    throw ValidationError(e.what());
  }
  const auto policy = get<bool>(s, "lenient", false) ? geometry::OverflowPolicy::kLenient
                                                      : geometry::OverflowPolicy::kStrict;
  const auto loaded = data::load_split(dir, get<std::string>(s, "split", "train"));
  geometry::OverflowCounter counter;
  const auto samples = data::to_train_samples(loaded, net::compute_receptive_fields(net_cfg), policy, &counter);
  fs::create_directories(out);
  with_precision(tc.precision, [&]<typename T>() {
    net::FsdsModel<T> model(net_cfg);
    model.initialize(tc.seed);
    std::ofstream log(out / "train_log.jsonl");
    if (!log) throw IOFailure("cannot open " + (out / "train_log.jsonl").string() + ": " + std::strerror(errno));
    train::TrainHooks hooks;
    hooks.log = &log;
    hooks.checkpoint = [&](std::uint64_t it) {
      if (it != static_cast<std::uint64_t>(tc.max_iterations))
        nn::save_checkpoint(out / ("model_" + std::to_string(it) + ".ckpt"), model.to_checkpoint());
    };
    const auto entries = train::train(model, samples, tc, hooks);
    save_model_dir(out, model, tc);
    std::cout << json{{"out", out.string()},
                      {"iterations", entries.size()},
                      {"final_loss", entries.empty() ? 0.0 : entries.back().total},
                      {"clamped", counter.clamped}}
                     .dump()
              << '\n';
  });
}

// ------------------------------------------------------------------- infer

const std::set<std::string> kInferKeys = {"model", "data", "split", "out", "threshold"};

void run_infer(const json& s) {
  const fs::path model_dir = require<std::string>(s, "model");
  const fs::path dir = require<std::string>(s, "data");
  const fs::path out = require<std::string>(s, "out");
  const double t = get<double>(s, "threshold", 0.5);
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
  const auto samples = data::load_split(dir, get<std::string>(s, "split", "test"));
  with_precision(model_precision(model_dir), [&]<typename T>() {
    const auto model = load_model_dir<T>(model_dir);
    json preds = json::array();
    for (const auto& smp : samples) {
      const auto p = infer::predict(model, smp.image);
      const auto thin = infer::nms_thin(p.response);
      const std::string stem = stem_of(smp.name);
      json row = {{"image", smp.name},
                  {"response", "response/" + stem + ".f32map"},
                  {"thinned", "thinned/" + stem + ".f32map"},
                  {"binary", "binary/" + stem + ".pgm"}};
      io::write_f32map(out / row["response"].get<std::string>(), p.response);
      io::write_f32map(out / row["thinned"].get<std::string>(), thin);
      io::write_mask_pgm(out / row["binary"].get<std::string>(), infer::threshold(thin, t));
      if (!p.scales.empty()) {
        row["scale"] = "scale/" + stem + ".f32map";
        io::write_f32map(out / row["scale"].get<std::string>(), p.scales);
      }
      preds.push_back(row);
    }
    write_json_file(out / "predictions.json", json{{"model", model_dir.string()}, {"predictions", preds}});
    std::cout << json{{"out", out.string()}, {"images", samples.size()}}.dump() << '\n';
  });
}

// -------------------------------------------------------------------- eval

const std::set<std::string> kEvalKeys = {"pred", "data", "split", "tolerance", "relative", "thresholds",
                                         "report", "csv", "models", "test_sets"};

eval::MatchConfig match_config(const json& s) {
  eval::MatchConfig m;
  m.tolerance = get<double>(s, "tolerance", m.tolerance);
  m.relative = get<bool>(s, "relative", m.relative);
  m.validate();
  return m;
}

void run_cross_eval(const json& s, const eval::MatchConfig& mc) {
  std::vector<eval::TaggedDataset> sets;
  try {
    for (const auto& t : s.at("test_sets")) {
      net::detail::reject_unknown(t, {"tag", "data", "split"}, "test set");
      sets.push_back({t.at("tag").get<std::string>(),
                      data::load_split(t.at("data").get<std::string>(), t.value("split", std::string("test")))});
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("test_sets: ") + e.what());
  }
  eval::CrossReport rep;
  try {
    for (const auto& m : s.at("models")) {
      net::detail::reject_unknown(m, {"tag", "model"}, "model entry");
      const std::string tag = m.at("tag").get<std::string>();
      const fs::path dir = m.at("model").get<std::string>();
      with_precision(model_precision(dir), [&]<typename T>() {
        const auto model = load_model_dir<T>(dir);
        const auto part = eval::cross_eval<T>({{tag, &model}}, sets, mc);
        rep.rows.insert(rep.rows.end(), part.rows.begin(), part.rows.end());
        rep.train_tags.push_back(tag);
        rep.test_tags = part.test_tags;
      });
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("models: ") + e.what());
  }
  const json j = eval::to_json(rep);
  if (s.contains("report")) write_json_file(get<std::string>(s, "report", ""), j);
  std::cout << j.dump() << '\n';
}

void run_eval(const json& s) {
  const auto mc = match_config(s);
  if (s.contains("models") || s.contains("test_sets")) {
    if (!s.contains("models") || !s.contains("test_sets"))
      throw ValidationError("cross evaluation needs both 'models' and 'test_sets'");
    run_cross_eval(s, mc);
    return;
  }
  const fs::path pred = require<std::string>(s, "pred");
  const fs::path dir = require<std::string>(s, "data");
  const auto samples = data::load_split(dir, get<std::string>(s, "split", "test"));
  const auto index = read_json_file(pred / "predictions.json");
  std::map<std::string, std::string> thinned;
  try {
    for (const auto& row : index.at("predictions"))
      thinned[row.at("image").get<std::string>()] = row.at("thinned").get<std::string>();
  } catch (const json::exception& e) {
    throw DataFormat((pred / "predictions.json").string() + ": " + e.what());
  }
  std::vector<infer::SkeletonResponse> responses;
  for (const auto& smp : samples) {
    const auto it = thinned.find(smp.name);
    if (it == thinned.end()) throw DataFormat("no prediction for " + smp.name + " in " + pred.string());
    responses.push_back(io::read_f32map(pred / it->second));
  }
  const auto curve = eval::pr_curve(responses, eval::skeleton_groundtruth(samples),
                                    eval::default_thresholds(get<int>(s, "thresholds", 100)), mc);
  json report = eval::to_json(curve);
  report["images"] = samples.size();
  report["tolerance"] = mc.tolerance;
  report["relative"] = mc.relative;
  if (s.contains("report")) write_json_file(get<std::string>(s, "report", ""), report);
  if (s.contains("csv")) {
    const fs::path csv = get<std::string>(s, "csv", "");
    auto os = io::detail::open_out(csv);
    eval::write_curve_csv(os, curve);
    io::detail::finish(os, csv);
  }
  std::cout << json{{"max_f", curve.best_f}, {"threshold", curve.best_threshold}, {"images", samples.size()}}.dump()
            << '\n';
}

// ----------------------------------------------------------------- partseg

const std::set<std::string> kPartKeys = {"model", "data", "split", "out", "threshold", "min_length"};

std::vector<BinaryMask> masks_from_skeleton(const ScaleMap& scales, const Raster<float>& response,
                                            std::size_t min_length) {
  std::vector<BinaryMask> out;
  for (const auto& seg : apps::extract_segments(positive_mask(scales), scales, response))
    if (seg.size() >= min_length) out.push_back(apps::disk_union(seg, scales.width(), scales.height()));
  return out;
}

void run_partseg(const json& s) {
  const fs::path model_dir = require<std::string>(s, "model");
  const fs::path dir = require<std::string>(s, "data");
  const fs::path out = require<std::string>(s, "out");
  const double t = get<double>(s, "threshold", 0.5);
  const int min_length = get<int>(s, "min_length", 3);
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
  if (min_length < 1) throw ValidationError("min_length must be >= 1");
  const auto samples = data::load_split(dir, get<std::string>(s, "split", "test"));
  with_precision(model_precision(model_dir), [&]<typename T>() {
    const auto model = load_model_dir<T>(model_dir);
    if (model.config().supervision != net::Supervision::kScaleAssociated)
      throw ValidationError("part segmentation needs a scale-associated model");
    std::vector<apps::PartImage> images;
    fs::create_directories(out / "masks");
    std::ofstream parts(out / "parts.jsonl");
    if (!parts) throw IOFailure("cannot open " + (out / "parts.jsonl").string() + ": " + std::strerror(errno));
    for (const auto& smp : samples) {
      const auto p = infer::predict(model, smp.image);
      const auto thin = infer::nms_thin(p.response);
      const auto skel = infer::threshold(thin, t);
      apps::PartImage im;
      int k = 0;
      for (const auto& seg : apps::extract_segments(skel, p.scales, p.response)) {
        if (seg.size() < static_cast<std::size_t>(min_length)) continue;
        auto pm = apps::reconstruct_part_mask(seg, smp.image.width(), smp.image.height());
        const std::string rel = "masks/" + stem_of(smp.name) + "_" + std::to_string(k++) + ".pgm";
        io::write_mask_pgm(out / rel, pm.mask);
        parts << json{{"image", smp.name}, {"mask", rel}, {"confidence", pm.confidence}}.dump() << '\n';
        im.preds.push_back(std::move(pm));
      }
      Raster<float> ones(smp.image.width(), smp.image.height(), 1.0f);
      im.gts = masks_from_skeleton(smp.scales, ones, static_cast<std::size_t>(min_length));
      images.push_back(std::move(im));
    }
    const auto curve = apps::part_seg_eval(images);
    json report = eval::to_json(curve);
    report["images"] = samples.size();
    write_json_file(out / "report.json", report);
    std::cout << json{{"max_f", curve.best_f}, {"threshold", curve.best_threshold}}.dump() << '\n';
  });
}

// ----------------------------------------------------------- rescore-boxes

const std::set<std::string> kRescoreKeys = {"boxes", "parts", "masks", "out", "epsilon"};

void run_rescore(const json& s) {
  const fs::path boxes_path = require<std::string>(s, "boxes");
  const fs::path out = require<std::string>(s, "out");
  const double eps = get<double>(s, "epsilon", apps::kObjectnessEpsilon);
  if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
  if (s.contains("parts") == s.contains("masks")) throw ValidationError("give exactly one of 'parts' or 'masks'");

  // Masks keyed by image name; "" applies to every box.
  std::map<std::string, std::vector<BinaryMask>> masks;
  if (s.contains("parts")) {
    const fs::path parts = get<std::string>(s, "parts", "");
    std::ifstream is(parts);
    if (!is) throw IOFailure("cannot open " + parts.string() + ": " + std::strerror(errno));
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      try {
        const auto j = json::parse(line);
        masks[j.at("image").get<std::string>()].push_back(
            io::read_mask_pgm(parts.parent_path() / j.at("mask").get<std::string>()));
      } catch (const json::exception& e) {
        throw DataFormat(parts.string() + ": " + e.what());
      }
    }
  } else {
    const fs::path dir = get<std::string>(s, "masks", "");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) masks[""].push_back(io::read_mask_pgm(f));
  }

  std::ifstream is(boxes_path);
  if (!is) throw IOFailure("cannot open " + boxes_path.string() + ": " + std::strerror(errno));
  auto os = io::detail::open_out(out);
  std::string line;
  std::size_t n = 0;
  static const std::vector<BinaryMask> none;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataFormat(boxes_path.string() + ": " + e.what());
    }
    const auto box = apps::box_from_json(j);
    std::string key;
    if (!s.contains("masks")) key = box.extra.value("image", std::string());
    const auto it = masks.find(key);
    const auto& ms = it == masks.end() ? none : it->second;
    os << apps::to_json(box, apps::objectness_score(box, ms, eps)).dump() << '\n';
    ++n;
  }
  io::detail::finish(os, out);
  std::cout << json{{"boxes", n}, {"out", out.string()}}.dump() << '\n';
}

}  // namespace
}  // namespace fsds::cli

int main(int argc, char** argv) {
  using namespace fsds::cli;
  CLI::App app{"Scale-associated skeleton extraction"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  Settings gen_s(gen, kGenKeys);
  gen_s.flag<std::string>("out", "output directory");
  gen_s.flag<int>("width", "image width");
  gen_s.flag<int>("height", "image height");
  gen_s.flag<std::vector<std::string>>("families", "capsule, rectangle, t-junction, composite");
  gen_s.flag<int>("shapes_per_image", "shapes per image");
  gen_s.flag<double>("half_width_min", "smallest half width (pixels)");
  gen_s.flag<double>("half_width_max", "largest half width (pixels)");
  gen_s.flag<int>("count", "number of images");
  gen_s.flag<int>("train_count", "images in the train split");
  gen_s.flag<double>("noise", "Gaussian noise sigma");
  gen_s.flag<std::uint64_t>("seed", "random seed");

  auto* gt = app.add_subcommand("make-gt", "Scale maps and quantized maps from binary masks");
  Settings gt_s(gt, kMakeGtKeys);
  gt_s.flag<std::string>("masks", "directory of PGM masks");
  gt_s.flag<std::string>("out", "output directory");
  gt_s.flag<std::string>("network", "network preset (toy, vgg16)");
  gt_s.flag<double>("lambda", "quantization margin");
  gt_s.toggle("lenient", "clamp overflowing scales instead of failing");

  auto* tr = app.add_subcommand("train", "Train a model");
  Settings tr_s(tr, train_keys());
  tr_s.flag<std::string>("data", "dataset directory");
  tr_s.flag<std::string>("out", "model output directory");
  tr_s.flag<std::string>("split", "split to train on");
  tr_s.flag<std::string>("network", "network preset (toy, vgg16)");
  tr_s.flag<std::string>("supervision", "scale or binary");
  tr_s.flag<double>("lambda", "quantization margin");
  tr_s.toggle("lenient", "clamp overflowing scales instead of failing");
  tr_s.flag<int>("batch_size", "mini-batch size");
  tr_s.flag<double>("base_lr", "base learning rate");
  tr_s.flag<double>("momentum", "momentum");
  tr_s.flag<double>("weight_decay", "weight decay");
  tr_s.flag<double>("fusion_lr_mult", "fusion learning-rate multiplier");
  tr_s.flag<int>("max_iterations", "iterations");
  tr_s.flag<std::uint64_t>("seed", "random seed");
  tr_s.flag<int>("checkpoint_every", "checkpoint cadence (0: final only)");
  tr_s.flag<std::string>("precision", "f32 or f64");
  tr_s.toggle("augment", "random rotation and flip per sample");
  tr_s.flag<int>("log_every", "log cadence");

  auto* inf = app.add_subcommand("infer", "Predict skeleton and scale maps");
  Settings inf_s(inf, kInferKeys);
  inf_s.flag<std::string>("model", "model directory");
  inf_s.flag<std::string>("data", "dataset directory");
  inf_s.flag<std::string>("split", "split to predict");
  inf_s.flag<std::string>("out", "output directory");
  inf_s.flag<double>("threshold", "threshold for the binary maps");

  auto* ev = app.add_subcommand("eval", "Precision/recall evaluation");
  Settings ev_s(ev, kEvalKeys);
  ev_s.flag<std::string>("pred", "infer output directory");
  ev_s.flag<std::string>("data", "dataset directory");
  ev_s.flag<std::string>("split", "split to evaluate");
  ev_s.flag<double>("tolerance", "match tolerance");
  ev_s.flag<bool>("relative", "tolerance is a fraction of the diagonal");
  ev_s.flag<int>("thresholds", "number of thresholds");
  ev_s.flag<std::string>("report", "report JSON path");
  ev_s.flag<std::string>("csv", "curve CSV path");

  auto* ps = app.add_subcommand("partseg", "Part masks from predicted skeleton segments");
  Settings ps_s(ps, kPartKeys);
  ps_s.flag<std::string>("model", "model directory");
  ps_s.flag<std::string>("data", "dataset directory");
  ps_s.flag<std::string>("split", "split to segment");
  ps_s.flag<std::string>("out", "output directory");
  ps_s.flag<double>("threshold", "skeleton threshold");
  ps_s.flag<int>("min_length", "shortest segment kept (pixels)");

  auto* rb = app.add_subcommand("rescore-boxes", "Rescore boxes with part masks");
  Settings rb_s(rb, kRescoreKeys);
  rb_s.flag<std::string>("boxes", "JSON-lines boxes");
  rb_s.flag<std::string>("parts", "parts.jsonl from partseg");
  rb_s.flag<std::string>("masks", "directory of PGM masks applied to every box");
  rb_s.flag<std::string>("out", "output JSON lines");
  rb_s.flag<double>("epsilon", "denominator offset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) run_gen_data(gen_s.resolve());
    if (gt->parsed()) run_make_gt(gt_s.resolve());
    if (tr->parsed()) run_train(tr_s.resolve());
    if (inf->parsed()) run_infer(inf_s.resolve());
    if (ev->parsed()) run_eval(ev_s.resolve());
    if (ps->parsed()) run_partseg(ps_s.resolve());
    if (rb->parsed()) run_rescore(rb_s.resolve());
  } catch (const fsds::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
