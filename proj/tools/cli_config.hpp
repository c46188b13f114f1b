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

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fsds/core/error.hpp"

namespace fsds::cli {

/// Settings of one subcommand: the --config file with flag values layered on top.
class Settings {
 public:
  Settings(CLI::App* app, std::set<std::string> keys) : app_(app), keys_(std::move(keys)) {
    app_->add_option("--config", config_path_, "JSON config; flags override its keys");
  }

  /// Adds --<key with dashes> writing `key` into the override layer.
  template <typename T>
  CLI::Option* flag(const std::string& key, const std::string& help) {
    if (!keys_.contains(key)) throw std::logic_error("undeclared key " + key);
    std::string name = "--" + key;
    for (char& c : name)
      if (c == '_') c = '-';
    return app_->add_option_function<T>(name, [this, key](const T& v) { overrides_[key] = v; }, help);
  }

  CLI::Option* toggle(const std::string& key, const std::string& help) {
    std::string name = "--" + key;
    for (char& c : name)
      if (c == '_') c = '-';
    return app_->add_flag_callback(name, [this, key] { overrides_[key] = true; }, help);
  }

  /// Merged settings; unknown config keys are validation errors.
  nlohmann::json resolve() const {
    nlohmann::json j = nlohmann::json::object();
    if (!config_path_.empty()) {
      std::ifstream is(config_path_);
      if (!is) throw IOFailure("cannot open " + config_path_ + ": " + std::strerror(errno));
      try {
        is >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(config_path_ + ": " + e.what());
      }
      if (!j.is_object()) throw ValidationError(config_path_ + ": config must be a JSON object");
      for (const auto& [k, _] : j.items())
        if (!keys_.contains(k)) throw ValidationError(config_path_ + ": unknown key '" + k + "'");
    }
    for (const auto& [k, v] : overrides_.items()) j[k] = v;
    return j;
  }

 private:
  CLI::App* app_;
  std::set<std::string> keys_;
  std::string config_path_;
  nlohmann::json overrides_ = nlohmann::json::object();
};

/// Typed read with a default; type errors become validation errors.
template <typename T>
T get(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("setting '" + key + "': " + e.what());
  }
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ValidationError("missing required setting '" + key + "'");
  return get<T>(j, key, T{});
}

/// Subset of `j` restricted to `keys`.
inline nlohmann::json pick(const nlohmann::json& j, const std::set<std::string>& keys) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : j.items())
    if (keys.contains(k)) out[k] = v;
  return out;
}

}  // namespace fsds::cli
