// Copyright 2026 The handlabel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "json.hpp"
#include "toml.hpp"

namespace handlabel::config {
namespace {

using nlohmann::json;

double as_number(std::string_view key, const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  fail(ErrorCode::kParse, "config key " + std::string(key) + " needs a number");
}

int as_int(std::string_view key, const Value& v) {
  const double d = as_number(key, v);
  if (d != std::floor(d)) {
    fail(ErrorCode::kParse,
         "config key " + std::string(key) + " needs an integer");
  }
  return static_cast<int>(d);
}

const std::string& as_string(std::string_view key, const Value& v) {
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  fail(ErrorCode::kParse, "config key " + std::string(key) + " needs a string");
}

void apply_toml(PipelineConfig& config, const toml::table& table,
                const std::string& prefix) {
  for (const auto& [k, node] : table) {
    const std::string key =
        prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
    if (const toml::table* t = node.as_table()) {
      apply_toml(config, *t, key);
    } else if (const auto* b = node.as_boolean()) {
      set_value(config, key, b->get());
    } else if (const auto* i = node.as_integer()) {
      set_value(config, key, static_cast<double>(i->get()));
    } else if (const auto* f = node.as_floating_point()) {
      set_value(config, key, f->get());
    } else if (const auto* s = node.as_string()) {
      set_value(config, key, s->get());
    } else {
      fail(ErrorCode::kParse, "config key " + key + " has unsupported type");
    }
  }
}

PipelineConfig parse_toml(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    fail(ErrorCode::kParse,
         "config line " + std::to_string(e.source().begin.line) + ": " +
             std::string(e.description()));
  }
  PipelineConfig config;
  apply_toml(config, root, "");
  return config;
}

void apply_json(PipelineConfig& config, const json& node,
                const std::string& prefix) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const json& v = it.value();
    if (v.is_object()) {
      apply_json(config, v, key);
    } else if (v.is_boolean()) {
      set_value(config, key, v.get<bool>());
    } else if (v.is_number()) {
      set_value(config, key, v.get<double>());
    } else if (v.is_string()) {
      set_value(config, key, v.get<std::string>());
    } else {
      fail(ErrorCode::kParse, "config key " + key + " has unsupported type");
    }
  }
}

}  // namespace

void PipelineConfig::validate() const {
  chromakey.validate();
  inpaint.validate();
  if (!(gate > 0.0)) fail(ErrorCode::kInvalidArgument, "propagate.gate must be > 0");
  if (eval.max_dets < 1) {
    fail(ErrorCode::kInvalidArgument, "eval.max_dets must be >= 1");
  }
  if (!(roi_alpha >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "roi.alpha must be >= 0");
  }
}

void set_value(PipelineConfig& c, std::string_view key, const Value& v) {
  if (key == "chromakey.key_threshold") {
    c.chromakey.key_threshold = as_number(key, v);
  } else if (key == "chromakey.min_area") {
    c.chromakey.min_area = as_int(key, v);
  } else if (key == "chromakey.merge_distance") {
    c.chromakey.merge_distance = as_number(key, v);
  } else if (key == "chromakey.connectivity") {
    c.chromakey.connectivity = as_int(key, v);
  } else if (key == "chromakey.split_mode") {
    const std::string& s = as_string(key, v);
    if (s == "always") {
      c.chromakey.split_mode = chromakey::SplitMode::kAlways;
    } else if (s == "bimodal-gated") {
      c.chromakey.split_mode = chromakey::SplitMode::kBimodalGated;
    } else {
      fail(ErrorCode::kParse,
           "chromakey.split_mode must be 'always' or 'bimodal-gated'");
    }
  } else if (key == "chromakey.bimodal_min_fraction") {
    c.chromakey.bimodal_min_fraction = as_number(key, v);
  } else if (key == "inpaint.num_scales") {
    c.inpaint.num_scales = as_int(key, v);
  } else if (key == "inpaint.spatial_sigma") {
    c.inpaint.spatial_sigma = as_number(key, v);
  } else if (key == "inpaint.range_sigma") {
    c.inpaint.range_sigma = as_number(key, v);
  } else if (key == "inpaint.kernel_radius") {
    c.inpaint.kernel_radius = as_int(key, v);
  } else if (key == "propagate.gate") {
    c.gate = as_number(key, v);
  } else if (key == "eval.mode") {
    const std::string& s = as_string(key, v);
    if (s == "agnostic") {
      c.eval.mode = eval::EvalMode::kClassAgnostic;
    } else if (s == "sensitive") {
      c.eval.mode = eval::EvalMode::kClassSensitive;
    } else {
      fail(ErrorCode::kParse, "eval.mode must be 'agnostic' or 'sensitive'");
    }
  } else if (key == "eval.max_dets") {
    c.eval.max_dets = as_int(key, v);
  } else if (key == "roi.alpha") {
    c.roi_alpha = as_number(key, v);
  } else {
    fail(ErrorCode::kParse, "unknown config key " + std::string(key));
  }
}

PipelineConfig parse(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  PipelineConfig config;
  if (first != std::string::npos && text[first] == '{') {
    json root;
    try {
      root = json::parse(text);
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, std::string("config: ") + e.what());
    }
    apply_json(config, root, "");
  } else {
    config = parse_toml(text);
  }
  config.validate();
  return config;
}

PipelineConfig load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string_view split_mode_name(chromakey::SplitMode mode) {
  return mode == chromakey::SplitMode::kAlways ? "always" : "bimodal-gated";
}

std::string_view eval_mode_name(eval::EvalMode mode) {
  return mode == eval::EvalMode::kClassAgnostic ? "agnostic" : "sensitive";
}

}  // namespace handlabel::config
