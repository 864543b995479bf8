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

#ifndef HANDLABEL_CORE_CONFIG_HPP_
#define HANDLABEL_CORE_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "core/chromakey.hpp"
#include "core/eval.hpp"
#include "core/inpaint.hpp"
#include "core/propagate.hpp"

namespace handlabel::config {

struct PipelineConfig {
  chromakey::ChromaParams chromakey;
  inpaint::InpaintParams inpaint;
  double gate = propagate::kDefaultGate;
  eval::EvalParams eval;
  double roi_alpha = 0.5;

  void validate() const;
};

using Value = std::variant<double, bool, std::string>;

// Dotted keys: chromakey.{key_threshold, min_area, merge_distance,
// connectivity, split_mode, bimodal_min_fraction}, inpaint.{num_scales,
// spatial_sigma, range_sigma, kernel_radius}, propagate.gate,
// eval.{mode, max_dets}, roi.alpha. Unknown keys and mistyped values throw
// kParse; out-of-range values are caught by validate().
void set_value(PipelineConfig& config, std::string_view key,
               const Value& value);

// Parses JSON ({"chromakey": {...}, ...}) or a TOML subset ([table] headers,
// key = number | bool | "string", # comments). The format is detected from
// the first significant character.
PipelineConfig parse(const std::string& text);
PipelineConfig load(const std::filesystem::path& path);

std::string_view split_mode_name(chromakey::SplitMode mode);
std::string_view eval_mode_name(eval::EvalMode mode);

}  // namespace handlabel::config

#endif  // HANDLABEL_CORE_CONFIG_HPP_
