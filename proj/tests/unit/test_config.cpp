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
#include "core/error.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace handlabel;
using fixtures::code_of;

TEST_CASE("defaults") {
  const config::PipelineConfig c = config::parse("");
  CHECK(c.chromakey.key_threshold == 40.0);
  CHECK(c.chromakey.min_area == 20);
  CHECK(c.chromakey.merge_distance == 0.07);
  CHECK(c.chromakey.connectivity == 8);
  CHECK(c.gate == 0.15);
  CHECK(c.eval.mode == eval::EvalMode::kClassSensitive);
  CHECK(c.eval.max_dets == 50);
  CHECK(c.roi_alpha == 0.5);
}

TEST_CASE("TOML config") {
  const config::PipelineConfig c = config::parse(R"(
# comment
[chromakey]
key_threshold = 35.5   # trailing comment
min_area = 1_000
split_mode = "bimodal-gated"

[propagate]
gate = 0.2

[eval]
mode = "agnostic"
)");
  CHECK(c.chromakey.key_threshold == 35.5);
  CHECK(c.chromakey.min_area == 1000);
  CHECK(c.chromakey.split_mode == chromakey::SplitMode::kBimodalGated);
  CHECK(c.gate == 0.2);
  CHECK(c.eval.mode == eval::EvalMode::kClassAgnostic);
}

TEST_CASE("JSON form") {
  const config::PipelineConfig c = config::parse(
      R"({"inpaint": {"num_scales": 2, "range_sigma": 12}, "roi": {"alpha": 0.25}})");
  CHECK(c.inpaint.num_scales == 2);
  CHECK(c.inpaint.range_sigma == 12.0);
  CHECK(c.roi_alpha == 0.25);
}

TEST_CASE("config errors") {
  CHECK(code_of([] { config::parse("[chromakey]\nkey_treshold = 3\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse(R"({"eval": {"mode": 3}})"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("[eval]\nmode = \"fuzzy\"\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("[chromakey]\nmin_area = 2.5\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("gate 3\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("[propagate\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("[eval]\nmode = \"agnostic\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("{ bad json"); }) == ErrorCode::kParse);
  CHECK(code_of([] { config::parse("[propagate]\ngate = -1\n"); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { config::parse("[chromakey]\nconnectivity = 6\n"); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { config::load("/nonexistent/handlabel.toml"); }) == ErrorCode::kIo);
}

TEST_CASE("mode names") {
  CHECK(config::eval_mode_name(eval::EvalMode::kClassAgnostic) == "agnostic");
  CHECK(config::split_mode_name(chromakey::SplitMode::kAlways) == "always");
}
