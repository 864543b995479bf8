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

// COCO-style mask average precision.
//
// Follows the COCO evaluation protocol: IoU thresholds 0.50:0.05:0.95,
// 101-point interpolated precision, per-image detection cap, ground truth
// outside an area range is ignored rather than dropped, and detections
// matched to ignored ground truth are ignored too. Area ranges are
// half-open: small is [0, 32^2), medium is [32^2, 96^2). Large objects are
// not reported.

#ifndef HANDLABEL_CORE_EVAL_HPP_
#define HANDLABEL_CORE_EVAL_HPP_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "core/image.hpp"

namespace handlabel::eval {

enum class EvalMode { kClassAgnostic, kClassSensitive };

struct GtInstance {
  int image_id = 0;
  PixelSet mask;
  int category = 0;

  std::size_t area() const { return mask.size(); }
};

struct PredInstance {
  int image_id = 0;
  PixelSet mask;
  int category = 0;
  double score = 1.0;
};

// Percentages in [0, 100]. A field is empty when no ground truth falls in
// its area range (COCO reports -1 there).
struct ApReport {
  std::optional<double> ap;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::optional<double> ap_small;
  std::optional<double> ap_medium;
};

struct EvalParams {
  EvalMode mode = EvalMode::kClassSensitive;
  int max_dets = 50;  // per image (and per category in sensitive mode)
};

inline constexpr int kNumIouThresholds = 10;
inline constexpr int kNumRecallThresholds = 101;
inline constexpr double kSmallAreaMax = 32.0 * 32.0;
inline constexpr double kMediumAreaMax = 96.0 * 96.0;

// 0.50, 0.55, ..., 0.95.
std::array<double, kNumIouThresholds> iou_thresholds();

// |a n b| / |a u b| of two sorted pixel sets. Throws kEmpty if either is
// empty.
double mask_iou(std::span<const Pixel> a, std::span<const Pixel> b);

// Greedy one-to-one matching within one image. Predictions are visited by
// descending score (stable in input order); each takes the unmatched ground
// truth of highest IoU >= iou_thresh, restricted to its own category when
// class_sensitive. Returns, per prediction, the matched ground-truth index
// or -1.
std::vector<int> match_instances(std::span<const PredInstance> preds,
                                 std::span<const GtInstance> gts,
                                 double iou_thresh, bool class_sensitive);

// One entry per detection, already in ranking order (descending score).
struct RankedDetection {
  bool true_positive = false;
};

// Area under the 101-point interpolated precision/recall curve, in [0, 1].
// Throws kEmpty when num_gt == 0.
double average_precision(std::span<const RankedDetection> ranked,
                         std::size_t num_gt);

// Throws kEmpty when gts is empty and kInvalidArgument on a score outside
// [0, 1] or an empty mask.
ApReport coco_ap(std::span<const PredInstance> preds,
                 std::span<const GtInstance> gts, const EvalParams& params);

}  // namespace handlabel::eval

#endif  // HANDLABEL_CORE_EVAL_HPP_
