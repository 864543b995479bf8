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

#include "core/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "core/error.hpp"

namespace handlabel::eval {
namespace {

struct AreaRange {
  double lo;
  double hi;  // exclusive
  bool contains(double area) const { return area >= lo && area < hi; }
};

constexpr AreaRange kAllAreas{0.0, 1e18};
constexpr AreaRange kSmall{0.0, kSmallAreaMax};
constexpr AreaRange kMedium{kSmallAreaMax, kMediumAreaMax};

// Indices of predictions ordered by descending score, stable in input order.
std::vector<std::size_t> by_score(std::span<const PredInstance> preds,
                                  std::span<const std::size_t> subset) {
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return preds[a].score > preds[b].score;
                   });
  return order;
}

struct DetOutcome {
  int gt = -1;  // local index of the matched ground truth
  bool ignored = false;

  bool matched() const { return gt >= 0; }
};

// COCO per-image matching. dets are ranked; gt_ignore flags ground truth
// outside the area range. iou(d, g) indexes the local IoU table.
template <typename IouFn>
std::vector<DetOutcome> match_image(std::size_t num_dets,
                                    const std::vector<bool>& gt_ignore,
                                    const std::vector<double>& det_area,
                                    const AreaRange& range, double thresh,
                                    IouFn iou) {
  // Ground truth is visited non-ignored first, stable otherwise.
  std::vector<std::size_t> gt_order(gt_ignore.size());
  std::iota(gt_order.begin(), gt_order.end(), 0);
  std::stable_sort(gt_order.begin(), gt_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return !gt_ignore[a] && gt_ignore[b];
                   });
  std::vector<bool> gt_taken(gt_ignore.size(), false);
  std::vector<DetOutcome> out(num_dets);
  const double floor_iou = std::min(thresh, 1.0 - 1e-10);
  for (std::size_t d = 0; d < num_dets; ++d) {
    double best = floor_iou;
    int match = -1;
    for (std::size_t g : gt_order) {
      if (gt_taken[g]) continue;
      if (match >= 0 && !gt_ignore[match] && gt_ignore[g]) break;
      const double v = iou(d, g);
      if (v < best) continue;
      best = v;
      match = static_cast<int>(g);
    }
    if (match >= 0) {
      gt_taken[match] = true;
      out[d] = {match, gt_ignore[match]};
    } else {
      out[d] = {-1, !range.contains(det_area[d])};
    }
  }
  return out;
}

struct ImageIndex {
  std::vector<std::size_t> gts;
  std::vector<std::size_t> preds;
};

}  // namespace

std::array<double, kNumIouThresholds> iou_thresholds() {
  std::array<double, kNumIouThresholds> t{};
  for (int i = 0; i < kNumIouThresholds; ++i) t[i] = (50 + 5 * i) / 100.0;
  return t;
}

double mask_iou(std::span<const Pixel> a, std::span<const Pixel> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::kEmpty, "IoU of an empty mask");
  const std::size_t inter = intersection_size(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<int> match_instances(std::span<const PredInstance> preds,
                                 std::span<const GtInstance> gts,
                                 double iou_thresh, bool class_sensitive) {
  std::vector<std::size_t> all(preds.size());
  std::iota(all.begin(), all.end(), 0);
  const std::vector<std::size_t> order = by_score(preds, all);
  const std::vector<bool> no_ignore(gts.size(), false);
  const std::vector<double> det_area(order.size(), 0.0);
  const auto outcome = match_image(
      order.size(), no_ignore, det_area, kAllAreas, iou_thresh,
      [&](std::size_t d, std::size_t g) {
        const PredInstance& p = preds[order[d]];
        if (class_sensitive && p.category != gts[g].category) return -1.0;
        return mask_iou(p.mask, gts[g].mask);
      });
  std::vector<int> result(preds.size(), -1);
  for (std::size_t d = 0; d < order.size(); ++d) result[order[d]] = outcome[d].gt;
  return result;
}

double average_precision(std::span<const RankedDetection> ranked,
                         std::size_t num_gt) {
  if (num_gt == 0) {
    fail(ErrorCode::kEmpty, "average precision needs ground truth");
  }
  std::vector<double> recall(ranked.size());
  std::vector<double> precision(ranked.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].true_positive) ++tp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gt);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = ranked.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r < kNumRecallThresholds; ++r) {
    const double level = r / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), level);
    if (it == recall.end()) continue;
    sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / kNumRecallThresholds;
}

ApReport coco_ap(std::span<const PredInstance> preds,
                 std::span<const GtInstance> gts, const EvalParams& params) {
  if (gts.empty()) fail(ErrorCode::kEmpty, "evaluation needs ground truth");
  if (params.max_dets < 1) {
    fail(ErrorCode::kInvalidArgument, "eval.max_dets must be >= 1");
  }
  for (const GtInstance& g : gts) {
    if (g.mask.empty()) {
      fail(ErrorCode::kInvalidArgument, "ground-truth mask is empty");
    }
  }
  for (const PredInstance& p : preds) {
    if (p.mask.empty()) {
      fail(ErrorCode::kInvalidArgument, "predicted mask is empty");
    }
    if (!(p.score >= 0.0 && p.score <= 1.0)) {
      fail(ErrorCode::kInvalidArgument,
           "prediction score " + std::to_string(p.score) + " outside [0, 1]");
    }
  }

  const bool sensitive = params.mode == EvalMode::kClassSensitive;
  std::set<int> categories;
  if (sensitive) {
    for (const auto& g : gts) categories.insert(g.category);
    for (const auto& p : preds) categories.insert(p.category);
  } else {
    categories.insert(0);
  }

  // Image ids in ascending order, as COCO iterates them.
  std::map<int, ImageIndex> images;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    images[gts[i].image_id].gts.push_back(i);
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    images[preds[i].image_id].preds.push_back(i);
  }

  // IoU cache keyed by (pred, gt).
  std::map<std::pair<std::size_t, std::size_t>, double> iou_cache;
  auto cached_iou = [&](std::size_t p, std::size_t g) {
    const auto key = std::make_pair(p, g);
    auto it = iou_cache.find(key);
    if (it != iou_cache.end()) return it->second;
    const double v = mask_iou(preds[p].mask, gts[g].mask);
    iou_cache.emplace(key, v);
    return v;
  };

  const auto thresholds = iou_thresholds();
  const std::array<AreaRange, 3> ranges = {kAllAreas, kSmall, kMedium};
  // ap_sum[area][threshold], ap_count[area]
  std::array<std::array<double, kNumIouThresholds>, 3> ap_sum{};
  std::array<int, 3> ap_count{};

  for (int category : categories) {
    // Per image: this category's ground truth and top-ranked detections.
    struct Slice {
      std::vector<std::size_t> gts;
      std::vector<std::size_t> dets;  // ranked and capped
    };
    std::vector<Slice> slices;
    for (const auto& [image_id, idx] : images) {
      Slice s;
      for (std::size_t g : idx.gts) {
        if (!sensitive || gts[g].category == category) s.gts.push_back(g);
      }
      std::vector<std::size_t> cand;
      for (std::size_t p : idx.preds) {
        if (!sensitive || preds[p].category == category) cand.push_back(p);
      }
      s.dets = by_score(preds, cand);
      if (s.dets.size() > static_cast<std::size_t>(params.max_dets)) {
        s.dets.resize(params.max_dets);
      }
      slices.push_back(std::move(s));
    }

    for (std::size_t a = 0; a < ranges.size(); ++a) {
      const AreaRange& range = ranges[a];
      std::size_t num_gt = 0;
      std::vector<std::vector<bool>> gt_ignore(slices.size());
      std::vector<std::vector<double>> det_area(slices.size());
      for (std::size_t s = 0; s < slices.size(); ++s) {
        for (std::size_t g : slices[s].gts) {
          const bool ign = !range.contains(static_cast<double>(gts[g].area()));
          gt_ignore[s].push_back(ign);
          if (!ign) ++num_gt;
        }
        for (std::size_t p : slices[s].dets) {
          det_area[s].push_back(static_cast<double>(preds[p].mask.size()));
        }
      }
      if (num_gt == 0) continue;
      ++ap_count[a];

      for (int t = 0; t < kNumIouThresholds; ++t) {
        struct Entry {
          double score;
          bool tp;
        };
        std::vector<Entry> entries;
        for (std::size_t s = 0; s < slices.size(); ++s) {
          const Slice& slice = slices[s];
          const auto outcome = match_image(
              slice.dets.size(), gt_ignore[s], det_area[s], range,
              thresholds[t],
              [&](std::size_t d, std::size_t g) {
                return cached_iou(slice.dets[d], slice.gts[g]);
              });
          for (std::size_t d = 0; d < outcome.size(); ++d) {
            if (outcome[d].ignored) continue;
            entries.push_back(
                {preds[slice.dets[d]].score, outcome[d].matched()});
          }
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const Entry& x, const Entry& y) {
                           return x.score > y.score;
                         });
        std::vector<RankedDetection> ranked;
        ranked.reserve(entries.size());
        for (const Entry& e : entries) ranked.push_back({e.tp});
        ap_sum[a][t] += average_precision(ranked, num_gt);
      }
    }
  }

  auto mean_over = [&](std::size_t a, int t_begin, int t_end)
      -> std::optional<double> {
    if (ap_count[a] == 0) return std::nullopt;
    double sum = 0.0;
    for (int t = t_begin; t < t_end; ++t) sum += ap_sum[a][t];
    return 100.0 * sum / (ap_count[a] * (t_end - t_begin));
  };

  ApReport report;
  report.ap = mean_over(0, 0, kNumIouThresholds);
  report.ap50 = mean_over(0, 0, 1);
  report.ap75 = mean_over(0, 5, 6);
  report.ap_small = mean_over(1, 0, kNumIouThresholds);
  report.ap_medium = mean_over(2, 0, kNumIouThresholds);
  return report;
}

}  // namespace handlabel::eval
