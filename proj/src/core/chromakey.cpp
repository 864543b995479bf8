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

#include "core/chromakey.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace handlabel::chromakey {
namespace {

constexpr int kOtsuBins = 256;
constexpr double kOtsuTieTolerance = 1e-12;

struct Fragment {
  PixelSet pixels;
  geometry::CentroidAccumulator acc;
  bool alive = true;
};

}  // namespace

void ChromaParams::validate() const {
  if (!(key_threshold > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "chromakey.key_threshold must be > 0");
  }
  if (min_area < 0) {
    fail(ErrorCode::kInvalidArgument, "chromakey.min_area must be >= 0");
  }
  if (!(merge_distance > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "chromakey.merge_distance must be > 0");
  }
  if (connectivity != 4 && connectivity != 8) {
    fail(ErrorCode::kInvalidArgument, "chromakey.connectivity must be 4 or 8");
  }
  if (!(bimodal_min_fraction >= 0.0 && bimodal_min_fraction <= 1.0)) {
    fail(ErrorCode::kInvalidArgument,
         "chromakey.bimodal_min_fraction must lie in [0, 1]");
  }
}

BinaryMask chroma_mask(const RgbFrame& rgb, double key_threshold) {
  BinaryMask mask(rgb.width(), rgb.height(), 0);
  const auto in = rgb.pixels();
  auto out = mask.pixels();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Rgb& p = in[i];
    const double y = relative_luminance(p.r, p.g, p.b);
    out[i] = (p.g - y) >= key_threshold ? 1 : 0;
  }
  return mask;
}

std::vector<PixelSet> connected_components(const BinaryMask& mask,
                                           int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    fail(ErrorCode::kInvalidArgument, "connectivity must be 4 or 8");
  }
  static constexpr std::array<Pixel, 8> kOffsets = {
      Pixel{-1, 0}, Pixel{1, 0},  Pixel{0, -1}, Pixel{0, 1},
      Pixel{-1, -1}, Pixel{-1, 1}, Pixel{1, -1}, Pixel{1, 1}};
  const int num_offsets = connectivity == 8 ? 8 : 4;

  std::vector<PixelSet> components;
  Image<std::uint8_t> visited(mask.width(), mask.height(), 0);
  std::vector<Pixel> stack;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask.at(r, c) || visited.at(r, c)) continue;
      PixelSet component;
      visited.at(r, c) = 1;
      stack.push_back({r, c});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        component.push_back(p);
        for (int i = 0; i < num_offsets; ++i) {
          const int rr = p.row + kOffsets[i].row;
          const int cc = p.col + kOffsets[i].col;
          if (!mask.contains(rr, cc) || !mask.at(rr, cc) ||
              visited.at(rr, cc)) {
            continue;
          }
          visited.at(rr, cc) = 1;
          stack.push_back({rr, cc});
        }
      }
      std::sort(component.begin(), component.end());
      components.push_back(std::move(component));
    }
  }
  return components;
}

OtsuResult otsu(std::span<const double> samples) {
  if (samples.empty()) fail(ErrorCode::kEmpty, "Otsu threshold of no samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double n = static_cast<double>(samples.size());

  double total = 0.0;
  for (double v : samples) total += v;
  const double mean = total / n;
  double total_var = 0.0;
  for (double v : samples) total_var += (v - mean) * (v - mean);
  total_var /= n;

  OtsuResult result;
  result.total_variance = total_var;
  if (lo == hi) {
    result.threshold = lo;
    return result;
  }

  std::array<std::size_t, kOtsuBins> count{};
  std::array<double, kOtsuBins> sum{};
  std::array<double, kOtsuBins> bin_min;
  std::array<double, kOtsuBins> bin_max;
  bin_min.fill(std::numeric_limits<double>::infinity());
  bin_max.fill(-std::numeric_limits<double>::infinity());
  const double range = hi - lo;
  for (double v : samples) {
    const int b = std::min(kOtsuBins - 1,
                           static_cast<int>((v - lo) * kOtsuBins / range));
    ++count[b];
    sum[b] += v;
    bin_min[b] = std::min(bin_min[b], v);
    bin_max[b] = std::max(bin_max[b], v);
  }

  // Boundary k puts bins [0, k) in the lower class.
  double best = -1.0;
  int best_k = -1;
  std::size_t n0 = 0;
  double s0 = 0.0;
  for (int k = 1; k < kOtsuBins; ++k) {
    n0 += count[k - 1];
    s0 += sum[k - 1];
    const std::size_t n1 = samples.size() - n0;
    if (n0 == 0 || n1 == 0) continue;
    const double w0 = n0 / n;
    const double w1 = n1 / n;
    const double diff = s0 / n0 - (total - s0) / n1;
    const double between = w0 * w1 * diff * diff;
    if (best_k < 0 || between > best * (1.0 + kOtsuTieTolerance)) {
      best = between;
      best_k = k;
    }
  }

  double lower_max = -std::numeric_limits<double>::infinity();
  double upper_min = std::numeric_limits<double>::infinity();
  for (int b = 0; b < kOtsuBins; ++b) {
    if (count[b] == 0) continue;
    if (b < best_k) {
      lower_max = std::max(lower_max, bin_max[b]);
    } else {
      upper_min = std::min(upper_min, bin_min[b]);
    }
  }
  result.threshold = (lower_max + upper_min) / 2.0;
  result.between_class_variance = best;
  return result;
}

double otsu_threshold(std::span<const double> samples) {
  return otsu(samples).threshold;
}

DepthSplit depth_split(std::span<const Pixel> mask, const DepthFrame& depth) {
  DepthSplit split;
  if (mask.empty()) return split;
  std::vector<double> values;
  values.reserve(mask.size());
  for (const Pixel& p : mask) {
    const std::uint16_t d = depth.at(p.row, p.col);
    if (d == kDepthHole) {
      fail(ErrorCode::kDepthHoles, "depth split over a hole pixel");
    }
    values.push_back(d);
  }
  split.otsu = otsu(values);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    (values[i] >= split.otsu.threshold ? split.upper : split.lower)
        .push_back(mask[i]);
  }
  return split;
}

FrameInstances merge_instances(std::vector<PixelSet> masks,
                               const DepthFrame& depth,
                               const geometry::CameraIntrinsics& k,
                               const ChromaParams& params) {
  std::vector<Fragment> fragments;
  fragments.reserve(masks.size());
  for (PixelSet& m : masks) {
    if (m.empty()) continue;
    normalize_pixel_set(m);
    Fragment f;
    f.acc = geometry::accumulate_mask(m, depth, k);
    f.pixels = std::move(m);
    fragments.push_back(std::move(f));
  }
  std::sort(fragments.begin(), fragments.end(),
            [](const Fragment& a, const Fragment& b) {
              if (a.pixels.size() != b.pixels.size()) {
                return a.pixels.size() > b.pixels.size();
              }
              return a.pixels.front() < b.pixels.front();
            });

  FrameInstances out;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    Fragment& seed = fragments[i];
    if (!seed.alive) continue;
    seed.alive = false;
    if (seed.pixels.size() <= static_cast<std::size_t>(params.min_area)) {
      continue;
    }
    PixelSet pixels = std::move(seed.pixels);
    geometry::CentroidAccumulator acc = seed.acc;
    for (std::size_t j = i + 1; j < fragments.size(); ++j) {
      Fragment& other = fragments[j];
      if (!other.alive) continue;
      // The growing mask's centroid is refreshed after every union.
      const double dist =
          geometry::distance_3d(other.acc.centroid(), acc.centroid());
      if (dist <= params.merge_distance) {
        pixels = merge_pixel_sets(pixels, other.pixels);
        acc.merge(other.acc);
        other.alive = false;
      }
    }
    InstanceMask inst;
    inst.bbox = geometry::mask_to_bbox(pixels);
    inst.centroid = acc.centroid();
    inst.pixels = std::move(pixels);
    out.instances.push_back(std::move(inst));
  }
  return out;
}

FrameInstances extract_instances(const ingest::RegisteredFramePair& pair,
                                 const geometry::CameraIntrinsics& k,
                                 const ChromaParams& params) {
  params.validate();
  if (!pair.rgb.same_shape(pair.depth)) {
    fail(ErrorCode::kRegistration, "frame " + std::to_string(pair.index) +
                                       ": rgb and depth differ in size");
  }
  if (count_holes(pair.depth) != 0) {
    fail(ErrorCode::kDepthHoles,
         "frame " + std::to_string(pair.index) +
             " has depth holes; in-paint before labelling");
  }

  const BinaryMask keyed = chroma_mask(pair.rgb, params.key_threshold);
  std::vector<PixelSet> fragments;
  for (PixelSet& component : connected_components(keyed, params.connectivity)) {
    DepthSplit split = depth_split(component, pair.depth);
    const bool gated_out =
        params.split_mode == SplitMode::kBimodalGated &&
        !(split.otsu.total_variance > 0.0 &&
          split.otsu.between_class_variance / split.otsu.total_variance >=
              params.bimodal_min_fraction);
    if (gated_out || split.lower.empty() || split.upper.empty()) {
      fragments.push_back(std::move(component));
      continue;
    }
    fragments.push_back(std::move(split.upper));
    fragments.push_back(std::move(split.lower));
  }

  FrameInstances out = merge_instances(std::move(fragments), pair.depth, k, params);
  out.frame_index = pair.index;
  return out;
}

}  // namespace handlabel::chromakey
