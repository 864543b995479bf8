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

#include "core/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "core/error.hpp"

namespace handlabel::inpaint {
namespace {

struct Color {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
};

// Working depth is kept in double so coarse levels hold exact block means;
// 0.0 marks a hole as in DepthFrame.
using WorkDepth = Image<double>;
using Guide = Image<Color>;

bool has_holes(const WorkDepth& d) {
  const auto px = d.pixels();
  return std::find(px.begin(), px.end(), 0.0) != px.end();
}

WorkDepth downsample_depth(const WorkDepth& d) {
  WorkDepth out((d.width() + 1) / 2, (d.height() + 1) / 2, 0.0);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      double sum = 0.0;
      int n = 0;
      for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc) {
          const int rr = 2 * r + dr;
          const int cc = 2 * c + dc;
          if (!d.contains(rr, cc) || d.at(rr, cc) == 0.0) continue;
          sum += d.at(rr, cc);
          ++n;
        }
      }
      out.at(r, c) = n > 0 ? sum / n : 0.0;
    }
  }
  return out;
}

Guide downsample_guide(const Guide& g) {
  Guide out((g.width() + 1) / 2, (g.height() + 1) / 2);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      Color sum;
      int n = 0;
      for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc) {
          const int rr = 2 * r + dr;
          const int cc = 2 * c + dc;
          if (!g.contains(rr, cc)) continue;
          sum.r += g.at(rr, cc).r;
          sum.g += g.at(rr, cc).g;
          sum.b += g.at(rr, cc).b;
          ++n;
        }
      }
      out.at(r, c) = {sum.r / n, sum.g / n, sum.b / n};
    }
  }
  return out;
}

class LevelFilter {
 public:
  explicit LevelFilter(const InpaintParams& params)
      : radius_(params.kernel_radius),
        inv_two_range_sq_(1.0 / (2.0 * params.range_sigma * params.range_sigma)) {
    const int side = 2 * radius_ + 1;
    spatial_.resize(static_cast<std::size_t>(side) * side);
    const double inv = 1.0 / (2.0 * params.spatial_sigma * params.spatial_sigma);
    for (int dr = -radius_; dr <= radius_; ++dr) {
      for (int dc = -radius_; dc <= radius_; ++dc) {
        spatial_[index(dr, dc)] = std::exp(-(dr * dr + dc * dc) * inv);
      }
    }
  }

  // Cross-bilateral average at (row, col) over nonzero pixels of source.
  std::optional<double> fill_at(const WorkDepth& source, const Guide& guide,
                                int row, int col) const {
    const Color& center = guide.at(row, col);
    double weighted = 0.0;
    double weight_sum = 0.0;
    double plain = 0.0;
    int count = 0;
    for (int dr = -radius_; dr <= radius_; ++dr) {
      const int rr = row + dr;
      if (rr < 0 || rr >= source.height()) continue;
      for (int dc = -radius_; dc <= radius_; ++dc) {
        const int cc = col + dc;
        if (cc < 0 || cc >= source.width()) continue;
        const double d = source.at(rr, cc);
        if (d == 0.0) continue;
        const Color& q = guide.at(rr, cc);
        const double dist_sq = (center.r - q.r) * (center.r - q.r) +
                               (center.g - q.g) * (center.g - q.g) +
                               (center.b - q.b) * (center.b - q.b);
        const double w =
            spatial_[index(dr, dc)] * std::exp(-dist_sq * inv_two_range_sq_);
        weighted += w * d;
        weight_sum += w;
        plain += d;
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    // Extreme colour distances can underflow every weight; fall back to the
    // unweighted mean, which is still a convex combination.
    if (!(weight_sum > 0.0)) return plain / count;
    return weighted / weight_sum;
  }

 private:
  std::size_t index(int dr, int dc) const {
    return static_cast<std::size_t>(dr + radius_) * (2 * radius_ + 1) +
           (dc + radius_);
  }

  int radius_;
  double inv_two_range_sq_;
  std::vector<double> spatial_;
};

WorkDepth fill_level(const WorkDepth& depth, const Guide& guide,
                     const InpaintParams& params, const LevelFilter& filter,
                     int level) {
  if (!has_holes(depth)) return depth;

  std::optional<WorkDepth> coarse;
  if (level + 1 < params.num_scales &&
      (depth.width() > 1 || depth.height() > 1)) {
    const WorkDepth down = downsample_depth(depth);
    // A fully empty coarse level cannot happen: some observed pixel exists
    // and survives block averaging.
    coarse = fill_level(down, downsample_guide(guide), params, filter,
                        level + 1);
  }

  WorkDepth out = depth;
  std::vector<Pixel> pending;
  for (int r = 0; r < depth.height(); ++r) {
    for (int c = 0; c < depth.width(); ++c) {
      if (depth.at(r, c) != 0.0) continue;
      if (auto v = filter.fill_at(depth, guide, r, c)) {
        out.at(r, c) = *v;
      } else if (coarse) {
        out.at(r, c) = coarse->at(r / 2, c / 2);
      } else {
        pending.push_back({r, c});
      }
    }
  }

  // Coarsest level: grow the filled region until nothing is left.
  while (!pending.empty()) {
    const WorkDepth source = out;
    std::vector<Pixel> still;
    for (const Pixel& p : pending) {
      if (auto v = filter.fill_at(source, guide, p.row, p.col)) {
        out.at(p.row, p.col) = *v;
      } else {
        still.push_back(p);
      }
    }
    if (still.size() == pending.size()) {
      fail(ErrorCode::kInternal, "in-painting made no progress");
    }
    pending = std::move(still);
  }
  return out;
}

}  // namespace

void InpaintParams::validate() const {
  if (num_scales < 1) {
    fail(ErrorCode::kInvalidArgument, "inpaint.num_scales must be >= 1");
  }
  if (!(spatial_sigma > 0.0) || !(range_sigma > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "inpaint sigmas must be > 0");
  }
  if (kernel_radius < 1) {
    fail(ErrorCode::kInvalidArgument, "inpaint.kernel_radius must be >= 1");
  }
}

DepthFrame inpaint(const DepthFrame& depth, const RgbFrame& rgb,
                   const InpaintParams& params) {
  params.validate();
  if (!depth.same_shape(rgb)) {
    fail(ErrorCode::kRegistration, "depth and rgb differ in size");
  }
  const std::size_t holes = count_holes(depth);
  if (holes == 0) return depth;
  if (holes == depth.size()) {
    fail(ErrorCode::kEmpty, "cannot in-paint a frame with no observed depth");
  }

  WorkDepth work(depth.width(), depth.height());
  Guide guide(depth.width(), depth.height());
  std::uint16_t lo = 0xffff;
  std::uint16_t hi = 0;
  for (int r = 0; r < depth.height(); ++r) {
    for (int c = 0; c < depth.width(); ++c) {
      const std::uint16_t d = depth.at(r, c);
      work.at(r, c) = d;
      if (d != kDepthHole) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      const Rgb& px = rgb.at(r, c);
      guide.at(r, c) = {static_cast<double>(px.r), static_cast<double>(px.g),
                         static_cast<double>(px.b)};
    }
  }

  const LevelFilter filter(params);
  const WorkDepth filled = fill_level(work, guide, params, filter, 0);

  DepthFrame out = depth;
  for (int r = 0; r < depth.height(); ++r) {
    for (int c = 0; c < depth.width(); ++c) {
      if (depth.at(r, c) != kDepthHole) continue;
      const double v = std::clamp(std::round(filled.at(r, c)),
                                  static_cast<double>(lo), static_cast<double>(hi));
      out.at(r, c) = static_cast<std::uint16_t>(v);
    }
  }
  return out;
}

}  // namespace handlabel::inpaint
