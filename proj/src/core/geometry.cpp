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

#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "core/error.hpp"

namespace handlabel::geometry {

void CameraIntrinsics::validate(int width, int height) const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    fail(ErrorCode::kInvalidArgument,
         "focal lengths must be positive (fx=" + std::to_string(fx) +
             ", fy=" + std::to_string(fy) + ")");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    fail(ErrorCode::kInvalidArgument,
         "principal point (" + std::to_string(cx) + ", " + std::to_string(cy) +
             ") outside " + std::to_string(width) + "x" +
             std::to_string(height) + " image");
  }
}

Point3D backproject(double x, double y, double depth_m,
                    const CameraIntrinsics& k) {
  if (!(depth_m > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "back-projection needs depth > 0");
  }
  return {(x - k.cx) * depth_m / k.fx, (y - k.cy) * depth_m / k.fy, depth_m};
}

Point3D backproject_pixel(const Pixel& p, std::uint16_t depth_mm,
                          const CameraIntrinsics& k) {
  if (depth_mm == kDepthHole) {
    fail(ErrorCode::kDepthHoles, "depth hole at row " + std::to_string(p.row) +
                                     ", col " + std::to_string(p.col));
  }
  return backproject(p.col, p.row, depth_mm / kMillimetresPerMetre, k);
}

ImagePoint project(const Point3D& p, const CameraIntrinsics& k) {
  if (!(p.z > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "projection needs Z > 0");
  }
  return {p.x * k.fx / p.z + k.cx, p.y * k.fy / p.z + k.cy, p.z};
}

Point3D CentroidAccumulator::centroid() const {
  if (count_ == 0) fail(ErrorCode::kEmpty, "centroid of an empty mask");
  const double n = static_cast<double>(count_);
  return {sum_.x / n, sum_.y / n, sum_.z / n};
}

CentroidAccumulator accumulate_mask(std::span<const Pixel> mask,
                                    const DepthFrame& depth,
                                    const CameraIntrinsics& k) {
  CentroidAccumulator acc;
  for (const Pixel& p : mask) {
    if (!depth.contains(p.row, p.col)) {
      fail(ErrorCode::kOutOfRange, "mask pixel outside depth frame");
    }
    acc.add(backproject_pixel(p, depth.at(p.row, p.col), k));
  }
  return acc;
}

Point3D mask_centroid_3d(std::span<const Pixel> mask, const DepthFrame& depth,
                         const CameraIntrinsics& k) {
  if (mask.empty()) fail(ErrorCode::kEmpty, "centroid of an empty mask");
  return accumulate_mask(mask, depth, k).centroid();
}

double distance_3d(const Point3D& a, const Point3D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double distance_3d(std::span<const Pixel> a, const DepthFrame& depth_a,
                   std::span<const Pixel> b, const DepthFrame& depth_b,
                   const CameraIntrinsics& k) {
  return distance_3d(mask_centroid_3d(a, depth_a, k),
                     mask_centroid_3d(b, depth_b, k));
}

RoiBox expand_roi(const RoiBox& roi, double alpha) {
  if (!(alpha >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "RoI expansion factor must be >= 0");
  }
  const double scale = 1.0 + 2.0 * alpha;
  return {roi.x - alpha * roi.w, roi.y - alpha * roi.h, scale * roi.w,
          scale * roi.h};
}

RoiBox clip_roi(const RoiBox& roi, int width, int height) {
  const double x0 = std::max(roi.x, 0.0);
  const double y0 = std::max(roi.y, 0.0);
  const double x1 = std::min(roi.x + roi.w, static_cast<double>(width));
  const double y1 = std::min(roi.y + roi.h, static_cast<double>(height));
  if (!(x1 > x0) || !(y1 > y0)) {
    fail(ErrorCode::kEmpty, "RoI does not intersect the image");
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

RoiBox mask_to_bbox(std::span<const Pixel> mask) {
  if (mask.empty()) fail(ErrorCode::kEmpty, "bounding box of an empty mask");
  int min_row = std::numeric_limits<int>::max();
  int min_col = std::numeric_limits<int>::max();
  int max_row = std::numeric_limits<int>::min();
  int max_col = std::numeric_limits<int>::min();
  for (const Pixel& p : mask) {
    min_row = std::min(min_row, p.row);
    max_row = std::max(max_row, p.row);
    min_col = std::min(min_col, p.col);
    max_col = std::max(max_col, p.col);
  }
  return {static_cast<double>(min_col), static_cast<double>(min_row),
          static_cast<double>(max_col - min_col + 1),
          static_cast<double>(max_row - min_row + 1)};
}

ControlRegion make_control_region(std::string name, const BinaryMask& mask,
                                  const DepthFrame& depth,
                                  const CameraIntrinsics& k) {
  if (!mask.same_shape(depth)) {
    fail(ErrorCode::kRegistration, "region mask and depth differ in size");
  }
  ControlRegion region{std::move(name), {}};
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (mask.at(r, c) == 0 || depth.at(r, c) == kDepthHole) continue;
      region.points.push_back(backproject_pixel({r, c}, depth.at(r, c), k));
    }
  }
  if (region.points.empty()) {
    fail(ErrorCode::kEmpty,
         "control region '" + region.name + "' has no labelled depth pixels");
  }
  return region;
}

double distance_to_region(const Point3D& centroid,
                          const ControlRegion& region) {
  if (region.points.empty()) {
    fail(ErrorCode::kEmpty, "control region '" + region.name + "' is empty");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Point3D& p : region.points) {
    best = std::min(best, distance_3d(centroid, p));
  }
  return best;
}

}  // namespace handlabel::geometry
