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

// Pinhole back-projection, 3D centroids, region-of-interest boxes and
// distances to calibrated control regions.
//
// Units: depth images store millimetres, every Point3D is in metres. The
// conversion happens in exactly one place, mask_centroid_3d /
// backproject_pixel, so callers never mix the two.

#ifndef HANDLABEL_CORE_GEOMETRY_HPP_
#define HANDLABEL_CORE_GEOMETRY_HPP_

#include <span>
#include <string>
#include <vector>

#include "core/image.hpp"

namespace handlabel::geometry {

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  // Throws kInvalidArgument unless fx, fy > 0 and the principal point lies
  // inside a width x height image.
  void validate(int width, int height) const;

  friend bool operator==(const CameraIntrinsics&,
                         const CameraIntrinsics&) = default;
};

struct Point3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3D&, const Point3D&) = default;
};

// Pixel centres sit at integer coordinates.
struct ImagePoint {
  double x = 0.0;
  double y = 0.0;
  double depth_m = 0.0;
};

struct RoiBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }
  double area() const { return w * h; }

  friend bool operator==(const RoiBox&, const RoiBox&) = default;
};

struct ControlRegion {
  std::string name;
  std::vector<Point3D> points;
};

inline constexpr double kMillimetresPerMetre = 1000.0;

Point3D backproject(double x, double y, double depth_m,
                    const CameraIntrinsics& k);

// Back-projects pixel (row, col) using a depth value in millimetres.
Point3D backproject_pixel(const Pixel& p, std::uint16_t depth_mm,
                          const CameraIntrinsics& k);

ImagePoint project(const Point3D& p, const CameraIntrinsics& k);

// Running sum of back-projected points. Merging two accumulators gives the
// centroid of the union of their pixel sets.
class CentroidAccumulator {
 public:
  void add(const Point3D& p) {
    sum_.x += p.x;
    sum_.y += p.y;
    sum_.z += p.z;
    ++count_;
  }
  void merge(const CentroidAccumulator& other) {
    sum_.x += other.sum_.x;
    sum_.y += other.sum_.y;
    sum_.z += other.sum_.z;
    count_ += other.count_;
  }
  std::size_t count() const { return count_; }
  // Throws kEmpty when nothing was added.
  Point3D centroid() const;

 private:
  Point3D sum_;
  std::size_t count_ = 0;
};

// Accumulates the back-projections of every pixel in the set. Throws
// kDepthHoles when a pixel has no depth.
CentroidAccumulator accumulate_mask(std::span<const Pixel> mask,
                                    const DepthFrame& depth,
                                    const CameraIntrinsics& k);

// Mean of the back-projections of every pixel in the set. Throws kEmpty on
// an empty set and kDepthHoles when a pixel has no depth.
Point3D mask_centroid_3d(std::span<const Pixel> mask, const DepthFrame& depth,
                         const CameraIntrinsics& k);

double distance_3d(const Point3D& a, const Point3D& b);

// Distance between the 3D centroids of two masks, each read from its own
// depth frame.
double distance_3d(std::span<const Pixel> a, const DepthFrame& depth_a,
                   std::span<const Pixel> b, const DepthFrame& depth_b,
                   const CameraIntrinsics& k);

// RoI+ expansion: grows the box by alpha * size on every side. No clipping.
RoiBox expand_roi(const RoiBox& roi, double alpha);

// Intersection with [0, width) x [0, height). Throws kEmpty when the box
// lies entirely outside the image.
RoiBox clip_roi(const RoiBox& roi, int width, int height);

// Tightest pixel-aligned box: a single pixel (r, c) gives (c, r, 1, 1).
RoiBox mask_to_bbox(std::span<const Pixel> mask);

// Back-projects every pixel of a labelled calibration mask that has depth.
ControlRegion make_control_region(std::string name, const BinaryMask& mask,
                                  const DepthFrame& depth,
                                  const CameraIntrinsics& k);

// Minimum distance from a point (usually an instance centroid) to any point
// of the region.
double distance_to_region(const Point3D& centroid,
                          const ControlRegion& region);

}  // namespace handlabel::geometry

#endif  // HANDLABEL_CORE_GEOMETRY_HPP_
