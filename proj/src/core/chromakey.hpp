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

// Hand-instance masks from green-glove chroma keying.
//
// Per frame: key the registered RGB on (g - Y) >= threshold, label connected
// components, split each component in two by an Otsu threshold on its depth
// (hands merged in 2D but apart in 3D), then agglomerate fragments largest
// first: specks of at most min_area pixels are dropped and fragments whose 3D
// centroids lie within merge_distance of the growing instance are absorbed
// (hands broken up by occluders).

#ifndef HANDLABEL_CORE_CHROMAKEY_HPP_
#define HANDLABEL_CORE_CHROMAKEY_HPP_

#include <span>
#include <utility>
#include <vector>

#include "core/geometry.hpp"
#include "core/image.hpp"
#include "core/ingest.hpp"

namespace handlabel::chromakey {

enum class SplitMode {
  kAlways,         // split every component, as the keying procedure states
  kBimodalGated,   // split only when the depth histogram is clearly bimodal
};

struct ChromaParams {
  double key_threshold = 40.0;   // on the [0, 255] channel scale
  int min_area = 20;             // components of <= min_area px are dropped
  double merge_distance = 0.07;  // metres between 3D centroids
  int connectivity = 8;          // 4 or 8
  SplitMode split_mode = SplitMode::kAlways;
  // kBimodalGated: minimum between-class / total variance ratio.
  double bimodal_min_fraction = 0.5;

  void validate() const;
};

struct InstanceMask {
  PixelSet pixels;
  geometry::Point3D centroid;
  geometry::RoiBox bbox;

  std::size_t area() const { return pixels.size(); }
};

struct FrameInstances {
  int frame_index = 0;
  std::vector<InstanceMask> instances;
};

// Y = 0.3 r + 0.59 g + 0.11 b.
inline double relative_luminance(double r, double g, double b) {
  return 0.3 * r + 0.59 * g + 0.11 * b;
}

BinaryMask chroma_mask(const RgbFrame& rgb, double key_threshold);

// Components in row-major order of their first pixel; each one sorted.
std::vector<PixelSet> connected_components(const BinaryMask& mask,
                                           int connectivity);

struct OtsuResult {
  // Samples >= threshold form the upper class. When both classes are
  // nonempty the threshold is the midpoint between the largest lower and
  // the smallest upper sample; for constant input it equals that constant.
  double threshold = 0.0;
  double between_class_variance = 0.0;
  double total_variance = 0.0;
};

// 256 uniform bins over [min, max]; the bin boundary with the largest
// between-class variance wins, ties going to the smallest boundary. Variances
// within a relative 1e-12 count as ties. Throws kEmpty on no samples.
OtsuResult otsu(std::span<const double> samples);
double otsu_threshold(std::span<const double> samples);

struct DepthSplit {
  PixelSet upper;  // depth >= threshold
  PixelSet lower;  // depth < threshold
  OtsuResult otsu;
};

// Partitions a mask by the Otsu threshold of its own depths. Throws
// kDepthHoles when a pixel has no depth.
DepthSplit depth_split(std::span<const Pixel> mask, const DepthFrame& depth);

// Greedy largest-first agglomeration. Input masks must be pairwise disjoint.
// Instances come out in decreasing seed area, ties broken by the smaller
// top-left pixel.
FrameInstances merge_instances(std::vector<PixelSet> masks,
                               const DepthFrame& depth,
                               const geometry::CameraIntrinsics& k,
                               const ChromaParams& params);

// The full keying procedure on one registered frame. Depth must already be
// hole-free (throws kDepthHoles otherwise).
FrameInstances extract_instances(const ingest::RegisteredFramePair& pair,
                                 const geometry::CameraIntrinsics& k,
                                 const ChromaParams& params);

}  // namespace handlabel::chromakey

#endif  // HANDLABEL_CORE_CHROMAKEY_HPP_
