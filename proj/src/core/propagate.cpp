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

#include "core/propagate.hpp"

#include <string>

#include "core/error.hpp"

namespace handlabel::propagate {

bool is_object_class(int id) {
  return id >= 0 && id < static_cast<int>(kObjectClasses.size());
}

std::string_view object_class_name(int id) {
  if (!is_object_class(id)) {
    fail(ErrorCode::kOutOfRange,
         "object class " + std::to_string(id) + " not in 0..4");
  }
  return kObjectClasses[id].name;
}

std::optional<Nearest> nearest_instance(
    std::span<const geometry::Point3D> centroids,
    const geometry::Point3D& last) {
  std::optional<Nearest> best;
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    const double d = geometry::distance_3d(centroids[j], last);
    if (!best || d < best->distance) best = Nearest{j, d};
  }
  return best;
}

SequenceLabels propagate_labels(
    std::span<const std::vector<geometry::Point3D>> centroids,
    const SeedSelection& seed, double gate) {
  if (seed.label < 1 || !is_object_class(seed.label)) {
    fail(ErrorCode::kInvalidArgument,
         "object label " + std::to_string(seed.label) + " not in 1..4");
  }
  if (!(gate > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "propagation gate must be > 0");
  }
  if (centroids.empty()) fail(ErrorCode::kEmpty, "empty sequence");
  const auto& first = centroids.front();
  if (first.empty()) {
    fail(ErrorCode::kEmpty, "frame 1 has no instances to seed from");
  }
  if (seed.instance < 1 || seed.instance > static_cast<int>(first.size())) {
    fail(ErrorCode::kOutOfRange,
         "seed instance " + std::to_string(seed.instance) + " not in 1.." +
             std::to_string(first.size()));
  }

  SequenceLabels labels;
  labels.reserve(centroids.size());
  labels.emplace_back(first.size(), kNoObject);
  labels.front()[seed.instance - 1] = seed.label;
  geometry::Point3D last = first[seed.instance - 1];

  for (std::size_t f = 1; f < centroids.size(); ++f) {
    labels.emplace_back(centroids[f].size(), kNoObject);
    const auto nearest = nearest_instance(centroids[f], last);
    if (nearest && nearest->distance <= gate) {
      labels.back()[nearest->index] = seed.label;
      last = centroids[f][nearest->index];
    }
  }
  return labels;
}

SequenceLabels propagate_labels(
    std::span<const chromakey::FrameInstances> frames,
    const SeedSelection& seed, double gate) {
  std::vector<std::vector<geometry::Point3D>> centroids;
  centroids.reserve(frames.size());
  for (const auto& frame : frames) {
    auto& c = centroids.emplace_back();
    for (const auto& inst : frame.instances) c.push_back(inst.centroid);
  }
  return propagate_labels(centroids, seed, gate);
}

}  // namespace handlabel::propagate
