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

#ifndef HANDLABEL_CORE_PROPAGATE_HPP_
#define HANDLABEL_CORE_PROPAGATE_HPP_

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/chromakey.hpp"
#include "core/geometry.hpp"

namespace handlabel::propagate {

struct ObjectClass {
  int id;
  std::string_view name;
};

// Handheld object categories; id 0 means the hand holds nothing.
inline constexpr std::array<ObjectClass, 5> kObjectClasses = {{
    {0, "no object"},
    {1, "smartphone"},
    {2, "tablet"},
    {3, "drink"},
    {4, "book"},
}};

inline constexpr int kNoObject = 0;
inline constexpr double kDefaultGate = 0.15;  // metres

bool is_object_class(int id);
// Throws kOutOfRange for ids outside the table.
std::string_view object_class_name(int id);

struct SeedSelection {
  int label = 1;     // object class in 1..4
  int instance = 1;  // 1-based index into the first frame's instances
};

struct Nearest {
  std::size_t index;  // 0-based
  double distance;    // metres
};

// Argmin of centroid distance to `last`; ties go to the lowest index.
// Returns nullopt for an empty frame.
std::optional<Nearest> nearest_instance(
    std::span<const geometry::Point3D> centroids,
    const geometry::Point3D& last);

// labels[f][j] is the object class of instance j in frame f (0-based).
using SequenceLabels = std::vector<std::vector<int>>;

// Follows the seeded hand through the sequence: in every later frame the
// instance nearest to the last labelled one inherits the label when it lies
// within `gate` metres and becomes the new reference. Otherwise the frame
// stays all-zero and the reference is kept, which covers occlusion and
// frames without instances.
//
// Throws kEmpty for an empty sequence or first frame, kOutOfRange for an
// invalid seed index, kInvalidArgument for a label outside 1..4 or a
// non-positive gate.
SequenceLabels propagate_labels(
    std::span<const std::vector<geometry::Point3D>> centroids,
    const SeedSelection& seed, double gate = kDefaultGate);

SequenceLabels propagate_labels(
    std::span<const chromakey::FrameInstances> frames,
    const SeedSelection& seed, double gate = kDefaultGate);

}  // namespace handlabel::propagate

#endif  // HANDLABEL_CORE_PROPAGATE_HPP_
