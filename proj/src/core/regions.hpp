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

// Calibrated control regions (steering wheel, gear stick, ...).
//
//   {"regions": [
//     {"name": "wheel", "mask": "wheel_mask.png", "depth": "wheel_depth.png"},
//     {"name": "gear", "points": [[x, y, z], ...]}
//   ]}
//
// Mask and depth paths are relative to the regions file. Mask pixels with
// depth are back-projected with the sequence intrinsics; "points" are
// camera-frame metres used as is.

#ifndef HANDLABEL_CORE_REGIONS_HPP_
#define HANDLABEL_CORE_REGIONS_HPP_

#include <filesystem>
#include <vector>

#include "core/geometry.hpp"

namespace handlabel::regions {

// Throws kIo for a missing file, kParse for schema errors and kEmpty for a
// region without points.
std::vector<geometry::ControlRegion> load(const std::filesystem::path& path,
                                          const geometry::CameraIntrinsics& k);

}  // namespace handlabel::regions

#endif  // HANDLABEL_CORE_REGIONS_HPP_
