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

#ifndef HANDLABEL_CORE_INPAINT_HPP_
#define HANDLABEL_CORE_INPAINT_HPP_

#include "core/image.hpp"

namespace handlabel::inpaint {

struct InpaintParams {
  int num_scales = 3;
  double spatial_sigma = 3.0;  // pixels, at every scale
  double range_sigma = 20.0;   // Euclidean RGB distance
  int kernel_radius = 5;

  // Throws kInvalidArgument when a field is out of range.
  void validate() const;
};

// RGB-guided hole filling over a coarse-to-fine pyramid.
//
// Each level is half the size of the one above. Holes are filled with the
// cross-bilateral average of observed neighbours within kernel_radius:
//
//   w(p, q) = exp(-|p - q|^2 / 2 s^2) * exp(-|rgb(p) - rgb(q)|^2 / 2 r^2)
//
// A hole with no observed neighbour takes the value filled at the next
// coarser level; at the coarsest level such holes are filled by repeating
// the pass over the growing set of filled pixels. Observed pixels are never
// modified, and every filled value is a convex combination of observed
// depths.
//
// Throws kRegistration if the frames differ in size and kEmpty if the frame
// has no observed depth at all.
DepthFrame inpaint(const DepthFrame& depth, const RgbFrame& rgb,
                   const InpaintParams& params = {});

}  // namespace handlabel::inpaint

#endif  // HANDLABEL_CORE_INPAINT_HPP_
