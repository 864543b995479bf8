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

// COCO uncompressed run-length encoding: column-major runs that alternate
// unset/set, starting with the (possibly zero) count of unset pixels.

#ifndef HANDLABEL_CORE_RLE_HPP_
#define HANDLABEL_CORE_RLE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "core/image.hpp"

namespace handlabel::rle {

struct Rle {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const Rle&, const Rle&) = default;
};

// Throws kOutOfRange if a pixel lies outside width x height.
Rle encode(std::span<const Pixel> pixels, int width, int height);

// Throws kParse if the runs do not cover exactly width * height pixels.
PixelSet decode(const Rle& rle);

}  // namespace handlabel::rle

#endif  // HANDLABEL_CORE_RLE_HPP_
