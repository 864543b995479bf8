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

#ifndef HANDLABEL_CORE_IMAGE_IO_HPP_
#define HANDLABEL_CORE_IMAGE_IO_HPP_

#include <filesystem>

#include "core/image.hpp"

namespace handlabel::io {

struct PngHeader {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int color_type = 0;  // 0 gray, 2 RGB, 3 palette, 4 gray+alpha, 6 RGBA
};

// Reads only the IHDR chunk; cheap enough to validate whole sequences.
PngHeader read_png_header(const std::filesystem::path& path);

RgbFrame read_rgb_png(const std::filesystem::path& path);
// 16-bit single-channel PNG in millimetres.
DepthFrame read_depth_png(const std::filesystem::path& path);
// Any nonzero pixel is set.
BinaryMask read_mask_png(const std::filesystem::path& path);

void write_rgb_png(const std::filesystem::path& path, const RgbFrame& rgb);
void write_depth_png(const std::filesystem::path& path,
                     const DepthFrame& depth);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace handlabel::io

#endif  // HANDLABEL_CORE_IMAGE_IO_HPP_
