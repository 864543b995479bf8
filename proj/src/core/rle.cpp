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

#include "core/rle.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace handlabel::rle {

Rle encode(std::span<const Pixel> pixels, int width, int height) {
  std::vector<std::uint64_t> linear;
  linear.reserve(pixels.size());
  for (const Pixel& p : pixels) {
    if (p.row < 0 || p.col < 0 || p.row >= height || p.col >= width) {
      fail(ErrorCode::kOutOfRange, "mask pixel outside image");
    }
    linear.push_back(static_cast<std::uint64_t>(p.col) * height + p.row);
  }
  std::sort(linear.begin(), linear.end());
  linear.erase(std::unique(linear.begin(), linear.end()), linear.end());

  Rle out{width, height, {}};
  const std::uint64_t total = static_cast<std::uint64_t>(width) * height;
  std::uint64_t pos = 0;
  std::size_t i = 0;
  while (pos < total) {
    // Run of unset pixels, then a run of set ones.
    const std::uint64_t next_set = i < linear.size() ? linear[i] : total;
    out.counts.push_back(static_cast<std::uint32_t>(next_set - pos));
    pos = next_set;
    if (pos == total) break;
    std::uint64_t run = 0;
    while (i < linear.size() && linear[i] == pos + run) {
      ++run;
      ++i;
    }
    out.counts.push_back(static_cast<std::uint32_t>(run));
    pos += run;
  }
  return out;
}

PixelSet decode(const Rle& rle) {
  if (rle.width < 0 || rle.height < 0) {
    fail(ErrorCode::kParse, "RLE size must be non-negative");
  }
  const std::uint64_t total =
      static_cast<std::uint64_t>(rle.width) * rle.height;
  PixelSet out;
  std::uint64_t pos = 0;
  for (std::size_t k = 0; k < rle.counts.size(); ++k) {
    const std::uint64_t run = rle.counts[k];
    if (pos + run > total) fail(ErrorCode::kParse, "RLE runs exceed image size");
    if (k % 2 == 1) {
      for (std::uint64_t j = pos; j < pos + run; ++j) {
        out.push_back({static_cast<int>(j % rle.height),
                       static_cast<int>(j / rle.height)});
      }
    }
    pos += run;
  }
  if (pos != total) fail(ErrorCode::kParse, "RLE runs do not cover the image");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace handlabel::rle
