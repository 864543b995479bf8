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

// On-disk sequences for tests that go through ingest.

#ifndef HANDLABEL_TESTS_SUPPORT_SEQUENCES_HPP_
#define HANDLABEL_TESTS_SUPPORT_SEQUENCES_HPP_

#include <filesystem>
#include <string>

#include "core/image_io.hpp"
#include "core/ingest.hpp"

namespace fixtures {

inline handlabel::ingest::SequenceManifest tiny_manifest(int num_frames) {
  handlabel::ingest::SequenceManifest m;
  m.id = "tiny";
  m.num_frames = num_frames;
  m.intrinsics = {50.0, 50.0, 8.0, 6.0};
  return m;
}

// Writes frame `index` as a w x h pair: gray RGB and a depth ramp.
inline void write_tiny_frame(const std::filesystem::path& dir, int index, int w,
                             int h, int rgb_w = -1) {
  using namespace handlabel;
  const std::string stem =
      ingest::format_frame_stem(ingest::kDefaultFramePattern, index);
  RgbFrame rgb(rgb_w < 0 ? w : rgb_w, h, Rgb{90, 90, 90});
  DepthFrame depth(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      depth.at(r, c) = static_cast<std::uint16_t>(1000 + 10 * r + c + index);
    }
  }
  io::write_rgb_png(dir / (stem + ingest::kRgbSuffix), rgb);
  io::write_depth_png(dir / (stem + ingest::kDepthSuffix), depth);
}

inline void write_tiny_sequence(const std::filesystem::path& dir, int num_frames,
                                int w = 16, int h = 12) {
  handlabel::ingest::write_sequence_metadata(dir, tiny_manifest(num_frames));
  for (int i = 1; i <= num_frames; ++i) write_tiny_frame(dir, i, w, h);
}

}  // namespace fixtures

#endif  // HANDLABEL_TESTS_SUPPORT_SEQUENCES_HPP_
