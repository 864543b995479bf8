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

// Registered RGB-D sequences on disk.
//
// Layout of a sequence directory:
//
//   manifest.json     {"id": ..., "num_frames": N, "frame_pattern": ...}
//   intrinsics.json   {"fx": ..., "fy": ..., "cx": ..., "cy": ...}
//   frames/frame_000001.rgb.png     8-bit RGB
//   frames/frame_000001.depth.png   16-bit gray, millimetres, 0 = hole
//
// frame_pattern is a printf-style stem relative to the directory, by default
// "frames/frame_%06d"; ".rgb.png" and ".depth.png" are appended. Frames are
// numbered 1..N.

#ifndef HANDLABEL_CORE_INGEST_HPP_
#define HANDLABEL_CORE_INGEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/image.hpp"

namespace handlabel::ingest {

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kIntrinsicsFile = "intrinsics.json";
inline constexpr const char* kDefaultFramePattern = "frames/frame_%06d";
inline constexpr const char* kRgbSuffix = ".rgb.png";
inline constexpr const char* kDepthSuffix = ".depth.png";

struct FramePaths {
  std::filesystem::path rgb;
  std::filesystem::path depth;
};

struct SequenceManifest {
  std::string id;
  int num_frames = 0;
  std::string frame_pattern = kDefaultFramePattern;
  geometry::CameraIntrinsics intrinsics;
  int width = 0;
  int height = 0;
  std::vector<FramePaths> frames;  // frames[i - 1] holds frame i
};

struct RegisteredFramePair {
  RgbFrame rgb;
  DepthFrame depth;
  int index = 0;
};

// Expands a frame pattern for a 1-based index, e.g. "frames/frame_000003".
std::string format_frame_stem(const std::string& pattern, int index);

// Parses intrinsics.json; checks fx, fy > 0 and a non-negative principal
// point. Bounds against the image are checked by load_sequence.
geometry::CameraIntrinsics load_intrinsics(const std::filesystem::path& path);
geometry::CameraIntrinsics load_intrinsics(const std::filesystem::path& path,
                                           int width, int height);

// Canonical manifest.json text (sorted keys, two-space indent, trailing
// newline). Loading and re-serialising this text is the identity.
std::string manifest_to_json(const SequenceManifest& manifest);
std::string intrinsics_to_json(const geometry::CameraIntrinsics& k);

// Writes manifest.json and intrinsics.json into dir.
void write_sequence_metadata(const std::filesystem::path& dir,
                             const SequenceManifest& manifest);

class Sequence {
 public:
  // Validates the manifest, intrinsics and every frame header. Registration
  // mismatches and gaps in the frame numbering are rejected here.
  static Sequence open(const std::filesystem::path& dir);

  const SequenceManifest& manifest() const { return manifest_; }
  const std::filesystem::path& dir() const { return dir_; }
  int num_frames() const { return manifest_.num_frames; }

  // index in [1, num_frames].
  RegisteredFramePair load_frame(int index) const;

 private:
  std::filesystem::path dir_;
  SequenceManifest manifest_;
};

}  // namespace handlabel::ingest

#endif  // HANDLABEL_CORE_INGEST_HPP_
