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

// Deterministic synthetic RGB-D scenes with exact ground truth.
//
// Hands are flat green blobs at a constant depth, occluders are non-green
// rectangles, and the background is a depth plane striped gray and red.
// Visibility is resolved with a z-buffer, so the ground-truth mask of a
// blob is exactly the set of pixels where it is the nearest surface.

#ifndef HANDLABEL_CORE_SYNTH_HPP_
#define HANDLABEL_CORE_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "core/annotations.hpp"
#include "core/chromakey.hpp"
#include "core/geometry.hpp"
#include "core/ingest.hpp"
#include "core/propagate.hpp"

namespace handlabel::synth {

inline constexpr Rgb kHandGreen{30, 200, 60};

enum class Shape { kEllipse, kRect };

struct BlobSpec {
  Shape shape = Shape::kEllipse;
  double center_x = 0.0;  // pixels
  double center_y = 0.0;
  double radius_x = 10.0;  // pixels; half-width for rectangles
  double radius_y = 10.0;
  std::uint16_t depth_mm = 800;
};

struct OccluderSpec {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;
  Rgb color{120, 120, 120};
  std::uint16_t depth_mm = 500;
};

struct SceneSpec {
  int width = 512;
  int height = 424;
  std::uint16_t background_depth = 2500;
  std::vector<BlobSpec> blobs;
  std::vector<OccluderSpec> occluders;
  std::uint64_t seed = 0;
  int color_noise = 10;             // uniform +- per channel
  double depth_noise_sigma = 3.0;   // mm, Gaussian
  double hole_fraction = 0.0;       // share of pixels zeroed as holes

  // Throws kInvalidArgument on a non-positive size, a blob centre outside
  // the image, non-positive radii or an out-of-range hole fraction.
  void validate() const;
};

struct SceneRender {
  ingest::RegisteredFramePair pair;
  // Visible pixels of every blob, indexed like SceneSpec::blobs.
  std::vector<PixelSet> blob_pixels;
  // Blobs with at least one visible pixel, in blob order. Centroids use the
  // noise-free depth.
  chromakey::FrameInstances ground_truth;
  std::vector<int> ground_truth_blob;  // blob index of each instance
  DepthFrame clean_depth;              // before noise and holes
};

SceneRender render_scene(const SceneSpec& spec,
                         const geometry::CameraIntrinsics& k,
                         int frame_index = 1);

struct BlobTrack {
  Shape shape = Shape::kEllipse;
  double radius_x = 20.0;
  double radius_y = 20.0;
  std::vector<geometry::Point3D> positions;  // centre per frame, metres
  std::vector<bool> visible;                 // per frame
  int held_object = propagate::kNoObject;
};

struct TrajectorySpec {
  SceneSpec base;  // blobs are ignored; tracks supply them per frame
  geometry::CameraIntrinsics intrinsics;
  int num_frames = 1;
  std::vector<BlobTrack> tracks;
  double gate = propagate::kDefaultGate;

  void validate() const;
};

struct SequenceRender {
  std::vector<SceneRender> frames;
  // Per frame, one entry per ground-truth instance: the object a held track
  // carries while it is visible and within `gate` of its last labelled
  // position, 0 otherwise.
  propagate::SequenceLabels labels;
};

SequenceRender render_sequence(const TrajectorySpec& spec);

// Intrinsics used by the generators: fx = fy = 365, principal point at the
// image centre of a 512 x 424 frame.
geometry::CameraIntrinsics default_intrinsics();

struct RandomSceneOptions {
  std::uint64_t seed = 0;
  int min_blobs = 1;
  int max_blobs = 4;
  double min_separation = 0.14;  // metres between ground-truth centroids
  int min_area = 21;             // pixels per visible blob
  bool allow_overlap = true;     // may place one depth-separated 2D overlap
};

SceneSpec random_scene(const RandomSceneOptions& options,
                       const geometry::CameraIntrinsics& k);

struct RandomSequenceOptions {
  std::uint64_t seed = 0;
  int num_frames = 30;
  int object_label = 1;
  double max_step = 0.03;        // metres per frame
  int num_gaps = 1;
  int max_gap = 3;               // frames
  double max_reappear = 0.12;    // metres between last seen and reappearance
  int num_jumps = 1;
  double jump = 0.25;            // metres, single-frame displacement
  double hole_fraction = 0.0;
};

// Two hands: the first carries the object and wanders on the left half of
// the image, the second sits on the right. The holder disappears for
// num_gaps gaps and glitches away by `jump` metres on num_jumps frames.
TrajectorySpec random_trajectory(const RandomSequenceOptions& options,
                                 const geometry::CameraIntrinsics& k);

// Frames, manifest, intrinsics and ground-truth annotations for a
// rendered sequence.
annotations::AnnotationFile ground_truth_annotations(
    const SequenceRender& render, const std::string& sequence_id);

void write_sequence(const std::filesystem::path& dir,
                    const std::string& sequence_id,
                    const geometry::CameraIntrinsics& k,
                    const SequenceRender& render);

// Steering-wheel calibration fixture: an annulus centred on the principal
// point at a constant depth. Pixels whose distance to the centre lies in
// [inner_px, outer_px] are labelled.
struct WheelFixture {
  BinaryMask mask;
  DepthFrame depth;
};

WheelFixture make_wheel(int width, int height,
                        const geometry::CameraIntrinsics& k, double inner_px,
                        double outer_px, std::uint16_t depth_mm);

}  // namespace handlabel::synth

#endif  // HANDLABEL_CORE_SYNTH_HPP_
