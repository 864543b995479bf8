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

// Sequence-level operations behind the command-line tool.

#ifndef HANDLABEL_CORE_PIPELINE_HPP_
#define HANDLABEL_CORE_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "core/annotations.hpp"
#include "core/config.hpp"
#include "core/ingest.hpp"
#include "core/propagate.hpp"
#include "core/synth.hpp"

namespace handlabel::pipeline {

// Instance masks for every frame, in frame order. Frames run on `jobs`
// threads (0 = all cores); the result does not depend on `jobs`. Without
// `inpaint_first`, a frame with depth holes throws kDepthHoles naming it.
std::vector<chromakey::FrameInstances> extract_sequence(
    const ingest::Sequence& seq, const config::PipelineConfig& config,
    bool inpaint_first, int jobs);

// Annotation records for extracted instances: category 0, 3D centroid and
// the clipped RoI+ box. Ids count from 1 in frame and instance order.
annotations::AnnotationFile to_annotations(
    const ingest::SequenceManifest& manifest,
    const std::vector<chromakey::FrameInstances>& frames, double roi_alpha);

annotations::AnnotationFile label_sequence(const ingest::Sequence& seq,
                                           const config::PipelineConfig& config,
                                           bool inpaint_first, int jobs);

// Writes an in-painted copy of the sequence (same manifest, RGB copied).
void inpaint_sequence(const ingest::Sequence& seq,
                      const std::filesystem::path& out_dir,
                      const inpaint::InpaintParams& params, int jobs);

// Sets category_id on every annotation following the seeded hand. Frames
// are the file's images in id order. Centroids come from centroid_3d, or
// from `seq` depth when given (required if any centroid is missing).
annotations::AnnotationFile propagate_annotations(
    const annotations::AnnotationFile& file,
    const propagate::SeedSelection& seed, double gate,
    const ingest::Sequence* seq = nullptr);

struct DistanceRow {
  int frame = 0;
  int instance = 0;  // 1-based, file order within the frame
  std::string region;
  double distance_m = 0.0;
};

std::vector<DistanceRow> region_distances(
    const annotations::AnnotationFile& file, const ingest::Sequence& seq,
    const std::filesystem::path& regions_path);

// Header "frame,instance,region,distance_m"; distances printed with enough
// digits to round-trip.
std::string distances_csv(const std::vector<DistanceRow>& rows);

eval::ApReport evaluate_files(const std::filesystem::path& gt_path,
                              const std::filesystem::path& pred_path,
                              const eval::EvalParams& params);

// {"mode": ..., "AP": ..., "AP50": ..., "AP75": ..., "APs": ..., "APm": ...}
// with null for undefined entries.
std::string ap_report_json(const eval::ApReport& report, eval::EvalMode mode);
std::string ap_report_table(const eval::ApReport& report, eval::EvalMode mode);

struct SynthOptions {
  synth::RandomSequenceOptions sequence;
  std::string sequence_id = "synth";
};

// Renders a random trajectory, writes the sequence directory and returns its
// ground-truth annotations.
annotations::AnnotationFile write_synth_sequence(
    const std::filesystem::path& dir, const SynthOptions& options);

struct Overlay {
  RgbFrame image;
  std::vector<std::string> tags;  // "1", "2", ... in instance order
};

// Frame 1 with every instance tinted and tagged by its 1-based index.
// Throws kEmpty when the frame has no instances.
Overlay seed_overlay(const RgbFrame& rgb,
                     const std::vector<PixelSet>& instances);

Overlay seed_overlay(const annotations::AnnotationFile& file,
                     const ingest::Sequence& seq);

}  // namespace handlabel::pipeline

#endif  // HANDLABEL_CORE_PIPELINE_HPP_
