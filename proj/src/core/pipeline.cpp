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

#include "core/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/inpaint.hpp"
#include "core/parallel.hpp"
#include "core/regions.hpp"
#include "json.hpp"

namespace handlabel::pipeline {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::vector<chromakey::FrameInstances> extract_sequence(
    const ingest::Sequence& seq, const config::PipelineConfig& config,
    bool inpaint_first, int jobs) {
  config.validate();
  const auto& k = seq.manifest().intrinsics;
  std::vector<chromakey::FrameInstances> frames(seq.num_frames());
  parallel_for(frames.size(), jobs, [&](std::size_t i) {
    const int index = static_cast<int>(i) + 1;
    ingest::RegisteredFramePair pair = seq.load_frame(index);
    if (inpaint_first) {
      pair.depth = inpaint::inpaint(pair.depth, pair.rgb, config.inpaint);
    } else if (const std::size_t holes = count_holes(pair.depth); holes > 0) {
      fail(ErrorCode::kDepthHoles,
           "frame " + std::to_string(index) + " has " + std::to_string(holes) +
               " depth holes; run inpaint first or pass --inpaint");
    }
    frames[i] = chromakey::extract_instances(pair, k, config.chromakey);
  });
  return frames;
}

annotations::AnnotationFile to_annotations(
    const ingest::SequenceManifest& manifest,
    const std::vector<chromakey::FrameInstances>& frames, double roi_alpha) {
  annotations::AnnotationFile file;
  file.sequence_id = manifest.id;
  int next_id = 1;
  for (const auto& fr : frames) {
    file.images.push_back(
        {fr.frame_index,
         ingest::format_frame_stem(manifest.frame_pattern, fr.frame_index) +
             ingest::kRgbSuffix,
         manifest.width, manifest.height});
    for (const auto& inst : fr.instances) {
      annotations::Annotation a;
      a.id = next_id++;
      a.image_id = fr.frame_index;
      a.category_id = propagate::kNoObject;
      a.mask = inst.pixels;
      a.centroid = inst.centroid;
      a.roi_plus = geometry::clip_roi(geometry::expand_roi(inst.bbox, roi_alpha),
                                      manifest.width, manifest.height);
      file.annotations.push_back(std::move(a));
    }
  }
  return file;
}

annotations::AnnotationFile label_sequence(const ingest::Sequence& seq,
                                           const config::PipelineConfig& config,
                                           bool inpaint_first, int jobs) {
  return to_annotations(seq.manifest(),
                        extract_sequence(seq, config, inpaint_first, jobs),
                        config.roi_alpha);
}

void inpaint_sequence(const ingest::Sequence& seq,
                      const std::filesystem::path& out_dir,
                      const inpaint::InpaintParams& params, int jobs) {
  params.validate();
  if (std::filesystem::exists(out_dir) &&
      std::filesystem::equivalent(out_dir, seq.dir())) {
    fail(ErrorCode::kInvalidArgument, "output directory equals the input");
  }
  const ingest::SequenceManifest& m = seq.manifest();
  ingest::write_sequence_metadata(out_dir, m);
  parallel_for(static_cast<std::size_t>(m.num_frames), jobs, [&](std::size_t i) {
    const int index = static_cast<int>(i) + 1;
    const ingest::RegisteredFramePair pair = seq.load_frame(index);
    const std::string stem = ingest::format_frame_stem(m.frame_pattern, index);
    io::write_rgb_png(out_dir / (stem + ingest::kRgbSuffix), pair.rgb);
    io::write_depth_png(out_dir / (stem + ingest::kDepthSuffix),
                        inpaint::inpaint(pair.depth, pair.rgb, params));
  });
}

annotations::AnnotationFile propagate_annotations(
    const annotations::AnnotationFile& file,
    const propagate::SeedSelection& seed, double gate,
    const ingest::Sequence* seq) {
  file.validate();
  const auto grouped = file.by_image();
  std::vector<std::vector<geometry::Point3D>> centroids;
  centroids.reserve(grouped.size());
  for (const auto& [image_id, indices] : grouped) {
    std::vector<geometry::Point3D> frame;
    std::optional<ingest::RegisteredFramePair> pair;
    for (std::size_t idx : indices) {
      const annotations::Annotation& a = file.annotations[idx];
      if (a.centroid) {
        frame.push_back(*a.centroid);
        continue;
      }
      if (seq == nullptr) {
        fail(ErrorCode::kInvalidArgument,
             "annotation " + std::to_string(a.id) +
                 " has no centroid_3d; pass the sequence directory");
      }
      if (!pair) pair = seq->load_frame(image_id);
      frame.push_back(geometry::mask_centroid_3d(a.mask, pair->depth,
                                                 seq->manifest().intrinsics));
    }
    centroids.push_back(std::move(frame));
  }
  if (!grouped.empty() && grouped.front().second.empty()) {
    fail(ErrorCode::kEmpty, "frame " + std::to_string(grouped.front().first) +
                                " has no instances to seed from");
  }
  const propagate::SequenceLabels labels =
      propagate::propagate_labels(centroids, seed, gate);
  annotations::AnnotationFile out = file;
  for (std::size_t f = 0; f < grouped.size(); ++f) {
    const auto& indices = grouped[f].second;
    for (std::size_t j = 0; j < indices.size(); ++j) {
      out.annotations[indices[j]].category_id = labels[f][j];
    }
  }
  return out;
}

std::vector<DistanceRow> region_distances(
    const annotations::AnnotationFile& file, const ingest::Sequence& seq,
    const std::filesystem::path& regions_path) {
  const auto regions = regions::load(regions_path, seq.manifest().intrinsics);
  std::vector<DistanceRow> rows;
  for (const auto& [image_id, indices] : file.by_image()) {
    std::optional<ingest::RegisteredFramePair> pair;
    for (std::size_t j = 0; j < indices.size(); ++j) {
      const annotations::Annotation& a = file.annotations[indices[j]];
      geometry::Point3D c;
      if (a.centroid) {
        c = *a.centroid;
      } else {
        if (!pair) pair = seq.load_frame(image_id);
        c = geometry::mask_centroid_3d(a.mask, pair->depth,
                                       seq.manifest().intrinsics);
      }
      for (const auto& region : regions) {
        rows.push_back({image_id, static_cast<int>(j) + 1, region.name,
                        geometry::distance_to_region(c, region)});
      }
    }
  }
  return rows;
}

std::string distances_csv(const std::vector<DistanceRow>& rows) {
  std::string out = "frame,instance,region,distance_m\n";
  for (const auto& r : rows) {
    out += std::to_string(r.frame) + "," + std::to_string(r.instance) + "," +
           r.region + "," + shortest(r.distance_m) + "\n";
  }
  return out;
}

eval::ApReport evaluate_files(const std::filesystem::path& gt_path,
                              const std::filesystem::path& pred_path,
                              const eval::EvalParams& params) {
  const annotations::AnnotationFile gt = annotations::load(gt_path);
  const auto preds = annotations::load_predictions(pred_path);
  std::map<int, const annotations::ImageRecord*> images;
  for (const auto& im : gt.images) images[im.id] = &im;
  for (const auto& p : preds) {
    const auto it = images.find(p.image_id);
    if (it == images.end()) {
      fail(ErrorCode::kParse, "prediction references image " +
                                  std::to_string(p.image_id) +
                                  " missing from ground truth");
    }
    for (const Pixel& px : p.mask) {
      if (px.row >= it->second->height || px.col >= it->second->width) {
        fail(ErrorCode::kParse, "prediction mask exceeds image " +
                                    std::to_string(p.image_id));
      }
    }
  }
  return eval::coco_ap(preds, annotations::to_ground_truth(gt), params);
}

std::string ap_report_json(const eval::ApReport& report, eval::EvalMode mode) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(config::eval_mode_name(mode));
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  put("AP", report.ap);
  put("AP50", report.ap50);
  put("AP75", report.ap75);
  put("APs", report.ap_small);
  put("APm", report.ap_medium);
  return j.dump() + "\n";
}

std::string ap_report_table(const eval::ApReport& report, eval::EvalMode mode) {
  auto cell = [](const std::optional<double>& v) {
    return v ? fixed(*v) : std::string("-");
  };
  std::ostringstream out;
  out << "mode       AP     AP50   AP75   APs    APm\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %-6s %-6s %-6s %-6s %-6s\n",
                std::string(config::eval_mode_name(mode)).c_str(),
                cell(report.ap).c_str(), cell(report.ap50).c_str(),
                cell(report.ap75).c_str(), cell(report.ap_small).c_str(),
                cell(report.ap_medium).c_str());
  out << line;
  return out.str();
}

annotations::AnnotationFile write_synth_sequence(
    const std::filesystem::path& dir, const SynthOptions& options) {
  const geometry::CameraIntrinsics k = synth::default_intrinsics();
  const synth::TrajectorySpec traj =
      synth::random_trajectory(options.sequence, k);
  const synth::SequenceRender render = synth::render_sequence(traj);
  synth::write_sequence(dir, options.sequence_id, k, render);
  return synth::ground_truth_annotations(render, options.sequence_id);
}

}  // namespace handlabel::pipeline
