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

#include "handlabel/handlabel.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <string_view>

#include "core/annotations.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/image_io.hpp"
#include "core/ingest.hpp"
#include "core/pipeline.hpp"

struct hl_config {
  handlabel::config::PipelineConfig value;
};

struct hl_sequence {
  handlabel::ingest::Sequence value;
};

struct hl_annotations {
  handlabel::annotations::AnnotationFile value;
};

struct hl_distance_table {
  std::vector<handlabel::pipeline::DistanceRow> rows;
};

namespace {

using handlabel::Error;
using handlabel::ErrorCode;

thread_local std::string g_last_error;

hl_status record(hl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, mapping every exception to a status and the thread's last error.
template <typename Fn>
hl_status guarded(Fn&& fn) {
  try {
    fn();
    return HL_OK;
  } catch (const Error& e) {
    return record(static_cast<hl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(HL_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return record(HL_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return record(HL_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) {
    handlabel::fail(ErrorCode::kInvalidArgument,
                    std::string(name) + " must not be NULL");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

handlabel::geometry::CameraIntrinsics to_core(const hl_intrinsics& k) {
  return {k.fx, k.fy, k.cx, k.cy};
}

const handlabel::config::PipelineConfig& config_or_default(
    const hl_config* c) {
  static const handlabel::config::PipelineConfig kDefault;
  return c ? c->value : kDefault;
}

hl_ap_report to_c(const handlabel::eval::ApReport& r) {
  hl_ap_report out{};
  auto put = [](const std::optional<double>& v, double& value, int& has) {
    has = v.has_value() ? 1 : 0;
    value = v.value_or(0.0);
  };
  put(r.ap, out.ap, out.has_ap);
  put(r.ap50, out.ap50, out.has_ap50);
  put(r.ap75, out.ap75, out.has_ap75);
  put(r.ap_small, out.ap_small, out.has_ap_small);
  put(r.ap_medium, out.ap_medium, out.has_ap_medium);
  return out;
}

handlabel::eval::ApReport to_core(const hl_ap_report& r) {
  auto get = [](double v, int has) {
    return has ? std::optional<double>(v) : std::nullopt;
  };
  return {get(r.ap, r.has_ap), get(r.ap50, r.has_ap50), get(r.ap75, r.has_ap75),
          get(r.ap_small, r.has_ap_small), get(r.ap_medium, r.has_ap_medium)};
}

}  // namespace

extern "C" {

const char* hl_status_name(hl_status status) {
  switch (status) {
    case HL_OK: return "ok";
    case HL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HL_ERR_IO: return "io";
    case HL_ERR_PARSE: return "parse";
    case HL_ERR_REGISTRATION: return "registration";
    case HL_ERR_DEPTH_HOLES: return "depth_holes";
    case HL_ERR_EMPTY: return "empty";
    case HL_ERR_OUT_OF_RANGE: return "out_of_range";
    case HL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hl_last_error(void) { return g_last_error.c_str(); }

const char* hl_version(void) { return "1.0.0"; }

void hl_string_free(char* s) { std::free(s); }

hl_status hl_intrinsics_load(const char* path, hl_intrinsics* out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto k = handlabel::ingest::load_intrinsics(path);
    *out = {k.fx, k.fy, k.cx, k.cy};
  });
}

hl_status hl_backproject(const hl_intrinsics* k, double x, double y,
                         double depth_m, hl_point3d* out) {
  return guarded([&] {
    require(k, "intrinsics");
    require(out, "out");
    const auto p = handlabel::geometry::backproject(x, y, depth_m, to_core(*k));
    *out = {p.x, p.y, p.z};
  });
}

hl_status hl_project(const hl_intrinsics* k, const hl_point3d* p,
                     double out_xy[2]) {
  return guarded([&] {
    require(k, "intrinsics");
    require(p, "point");
    require(out_xy, "out");
    const auto ip = handlabel::geometry::project({p->x, p->y, p->z}, to_core(*k));
    out_xy[0] = ip.x;
    out_xy[1] = ip.y;
  });
}

hl_status hl_expand_roi(const hl_roi* roi, double alpha, hl_roi* out) {
  return guarded([&] {
    require(roi, "roi");
    require(out, "out");
    const auto r =
        handlabel::geometry::expand_roi({roi->x, roi->y, roi->w, roi->h}, alpha);
    *out = {r.x, r.y, r.w, r.h};
  });
}

hl_status hl_config_create(hl_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new hl_config{};
  });
}

hl_status hl_config_load(const char* path, hl_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new hl_config{handlabel::config::load(path)};
  });
}

hl_status hl_config_set_number(hl_config* config, const char* key,
                               double value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    handlabel::config::PipelineConfig next = config->value;
    handlabel::config::set_value(next, key, value);
    next.validate();
    config->value = next;
  });
}

hl_status hl_config_set_string(hl_config* config, const char* key,
                               const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    handlabel::config::PipelineConfig next = config->value;
    handlabel::config::set_value(next, key, std::string(value));
    next.validate();
    config->value = next;
  });
}

hl_status hl_config_get_number(const hl_config* config, const char* key,
                               double* out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    const auto& c = config->value;
    const std::string_view k(key);
    if (k == "chromakey.key_threshold") {
      *out = c.chromakey.key_threshold;
    } else if (k == "chromakey.min_area") {
      *out = c.chromakey.min_area;
    } else if (k == "chromakey.merge_distance") {
      *out = c.chromakey.merge_distance;
    } else if (k == "chromakey.connectivity") {
      *out = c.chromakey.connectivity;
    } else if (k == "chromakey.bimodal_min_fraction") {
      *out = c.chromakey.bimodal_min_fraction;
    } else if (k == "inpaint.num_scales") {
      *out = c.inpaint.num_scales;
    } else if (k == "inpaint.spatial_sigma") {
      *out = c.inpaint.spatial_sigma;
    } else if (k == "inpaint.range_sigma") {
      *out = c.inpaint.range_sigma;
    } else if (k == "inpaint.kernel_radius") {
      *out = c.inpaint.kernel_radius;
    } else if (k == "propagate.gate") {
      *out = c.gate;
    } else if (k == "eval.max_dets") {
      *out = c.eval.max_dets;
    } else if (k == "roi.alpha") {
      *out = c.roi_alpha;
    } else {
      handlabel::fail(ErrorCode::kParse,
                      "no numeric config key " + std::string(k));
    }
  });
}

void hl_config_destroy(hl_config* config) { delete config; }

hl_status hl_sequence_open(const char* dir, hl_sequence** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = new hl_sequence{handlabel::ingest::Sequence::open(dir)};
  });
}

hl_status hl_sequence_num_frames(const hl_sequence* seq, int* out) {
  return guarded([&] {
    require(seq, "sequence");
    require(out, "out");
    *out = seq->value.num_frames();
  });
}

hl_status hl_sequence_size(const hl_sequence* seq, int* width, int* height) {
  return guarded([&] {
    require(seq, "sequence");
    require(width, "width");
    require(height, "height");
    *width = seq->value.manifest().width;
    *height = seq->value.manifest().height;
  });
}

hl_status hl_sequence_intrinsics(const hl_sequence* seq, hl_intrinsics* out) {
  return guarded([&] {
    require(seq, "sequence");
    require(out, "out");
    const auto& k = seq->value.manifest().intrinsics;
    *out = {k.fx, k.fy, k.cx, k.cy};
  });
}

hl_status hl_sequence_frame_holes(const hl_sequence* seq, int index,
                                  size_t* out) {
  return guarded([&] {
    require(seq, "sequence");
    require(out, "out");
    *out = handlabel::count_holes(seq->value.load_frame(index).depth);
  });
}

void hl_sequence_destroy(hl_sequence* seq) { delete seq; }

hl_status hl_inpaint_sequence(const hl_sequence* seq, const hl_config* config,
                              const char* out_dir, int jobs) {
  return guarded([&] {
    require(seq, "sequence");
    require(out_dir, "out_dir");
    handlabel::pipeline::inpaint_sequence(
        seq->value, out_dir, config_or_default(config).inpaint, jobs);
  });
}

hl_status hl_label_sequence(const hl_sequence* seq, const hl_config* config,
                            int inpaint, int jobs, hl_annotations** out) {
  return guarded([&] {
    require(seq, "sequence");
    require(out, "out");
    *out = new hl_annotations{handlabel::pipeline::label_sequence(
        seq->value, config_or_default(config), inpaint != 0, jobs)};
  });
}

hl_status hl_annotations_load(const char* path, hl_annotations** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new hl_annotations{handlabel::annotations::load(path)};
  });
}

hl_status hl_annotations_save(const hl_annotations* ann, const char* path) {
  return guarded([&] {
    require(ann, "annotations");
    require(path, "path");
    handlabel::annotations::save(path, ann->value);
  });
}

hl_status hl_annotations_save_results(const hl_annotations* ann,
                                      const char* path) {
  return guarded([&] {
    require(ann, "annotations");
    require(path, "path");
    const std::string text = handlabel::annotations::to_results_json_text(ann->value);
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) handlabel::fail(ErrorCode::kIo, "cannot write " + p.string());
    f << text;
  });
}

hl_status hl_annotations_count(const hl_annotations* ann, size_t* out) {
  return guarded([&] {
    require(ann, "annotations");
    require(out, "out");
    *out = ann->value.annotations.size();
  });
}

hl_status hl_annotations_num_images(const hl_annotations* ann, size_t* out) {
  return guarded([&] {
    require(ann, "annotations");
    require(out, "out");
    *out = ann->value.images.size();
  });
}

hl_status hl_annotations_get(const hl_annotations* ann, size_t index,
                             int* image_id, int* category_id, size_t* area) {
  return guarded([&] {
    require(ann, "annotations");
    if (index >= ann->value.annotations.size()) {
      handlabel::fail(ErrorCode::kOutOfRange,
                      "annotation index " + std::to_string(index) +
                          " out of range");
    }
    const auto& a = ann->value.annotations[index];
    if (image_id) *image_id = a.image_id;
    if (category_id) *category_id = a.category_id;
    if (area) *area = a.mask.size();
  });
}

void hl_annotations_destroy(hl_annotations* ann) { delete ann; }

hl_status hl_propagate(const hl_annotations* in, const hl_sequence* seq,
                       int seed_instance, int object_label, double gate,
                       hl_annotations** out) {
  return guarded([&] {
    require(in, "annotations");
    require(out, "out");
    *out = new hl_annotations{handlabel::pipeline::propagate_annotations(
        in->value, {object_label, seed_instance}, gate,
        seq ? &seq->value : nullptr)};
  });
}

hl_status hl_seed_overlay(const hl_annotations* ann, const hl_sequence* seq,
                          const char* out_png, size_t* num_instances) {
  return guarded([&] {
    require(ann, "annotations");
    require(seq, "sequence");
    require(out_png, "out_png");
    const auto overlay = handlabel::pipeline::seed_overlay(ann->value, seq->value);
    handlabel::io::write_rgb_png(out_png, overlay.image);
    if (num_instances) *num_instances = overlay.tags.size();
  });
}

hl_status hl_evaluate(const char* gt_path, const char* pred_path,
                      const hl_config* config, hl_ap_report* out) {
  return guarded([&] {
    require(gt_path, "gt_path");
    require(pred_path, "pred_path");
    require(out, "out");
    *out = to_c(handlabel::pipeline::evaluate_files(
        gt_path, pred_path, config_or_default(config).eval));
  });
}

hl_status hl_ap_report_format(const hl_ap_report* report,
                              const hl_config* config, char** json,
                              char** table) {
  return guarded([&] {
    require(report, "report");
    const auto r = to_core(*report);
    const auto mode = config_or_default(config).eval.mode;
    char* j = nullptr;
    if (json) j = copy_string(handlabel::pipeline::ap_report_json(r, mode));
    try {
      if (table) *table = copy_string(handlabel::pipeline::ap_report_table(r, mode));
    } catch (...) {
      std::free(j);
      throw;
    }
    if (json) *json = j;
  });
}

hl_status hl_distances(const hl_annotations* ann, const hl_sequence* seq,
                       const char* regions_path, hl_distance_table** out) {
  return guarded([&] {
    require(ann, "annotations");
    require(seq, "sequence");
    require(regions_path, "regions_path");
    require(out, "out");
    *out = new hl_distance_table{
        handlabel::pipeline::region_distances(ann->value, seq->value, regions_path)};
  });
}

hl_status hl_distance_table_size(const hl_distance_table* table, size_t* out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = table->rows.size();
  });
}

hl_status hl_distance_table_row(const hl_distance_table* table, size_t index,
                                int* frame, int* instance, const char** region,
                                double* distance_m) {
  return guarded([&] {
    require(table, "table");
    if (index >= table->rows.size()) {
      handlabel::fail(ErrorCode::kOutOfRange,
                      "row " + std::to_string(index) + " out of range");
    }
    const auto& r = table->rows[index];
    if (frame) *frame = r.frame;
    if (instance) *instance = r.instance;
    if (region) *region = r.region.c_str();
    if (distance_m) *distance_m = r.distance_m;
  });
}

hl_status hl_distance_table_csv(const hl_distance_table* table, char** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = copy_string(handlabel::pipeline::distances_csv(table->rows));
  });
}

void hl_distance_table_destroy(hl_distance_table* table) { delete table; }

void hl_synth_options_default(hl_synth_options* out) {
  if (out == nullptr) return;
  const handlabel::synth::RandomSequenceOptions d;
  *out = {d.seed, d.num_frames, d.object_label, d.num_gaps, d.num_jumps,
          d.hole_fraction};
}

hl_status hl_synth_write(const char* dir, const char* gt_path,
                         const hl_synth_options* options) {
  return guarded([&] {
    require(dir, "dir");
    require(gt_path, "gt_path");
    require(options, "options");
    handlabel::pipeline::SynthOptions o;
    o.sequence.seed = options->seed;
    o.sequence.num_frames = options->num_frames;
    o.sequence.object_label = options->object_label;
    o.sequence.num_gaps = options->num_gaps;
    o.sequence.num_jumps = options->num_jumps;
    o.sequence.hole_fraction = options->hole_fraction;
    o.sequence_id = "synth-" + std::to_string(options->seed);
    const auto gt = handlabel::pipeline::write_synth_sequence(dir, o);
    handlabel::annotations::save(gt_path, gt);
  });
}

}  // extern "C"
