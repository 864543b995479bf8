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

// handlabel: command-line front end. Talks to the library only through the
// C interface.
//
// Errors go to stderr as a single line "error: <status>: <message>" and the
// process exits with the numeric status (1..8).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "handlabel/handlabel.h"

namespace {

// Carries a failed status out of a subcommand.
struct Failure {
  hl_status status;
  std::string message;
};

void check(hl_status status) {
  if (status != HL_OK) throw Failure{status, hl_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) {
  throw Failure{HL_ERR_INVALID_ARGUMENT, message};
}

// Owning wrappers so early exits release handles.
template <typename T, void (*Destroy)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr_); }
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Config = Handle<hl_config, hl_config_destroy>;
using Sequence = Handle<hl_sequence, hl_sequence_destroy>;
using Annotations = Handle<hl_annotations, hl_annotations_destroy>;
using DistanceTable = Handle<hl_distance_table, hl_distance_table_destroy>;

class String {
 public:
  ~String() { hl_string_free(ptr_); }
  char** out() { return &ptr_; }
  const char* get() const { return ptr_ ? ptr_ : ""; }

 private:
  char* ptr_ = nullptr;
};

// Shortest round-trip text; -0 prints as 0. With keep_point, whole values
// keep a trailing ".0" (depth reads as metres, not a pixel count).
std::string format_number(double v, bool keep_point = false) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (keep_point && s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

struct Globals {
  std::string config_path;
  int jobs = 0;
  bool verbose = false;
};

void log(const Globals& g, const std::string& line) {
  if (g.verbose) std::cerr << line << "\n";
}

void load_config(const Globals& g, Config& config) {
  if (g.config_path.empty()) {
    check(hl_config_create(config.out()));
  } else {
    check(hl_config_load(g.config_path.c_str(), config.out()));
  }
}

void set_if(Config& config, const char* key, const std::optional<double>& v) {
  if (v) check(hl_config_set_number(config.get(), key, *v));
}

void set_if(Config& config, const char* key, const std::optional<int>& v) {
  if (v) check(hl_config_set_number(config.get(), key, *v));
}

void set_if(Config& config, const char* key,
            const std::optional<std::string>& v) {
  if (v) check(hl_config_set_string(config.get(), key, v->c_str()));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{HL_ERR_IO, "cannot write " + path};
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand-instance labelling for registered RGB-D sequences"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "TOML or JSON configuration file");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose", g.verbose, "Progress on stderr");

  // ingest-check
  std::string check_dir;
  auto* ingest = app.add_subcommand("ingest-check", "Validate a sequence directory");
  ingest->add_option("sequence", check_dir, "Sequence directory")->required();

  // inpaint
  std::string inpaint_dir, inpaint_out;
  std::optional<int> num_scales, kernel_radius;
  std::optional<double> spatial_sigma, range_sigma;
  auto* inpaint = app.add_subcommand("inpaint", "Fill depth holes, writing a new sequence");
  inpaint->add_option("sequence", inpaint_dir, "Sequence directory")->required();
  inpaint->add_option("-o,--out", inpaint_out, "Output sequence directory")->required();
  inpaint->add_option("--scales", num_scales, "Pyramid levels");
  inpaint->add_option("--spatial-sigma", spatial_sigma, "Spatial sigma (px)");
  inpaint->add_option("--range-sigma", range_sigma, "RGB range sigma");
  inpaint->add_option("--radius", kernel_radius, "Kernel radius (px)");

  // label
  std::string label_dir, label_out;
  bool label_inpaint = false;
  std::optional<double> key_threshold, merge_distance, roi_alpha;
  std::optional<int> min_area, connectivity;
  std::optional<std::string> split_mode;
  auto* label = app.add_subcommand("label", "Extract hand instance masks");
  label->add_option("sequence", label_dir, "Sequence directory")->required();
  label->add_option("-o,--out", label_out, "Annotation file to write")->required();
  label->add_flag("--inpaint", label_inpaint, "Fill depth holes first");
  label->add_option("--key-threshold", key_threshold, "Minimum g - Y");
  label->add_option("--min-area", min_area, "Drop fragments of at most this many pixels");
  label->add_option("--merge-distance", merge_distance, "Fragment merge distance (m)");
  label->add_option("--connectivity", connectivity, "4 or 8");
  label->add_option("--split-mode", split_mode, "always | bimodal-gated");
  label->add_option("--alpha", roi_alpha, "RoI+ expansion factor");

  // seed-overlay
  std::string overlay_dir, overlay_ann, overlay_out;
  auto* overlay = app.add_subcommand("seed-overlay", "Number the instances of frame 1");
  overlay->add_option("sequence", overlay_dir, "Sequence directory")->required();
  overlay->add_option("-a,--annotations", overlay_ann, "Annotation file")->required();
  overlay->add_option("-o,--out", overlay_out, "PNG to write")->required();

  // propagate
  std::string prop_ann, prop_out, prop_seq;
  int seed_instance = 0, object_label = 0;
  std::optional<double> gate;
  auto* prop = app.add_subcommand("propagate", "Label the object-holding hand over time");
  prop->add_option("-a,--annotations", prop_ann, "Annotation file")->required();
  prop->add_option("--seed-instance", seed_instance, "1-based instance in frame 1")->required();
  prop->add_option("--object-label", object_label,
                   "1 smartphone, 2 tablet, 3 drink, 4 book")->required();
  prop->add_option("--gate", gate, "Occlusion gate (m)");
  prop->add_option("--sequence", prop_seq, "Sequence directory, for missing centroids");
  prop->add_option("-o,--out", prop_out, "Annotation file to write")->required();

  // export
  std::string export_ann, export_out, export_format = "results";
  auto* exp = app.add_subcommand("export", "Write annotations as COCO results or a COCO file");
  exp->add_option("-a,--annotations", export_ann, "Annotation file")->required();
  exp->add_option("-o,--out", export_out, "File to write")->required();
  exp->add_option("--format", export_format, "results | coco")
      ->check(CLI::IsMember({"results", "coco"}));

  // eval
  std::string eval_gt, eval_pred, eval_json;
  std::optional<std::string> eval_mode;
  std::optional<int> max_dets;
  auto* ev = app.add_subcommand("eval", "COCO mask AP of predictions against ground truth");
  ev->add_option("--gt", eval_gt, "Ground-truth annotation file")->required();
  ev->add_option("--pred", eval_pred, "Predictions (results array or annotation file)")
      ->required();
  ev->add_option("--mode", eval_mode, "agnostic | sensitive");
  ev->add_option("--max-dets", max_dets, "Detections kept per image");
  ev->add_option("--json", eval_json, "Also write the JSON report here");

  // distances
  std::string dist_ann, dist_seq, dist_regions, dist_out;
  auto* dist = app.add_subcommand("distances", "Distances from instances to control regions");
  dist->add_option("-a,--annotations", dist_ann, "Annotation file")->required();
  dist->add_option("--sequence", dist_seq, "Sequence directory")->required();
  dist->add_option("--regions", dist_regions, "regions.json")->required();
  dist->add_option("-o,--out", dist_out, "CSV to write (default stdout)");

  // backproject
  std::vector<double> pixel;
  double depth_m = 0.0;
  std::string bp_intrinsics, bp_seq;
  std::optional<double> fx, fy, cx, cy;
  auto* bp = app.add_subcommand("backproject", "Pixel and depth to a 3D point");
  bp->add_option("--pixel", pixel, "x y")->expected(2)->required();
  bp->add_option("--depth", depth_m, "Depth in metres")->required();
  bp->add_option("--intrinsics", bp_intrinsics, "intrinsics.json");
  bp->add_option("--sequence", bp_seq, "Take intrinsics from a sequence");
  bp->add_option("--fx", fx);
  bp->add_option("--fy", fy);
  bp->add_option("--cx", cx);
  bp->add_option("--cy", cy);

  // synth
  std::string synth_dir, synth_gt;
  hl_synth_options synth_opts;
  hl_synth_options_default(&synth_opts);
  auto* syn = app.add_subcommand("synth", "Render a synthetic sequence with ground truth");
  syn->add_option("dir", synth_dir, "Sequence directory to create")->required();
  syn->add_option("--gt", synth_gt, "Ground-truth file (default <dir>/ground_truth.json)");
  syn->add_option("--seed", synth_opts.seed, "Random seed");
  syn->add_option("--frames", synth_opts.num_frames, "Number of frames");
  syn->add_option("--object-label", synth_opts.object_label, "Held object class 1..4");
  syn->add_option("--gaps", synth_opts.num_gaps, "Occlusion gaps of 1-3 frames");
  syn->add_option("--jumps", synth_opts.num_jumps, "Single-frame 25 cm depth glitches");
  syn->add_option("--holes", synth_opts.hole_fraction, "Share of depth pixels zeroed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error: " << hl_status_name(HL_ERR_INVALID_ARGUMENT) << ": "
              << msg << "\n";
    return HL_ERR_INVALID_ARGUMENT;
  }

  try {
    Config config;
    load_config(g, config);

    if (*ingest) {
      Sequence seq;
      check(hl_sequence_open(check_dir.c_str(), seq.out()));
      int n = 0, w = 0, h = 0;
      check(hl_sequence_num_frames(seq.get(), &n));
      check(hl_sequence_size(seq.get(), &w, &h));
      int with_holes = 0;
      for (int i = 1; i <= n; ++i) {
        std::size_t holes = 0;
        check(hl_sequence_frame_holes(seq.get(), i, &holes));
        if (holes > 0) ++with_holes;
        log(g, "frame " + std::to_string(i) + ": " + std::to_string(holes) +
                   " holes");
      }
      std::cout << "ok: " << n << " frames, " << w << "x" << h << ", "
                << with_holes << " with depth holes\n";
    } else if (*inpaint) {
      set_if(config, "inpaint.num_scales", num_scales);
      set_if(config, "inpaint.spatial_sigma", spatial_sigma);
      set_if(config, "inpaint.range_sigma", range_sigma);
      set_if(config, "inpaint.kernel_radius", kernel_radius);
      Sequence seq;
      check(hl_sequence_open(inpaint_dir.c_str(), seq.out()));
      check(hl_inpaint_sequence(seq.get(), config.get(), inpaint_out.c_str(), g.jobs));
      log(g, "wrote " + inpaint_out);
    } else if (*label) {
      set_if(config, "chromakey.key_threshold", key_threshold);
      set_if(config, "chromakey.min_area", min_area);
      set_if(config, "chromakey.merge_distance", merge_distance);
      set_if(config, "chromakey.connectivity", connectivity);
      set_if(config, "chromakey.split_mode", split_mode);
      set_if(config, "roi.alpha", roi_alpha);
      Sequence seq;
      check(hl_sequence_open(label_dir.c_str(), seq.out()));
      Annotations ann;
      check(hl_label_sequence(seq.get(), config.get(), label_inpaint ? 1 : 0,
                              g.jobs, ann.out()));
      check(hl_annotations_save(ann.get(), label_out.c_str()));
      std::size_t count = 0;
      check(hl_annotations_count(ann.get(), &count));
      log(g, std::to_string(count) + " instances written to " + label_out);
    } else if (*overlay) {
      Sequence seq;
      check(hl_sequence_open(overlay_dir.c_str(), seq.out()));
      Annotations ann;
      check(hl_annotations_load(overlay_ann.c_str(), ann.out()));
      std::size_t n = 0;
      check(hl_seed_overlay(ann.get(), seq.get(), overlay_out.c_str(), &n));
      std::cout << "instances:";
      for (std::size_t i = 1; i <= n; ++i) std::cout << " " << i;
      std::cout << "\n";
    } else if (*prop) {
      set_if(config, "propagate.gate", gate);
      double g_value = 0.0;
      check(hl_config_get_number(config.get(), "propagate.gate", &g_value));
      Annotations in;
      check(hl_annotations_load(prop_ann.c_str(), in.out()));
      Sequence seq;
      if (!prop_seq.empty()) check(hl_sequence_open(prop_seq.c_str(), seq.out()));
      Annotations out;
      check(hl_propagate(in.get(), seq.get(), seed_instance, object_label,
                         g_value, out.out()));
      check(hl_annotations_save(out.get(), prop_out.c_str()));
    } else if (*exp) {
      Annotations ann;
      check(hl_annotations_load(export_ann.c_str(), ann.out()));
      if (export_format == "coco") {
        check(hl_annotations_save(ann.get(), export_out.c_str()));
      } else {
        check(hl_annotations_save_results(ann.get(), export_out.c_str()));
      }
    } else if (*ev) {
      set_if(config, "eval.mode", eval_mode);
      set_if(config, "eval.max_dets", max_dets);
      hl_ap_report report;
      check(hl_evaluate(eval_gt.c_str(), eval_pred.c_str(), config.get(), &report));
      String json, table;
      check(hl_ap_report_format(&report, config.get(), json.out(), table.out()));
      std::cout << table.get() << json.get();
      if (!eval_json.empty()) write_file(eval_json, json.get());
    } else if (*dist) {
      Annotations ann;
      check(hl_annotations_load(dist_ann.c_str(), ann.out()));
      Sequence seq;
      check(hl_sequence_open(dist_seq.c_str(), seq.out()));
      DistanceTable table;
      check(hl_distances(ann.get(), seq.get(), dist_regions.c_str(), table.out()));
      String csv;
      check(hl_distance_table_csv(table.get(), csv.out()));
      if (dist_out.empty()) {
        std::cout << csv.get();
      } else {
        write_file(dist_out, csv.get());
      }
    } else if (*bp) {
      hl_intrinsics k{};
      const bool explicit_k = fx || fy || cx || cy;
      const int sources = (!bp_intrinsics.empty()) + (!bp_seq.empty()) + explicit_k;
      if (sources != 1) {
        usage_error("backproject needs exactly one of --intrinsics, --sequence "
                    "or --fx/--fy/--cx/--cy");
      }
      if (!bp_intrinsics.empty()) {
        check(hl_intrinsics_load(bp_intrinsics.c_str(), &k));
      } else if (!bp_seq.empty()) {
        Sequence seq;
        check(hl_sequence_open(bp_seq.c_str(), seq.out()));
        check(hl_sequence_intrinsics(seq.get(), &k));
      } else {
        if (!(fx && fy && cx && cy)) usage_error("give all of --fx --fy --cx --cy");
        k = {*fx, *fy, *cx, *cy};
      }
      hl_point3d p;
      check(hl_backproject(&k, pixel[0], pixel[1], depth_m, &p));
      std::cout << format_number(p.x) << " " << format_number(p.y) << " "
                << format_number(p.z, true) << "\n";
    } else if (*syn) {
      if (synth_gt.empty()) synth_gt = synth_dir + "/ground_truth.json";
      check(hl_synth_write(synth_dir.c_str(), synth_gt.c_str(), &synth_opts));
      log(g, "wrote " + synth_dir + " and " + synth_gt);
    }
  } catch (const Failure& f) {
    std::string msg = f.message;
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error: " << hl_status_name(f.status) << ": " << msg << "\n";
    return static_cast<int>(f.status);
  }
  return 0;
}
