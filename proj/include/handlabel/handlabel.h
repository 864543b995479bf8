/* Copyright 2026 The handlabel Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the hand-instance labelling pipeline.
 *
 * Every call returns an hl_status. On failure, hl_last_error() holds a
 * one-line message for the calling thread until its next failing call.
 * Objects are opaque and owned by the caller; release them with the matching
 * *_destroy function (NULL is accepted). Strings returned through char**
 * are heap-allocated and released with hl_string_free.
 *
 * Units: depth images are millimetres, 3D points and distances are metres.
 */

#ifndef HANDLABEL_HANDLABEL_H_
#define HANDLABEL_HANDLABEL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(HL_BUILDING_LIBRARY)
#define HL_API __attribute__((visibility("default")))
#else
#define HL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_INVALID_ARGUMENT = 1,
  HL_ERR_IO = 2,
  HL_ERR_PARSE = 3,
  HL_ERR_REGISTRATION = 4,
  HL_ERR_DEPTH_HOLES = 5,
  HL_ERR_EMPTY = 6,
  HL_ERR_OUT_OF_RANGE = 7,
  HL_ERR_INTERNAL = 8
} hl_status;

/* Stable lower-case identifier, e.g. "invalid_argument". */
HL_API const char* hl_status_name(hl_status status);
HL_API const char* hl_last_error(void);
HL_API const char* hl_version(void);
HL_API void hl_string_free(char* s);

typedef struct hl_intrinsics {
  double fx, fy, cx, cy;
} hl_intrinsics;

typedef struct hl_point3d {
  double x, y, z;
} hl_point3d;

typedef struct hl_roi {
  double x, y, w, h;
} hl_roi;

/* Reads an intrinsics.json file ({"fx", "fy", "cx", "cy"}). */
HL_API hl_status hl_intrinsics_load(const char* path, hl_intrinsics* out);

/* Pinhole back-projection of pixel centre (x, y) at depth_m metres. */
HL_API hl_status hl_backproject(const hl_intrinsics* k, double x, double y,
                                double depth_m, hl_point3d* out);
/* Inverse of hl_backproject; out_xy receives {x, y}. */
HL_API hl_status hl_project(const hl_intrinsics* k, const hl_point3d* p,
                            double out_xy[2]);
/* Grows the box by alpha times its size on every side, without clipping. */
HL_API hl_status hl_expand_roi(const hl_roi* roi, double alpha, hl_roi* out);

/* ---- configuration ---- */

typedef struct hl_config hl_config;

HL_API hl_status hl_config_create(hl_config** out);
/* TOML or JSON, detected from the content. */
HL_API hl_status hl_config_load(const char* path, hl_config** out);
/* Dotted keys such as "chromakey.key_threshold" or "propagate.gate". */
HL_API hl_status hl_config_set_number(hl_config* config, const char* key,
                                      double value);
HL_API hl_status hl_config_set_string(hl_config* config, const char* key,
                                      const char* value);
HL_API hl_status hl_config_get_number(const hl_config* config,
                                      const char* key, double* out);
HL_API void hl_config_destroy(hl_config* config);

/* ---- sequences ---- */

typedef struct hl_sequence hl_sequence;

/* Validates manifest, intrinsics, frame numbering and registration. */
HL_API hl_status hl_sequence_open(const char* dir, hl_sequence** out);
HL_API hl_status hl_sequence_num_frames(const hl_sequence* seq, int* out);
HL_API hl_status hl_sequence_size(const hl_sequence* seq, int* width,
                                  int* height);
HL_API hl_status hl_sequence_intrinsics(const hl_sequence* seq,
                                        hl_intrinsics* out);
/* Loads frame `index` (1-based) and counts its depth holes. */
HL_API hl_status hl_sequence_frame_holes(const hl_sequence* seq, int index,
                                         size_t* out);
HL_API void hl_sequence_destroy(hl_sequence* seq);

/* Writes an in-painted copy of the sequence to out_dir. jobs = 0 uses every
 * core. */
HL_API hl_status hl_inpaint_sequence(const hl_sequence* seq,
                                     const hl_config* config,
                                     const char* out_dir, int jobs);

/* ---- annotations ---- */

typedef struct hl_annotations hl_annotations;

/* Instance masks for every frame, all with category 0. With inpaint != 0
 * depth holes are filled first; otherwise a frame with holes fails with
 * HL_ERR_DEPTH_HOLES. */
HL_API hl_status hl_label_sequence(const hl_sequence* seq,
                                   const hl_config* config, int inpaint,
                                   int jobs, hl_annotations** out);
HL_API hl_status hl_annotations_load(const char* path, hl_annotations** out);
HL_API hl_status hl_annotations_save(const hl_annotations* ann,
                                     const char* path);
/* COCO results array (image_id, category_id, score, segmentation). */
HL_API hl_status hl_annotations_save_results(const hl_annotations* ann,
                                             const char* path);
HL_API hl_status hl_annotations_count(const hl_annotations* ann, size_t* out);
HL_API hl_status hl_annotations_num_images(const hl_annotations* ann,
                                           size_t* out);
/* Annotation at `index` in file order. */
HL_API hl_status hl_annotations_get(const hl_annotations* ann, size_t index,
                                    int* image_id, int* category_id,
                                    size_t* area);
HL_API void hl_annotations_destroy(hl_annotations* ann);

/* Labels the hand holding `object_label` (1..4), seeded on instance
 * `seed_instance` (1-based) of the first frame. seq may be NULL when every
 * annotation carries a 3D centroid. */
HL_API hl_status hl_propagate(const hl_annotations* in,
                              const hl_sequence* seq, int seed_instance,
                              int object_label, double gate,
                              hl_annotations** out);

/* Frame 1 with instances tinted and numbered; writes an RGB PNG. */
HL_API hl_status hl_seed_overlay(const hl_annotations* ann,
                                 const hl_sequence* seq, const char* out_png,
                                 size_t* num_instances);

/* ---- evaluation ---- */

/* Percentages; has_* is 0 where no ground truth falls in the area range. */
typedef struct hl_ap_report {
  double ap, ap50, ap75, ap_small, ap_medium;
  int has_ap, has_ap50, has_ap75, has_ap_small, has_ap_medium;
} hl_ap_report;

/* Mode and detection cap come from config ("eval.mode", "eval.max_dets");
 * config may be NULL for defaults. */
HL_API hl_status hl_evaluate(const char* gt_path, const char* pred_path,
                             const hl_config* config, hl_ap_report* out);
/* JSON object and printable table for a report under config's mode. */
HL_API hl_status hl_ap_report_format(const hl_ap_report* report,
                                     const hl_config* config, char** json,
                                     char** table);

/* ---- distances to control regions ---- */

typedef struct hl_distance_table hl_distance_table;

HL_API hl_status hl_distances(const hl_annotations* ann,
                              const hl_sequence* seq,
                              const char* regions_path,
                              hl_distance_table** out);
HL_API hl_status hl_distance_table_size(const hl_distance_table* table,
                                        size_t* out);
/* region stays valid while the table lives. */
HL_API hl_status hl_distance_table_row(const hl_distance_table* table,
                                       size_t index, int* frame,
                                       int* instance, const char** region,
                                       double* distance_m);
HL_API hl_status hl_distance_table_csv(const hl_distance_table* table,
                                       char** out);
HL_API void hl_distance_table_destroy(hl_distance_table* table);

/* ---- synthetic data ---- */

typedef struct hl_synth_options {
  uint64_t seed;
  int num_frames;
  int object_label;
  int num_gaps;
  int num_jumps;
  double hole_fraction;
} hl_synth_options;

HL_API void hl_synth_options_default(hl_synth_options* out);
/* Writes a sequence directory and its ground-truth annotations. */
HL_API hl_status hl_synth_write(const char* dir, const char* gt_path,
                                const hl_synth_options* options);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* HANDLABEL_HANDLABEL_H_ */
