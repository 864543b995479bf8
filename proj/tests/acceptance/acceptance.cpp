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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Fixtures are seeded, so the output is reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "core/annotations.hpp"
#include "core/chromakey.hpp"
#include "core/eval.hpp"
#include "core/geometry.hpp"
#include "core/inpaint.hpp"
#include "core/pipeline.hpp"
#include "core/propagate.hpp"
#include "core/synth.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace {

using namespace handlabel;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // runtime limit; <= 0 for none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

// Greedy one-to-one matching of predicted to ground-truth masks by IoU.
// Returns, per prediction, the ground-truth index or -1, and the IoU.
std::vector<std::pair<int, double>> match(const std::vector<chromakey::InstanceMask>& pred,
                                          const std::vector<chromakey::InstanceMask>& gt) {
  std::vector<std::pair<int, double>> out(pred.size(), {-1, 0.0});
  std::vector<bool> used(gt.size(), false);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (used[j]) continue;
      const double iou = eval::mask_iou(pred[i].pixels, gt[j].pixels);
      if (iou >= 0.5 && iou > out[i].second) out[i] = {static_cast<int>(j), iou};
    }
    if (out[i].first >= 0) used[out[i].first] = true;
  }
  return out;
}

// ---- 1: back-projection round trip ----
Outcome round_trip() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> f(200.0, 1200.0), u(0.0, 1.0), d(0.2, 8.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const geometry::CameraIntrinsics k{f(rng), f(rng), 512 * u(rng), 424 * u(rng)};
    const double x = 512 * u(rng), y = 424 * u(rng), z = d(rng);
    const geometry::Point3D p = geometry::backproject(x, y, z, k);
    const geometry::ImagePoint q = geometry::project(p, k);
    worst = std::max({worst, std::abs(q.x - x) / std::max(std::abs(x), 1.0),
                      std::abs(q.y - y) / std::max(std::abs(y), 1.0),
                      std::abs(q.depth_m - z) / z});
  }
  return {worst <= 1e-9, "10000 triples, worst relative error " + fmt("%.2e", worst)};
}

// ---- 2: RoI+ expansion ----
Outcome roi_expansion() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0.0, 400.0), size(1.0, 200.0);
  int bad = 0;
  for (int a = 0; a <= 6; ++a) {
    const double alpha = a / 10.0;
    for (int i = 0; i < 1000; ++i) {
      const geometry::RoiBox r{pos(rng), pos(rng), size(rng), size(rng)};
      const geometry::RoiBox e = geometry::expand_roi(r, alpha);
      const double ratio = (e.w * e.h) / (r.w * r.h);
      const double want = (1 + 2 * alpha) * (1 + 2 * alpha);
      if (!rel_close(e.x + e.w / 2, r.x + r.w / 2, 1e-12) ||
          !rel_close(e.y + e.h / 2, r.y + r.h / 2, 1e-12) || !rel_close(ratio, want, 1e-12)) {
        ++bad;
      }
    }
  }
  const geometry::RoiBox worked = geometry::expand_roi({100, 100, 50, 40}, 0.5);
  const bool example = worked == geometry::RoiBox{75, 80, 100, 80};
  const bool identity = geometry::expand_roi({3, 4, 5, 6}, 0.0) == geometry::RoiBox{3, 4, 5, 6};
  return {bad == 0 && example && identity,
          "7 alphas x 1000 boxes, " + std::to_string(bad) + " violations; alpha=0.5 example " +
              (example ? "ok" : "wrong")};
}

// ---- 3: Otsu against the exhaustive scan ----
Outcome otsu_oracle() {
  std::mt19937_64 rng(3);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int levels = std::uniform_int_distribution<int>(2, 256)(rng);
    const double lo = std::uniform_int_distribution<int>(300, 3000)(rng);
    const double step = std::uniform_int_distribution<int>(1, 4)(rng);
    const int max_count = std::uniform_int_distribution<int>(1, 40)(rng);
    std::uniform_int_distribution<int> count(0, max_count);
    std::vector<double> s;
    for (int j = 0; j < levels; ++j) {
      const int c = (j == 0 || j == levels - 1) ? 1 + count(rng) : count(rng);
      for (int i = 0; i < c; ++i) s.push_back(lo + j * step);
    }
    if (chromakey::otsu_threshold(s) != oracle::otsu_exhaustive(s)) ++mismatches;
  }
  return {mismatches == 0, "1000 histograms, " + std::to_string(mismatches) + " mismatches"};
}

// ---- 4: instance extraction ----
Outcome extraction() {
  const auto k = synth::default_intrinsics();
  const chromakey::ChromaParams params;
  int count_errors = 0, low_iou = 0, instances = 0;
  double min_iou = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const synth::SceneSpec spec = synth::random_scene({seed}, k);
    const auto render = synth::render_scene(spec, k);
    const auto out = chromakey::extract_instances(render.pair, k, params);
    const auto& gt = render.ground_truth.instances;
    instances += static_cast<int>(gt.size());
    if (out.instances.size() != gt.size()) {
      ++count_errors;
      continue;
    }
    for (const auto& [j, iou] : match(out.instances, gt)) {
      min_iou = std::min(min_iou, j < 0 ? 0.0 : iou);
      if (j < 0 || iou < 0.99) ++low_iou;
    }
  }

  // Blobs bisected by a thin near occluder: the two visible fragments sit
  // within the merge distance and must come back as one instance.
  std::mt19937_64 rng(4);
  int split_fixtures = 0, split_failures = 0;
  while (split_fixtures < 20) {
    synth::SceneSpec s;
    s.seed = rng();
    const double rx = std::uniform_real_distribution<double>(12.0, 24.0)(rng);
    const double ry = std::uniform_real_distribution<double>(16.0, 32.0)(rng);
    const double cx = std::uniform_real_distribution<double>(100.0, 400.0)(rng);
    const double cy = std::uniform_real_distribution<double>(100.0, 320.0)(rng);
    const auto depth = static_cast<std::uint16_t>(std::uniform_int_distribution<int>(700, 1300)(rng));
    const int bar = std::uniform_int_distribution<int>(3, 8)(rng);
    s.blobs.push_back({synth::Shape::kEllipse, cx, cy, rx, ry, depth});
    s.occluders.push_back({static_cast<int>(cx) - bar / 2, static_cast<int>(cy - ry) - 5, bar,
                           static_cast<int>(2 * ry) + 10, Rgb{110, 110, 140}, 450});
    const auto render = synth::render_scene(s, k);
    const auto parts = oracle::components(fixtures::to_cells(render.blob_pixels[0]), 8);
    if (parts.size() != 2 || parts[0].size() <= 20 || parts[1].size() <= 20) continue;
    const double gap =
        geometry::distance_3d(fixtures::to_pixels(parts[0]), render.clean_depth,
                              fixtures::to_pixels(parts[1]), render.clean_depth, k);
    if (gap > params.merge_distance) continue;
    ++split_fixtures;
    const auto out = chromakey::extract_instances(render.pair, k, params);
    if (out.instances.size() != 1 || out.instances[0].pixels != render.blob_pixels[0]) {
      ++split_failures;
    }
  }

  // 15-pixel specks (5 x 3 rectangles) scattered away from a hand.
  int speck_emitted = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synth::SceneSpec s;
    s.seed = seed;
    s.blobs.push_back({synth::Shape::kEllipse, 256, 212, 25, 25, 900});
    for (int i = 0; i < 6; ++i) {
      s.blobs.push_back({synth::Shape::kRect, 40.0 + 80 * i, 40.0 + 7 * seed, 2, 1,
                         static_cast<std::uint16_t>(700 + 100 * i)});
    }
    const auto render = synth::render_scene(s, k);
    const auto out = chromakey::extract_instances(render.pair, k, params);
    for (const auto& inst : out.instances) {
      if (inst.area() <= 20) ++speck_emitted;
    }
    if (out.instances.size() != 1) ++speck_emitted;
  }

  const bool pass = count_errors == 0 && low_iou == 0 && split_failures == 0 && speck_emitted == 0;
  return {pass, "100 scenes / " + std::to_string(instances) + " hands: " +
                    std::to_string(count_errors) + " count errors, min IoU " +
                    fmt("%.4f", min_iou) + "; " + std::to_string(split_fixtures) +
                    " occluder splits, " + std::to_string(split_failures) + " not re-merged; " +
                    std::to_string(speck_emitted) + " specks emitted"};
}

// ---- 5: label propagation ----
Outcome propagation() {
  const auto k = synth::default_intrinsics();
  int frames = 0, wrong_frames = 0, jump_mismatch = 0, jumps = 0, gaps = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    synth::RandomSequenceOptions o;
    o.seed = seed;
    o.num_frames = 30;
    o.object_label = 1 + static_cast<int>(seed % 4);
    o.num_gaps = 1 + static_cast<int>(seed % 2);
    o.num_jumps = 1;
    const auto traj = synth::random_trajectory(o, k);
    const auto render = synth::render_sequence(traj);

    std::vector<chromakey::FrameInstances> extracted;
    std::vector<std::vector<std::pair<int, double>>> matches;
    for (const auto& fr : render.frames) {
      extracted.push_back(chromakey::extract_instances(fr.pair, k, {}));
      matches.push_back(match(extracted.back().instances, fr.ground_truth.instances));
    }
    // The annotator seeds on the pipeline instance covering the holder.
    int seed_instance = 0;
    for (std::size_t i = 0; i < matches[0].size(); ++i) {
      const int j = matches[0][i].first;
      if (j >= 0 && render.labels[0][j] != 0) seed_instance = static_cast<int>(i) + 1;
    }
    if (seed_instance == 0) {
      wrong_frames += 30;
      frames += 30;
      continue;
    }
    const auto labels = propagate::propagate_labels(
        std::span<const chromakey::FrameInstances>(extracted), {o.object_label, seed_instance});

    int seq_jumps = 0;
    for (std::size_t f = 0; f < render.frames.size(); ++f) {
      ++frames;
      const auto& gt = render.labels[f];
      bool ok = extracted[f].instances.size() == gt.size();
      for (std::size_t i = 0; ok && i < labels[f].size(); ++i) {
        const int j = matches[f][i].first;
        ok = j >= 0 && labels[f][i] == gt[j];
      }
      if (!ok) ++wrong_frames;
      // Injected jump: holder visible but displaced beyond the gate.
      const bool holder_visible = traj.tracks[0].visible[f];
      const bool all_zero = std::all_of(labels[f].begin(), labels[f].end(),
                                        [](int v) { return v == 0; });
      const bool jump = holder_visible && f > 0 &&
                        traj.tracks[0].positions[f].z - traj.tracks[0].positions[f - 1].z > 0.15;
      if (!holder_visible) gaps += f == 0 || traj.tracks[0].visible[f - 1];
      seq_jumps += jump;
      if (holder_visible && all_zero != jump) ++jump_mismatch;
    }
    jumps += seq_jumps;
    if (seq_jumps != o.num_jumps) ++jump_mismatch;
  }
  return {wrong_frames == 0 && jump_mismatch == 0,
          "50 sequences x 30 frames, " + std::to_string(gaps) + " gaps, " +
              std::to_string(jumps) + " jumps: " + std::to_string(wrong_frames) + "/" +
              std::to_string(frames) + " frames wrong, " + std::to_string(jump_mismatch) +
              " jump mismatches"};
}

// ---- 6: COCO evaluation ----
Outcome evaluation() {
  std::mt19937_64 rng(6);
  int mismatches = 0, perfect_bad = 0, empty_bad = 0, order_bad = 0;
  double worst = 0.0;
  auto diff = [&](const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return 1e9;
    return a ? std::abs(*a - *b) : 0.0;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto ds = fixtures::random_micro_dataset(rng);
    for (bool sensitive : {false, true}) {
      const eval::EvalParams p{sensitive ? eval::EvalMode::kClassSensitive
                                         : eval::EvalMode::kClassAgnostic, 50};
      const eval::ApReport got = eval::coco_ap(ds.preds, ds.gts, p);
      const oracle::Report want = fixtures::reference_ap(ds, sensitive, 50);
      const double d = std::max({diff(got.ap, want.ap), diff(got.ap50, want.ap50),
                                 diff(got.ap75, want.ap75), diff(got.ap_small, want.ap_small),
                                 diff(got.ap_medium, want.ap_medium)});
      worst = std::max(worst, d);
      if (d > 1e-6) ++mismatches;

      std::vector<eval::PredInstance> perfect;
      for (const auto& g : ds.gts) perfect.push_back({g.image_id, g.mask, g.category, 1.0});
      const auto pr = eval::coco_ap(perfect, ds.gts, p);
      for (const auto& v : {pr.ap, pr.ap50, pr.ap75, pr.ap_small, pr.ap_medium}) {
        if (v && *v != 100.0) ++perfect_bad;
      }
      const auto er = eval::coco_ap({}, ds.gts, p);
      for (const auto& v : {er.ap, er.ap50, er.ap75, er.ap_small, er.ap_medium}) {
        if (v && *v != 0.0) ++empty_bad;
      }
    }
    // Exact masks with some categories flipped.
    std::vector<eval::PredInstance> perturbed;
    std::uniform_int_distribution<int> cat(0, 4), score(1, 10);
    std::bernoulli_distribution flip(0.4);
    for (const auto& g : ds.gts) {
      perturbed.push_back({g.image_id, g.mask, flip(rng) ? cat(rng) : g.category, score(rng) / 10.0});
    }
    const auto agn = eval::coco_ap(perturbed, ds.gts, {eval::EvalMode::kClassAgnostic, 50});
    const auto sen = eval::coco_ap(perturbed, ds.gts, {eval::EvalMode::kClassSensitive, 50});
    if (!(agn.ap.value_or(0) >= sen.ap.value_or(0))) ++order_bad;
  }
  return {mismatches == 0 && perfect_bad == 0 && empty_bad == 0 && order_bad == 0,
          "200 datasets x 2 modes: max |AP - reference| " + fmt("%.1e", worst) + ", " +
              std::to_string(perfect_bad + empty_bad) + " perfect/empty errors, " +
              std::to_string(order_bad) + " agnostic < sensitive"};
}

// ---- 7: depth in-painting ----
Outcome inpainting() {
  const auto k = synth::default_intrinsics();
  int bad = 0, frames = 0;
  const inpaint::InpaintParams params;
  for (double fraction : {0.01, 0.05, 0.1, 0.2}) {
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      synth::SceneSpec s = synth::random_scene({seed + 70}, k);
      s.hole_fraction = fraction;
      const auto render = synth::render_scene(s, k);
      const DepthFrame& in = render.pair.depth;
      const DepthFrame out = inpaint::inpaint(in, render.pair.rgb, params);
      ++frames;
      std::uint16_t lo = 65535, hi = 0;
      for (auto d : in.pixels()) {
        if (d != kDepthHole) {
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
      }
      bool ok = count_holes(out) == 0;
      for (std::size_t i = 0; ok && i < in.size(); ++i) {
        const auto a = in.pixels()[i], b = out.pixels()[i];
        ok = a == kDepthHole ? (b >= lo && b <= hi) : a == b;
      }
      if (!ok) ++bad;
    }
  }
  synth::SceneSpec clean = synth::random_scene({80}, k);
  const auto render = synth::render_scene(clean, k);
  const bool fixed = inpaint::inpaint(render.pair.depth, render.pair.rgb, params) == render.pair.depth;
  return {bad == 0 && fixed, std::to_string(frames) + " frames with 1-20% holes, " +
                                 std::to_string(bad) + " violations; hole-free fixed point " +
                                 (fixed ? "ok" : "broken")};
}

// ---- 8: throughput ----
Outcome throughput() {
  const auto k = synth::default_intrinsics();
  std::vector<ingest::RegisteredFramePair> frames;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    synth::RandomSequenceOptions o;
    o.seed = 100 + seed;
    o.num_frames = 20;
    for (auto& f : synth::render_sequence(synth::random_trajectory(o, k)).frames) {
      frames.push_back(std::move(f.pair));
    }
  }
  std::size_t sink = 0;
  chromakey::extract_instances(frames[0], k, {});  // warm-up
  const auto t0 = Clock::now();
  for (const auto& f : frames) sink += chromakey::extract_instances(f, k, {}).instances.size();
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  const double fps = frames.size() / s;
  const bool target = fps >= 15.0;
  return {fps >= 10.0 && sink > 0,
          std::to_string(frames.size()) + " frames 512x424, one thread: " + fmt("%.1f", fps) +
              " frames/s (target 15 " + (target ? "met" : "missed") + ", floor 10)"};
}

// ---- 9: file round trip ----
Outcome round_trip_files() {
  const auto root = fixtures::scratch_dir("acceptance_roundtrip");
  double worst = 100.0;
  int runs = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto dir = root / ("seq" + std::to_string(seed));
    pipeline::SynthOptions o;
    o.sequence.seed = 900 + seed;
    o.sequence.num_frames = 30;
    o.sequence.object_label = 1 + static_cast<int>(seed % 4);
    const auto gt = pipeline::write_synth_sequence(dir, o);
    annotations::save(root / ("gt" + std::to_string(seed) + ".json"), gt);

    const auto seq = ingest::Sequence::open(dir);
    const auto labels = pipeline::label_sequence(seq, {}, false, 0);
    // Seed on the instance covering the holder in frame 1.
    int seed_instance = 0, pos = 0;
    for (const auto& a : labels.annotations) {
      if (a.image_id != 1) continue;
      ++pos;
      for (const auto& g : gt.annotations) {
        if (g.image_id == 1 && g.category_id != 0 && eval::mask_iou(a.mask, g.mask) >= 0.5) {
          seed_instance = pos;
        }
      }
    }
    if (seed_instance == 0) return {false, "holder not found in frame 1 of sequence " +
                                               std::to_string(seed)};
    const auto labelled = pipeline::propagate_annotations(
        labels, {o.sequence.object_label, seed_instance}, propagate::kDefaultGate);
    const auto pred_path = root / ("pred" + std::to_string(seed) + ".json");
    {
      std::ofstream out(pred_path);
      out << annotations::to_results_json_text(labelled);
    }
    const auto report = pipeline::evaluate_files(root / ("gt" + std::to_string(seed) + ".json"),
                                                 pred_path, {eval::EvalMode::kClassSensitive, 50});
    worst = std::min(worst, report.ap50.value_or(0.0));
    ++runs;
  }
  return {worst >= 99.0, std::to_string(runs) + " sequences x 30 frames, min class-sensitive AP50 " +
                             fmt("%.2f", worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "back-projection round trip", 1.0, round_trip},
      {2, "RoI+ expansion properties", 1.0, roi_expansion},
      {3, "Otsu vs exhaustive scan", 5.0, otsu_oracle},
      {4, "instance extraction", 30.0, extraction},
      {5, "label propagation", 30.0, propagation},
      {6, "COCO AP vs reference", 60.0, evaluation},
      {7, "depth in-painting", 10.0, inpainting},
      {8, "labelling throughput", 0.0, throughput},
      {9, "synth-to-eval round trip", 60.0, round_trip_files},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = o.pass;
    if (c.budget_s > 0 && s >= c.budget_s) {
      pass = false;
      o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    }
    failed += !pass;
    std::printf("criterion %d %s: %s (%s; %.2f s)\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
