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

#include <cmath>

#include "core/chromakey.hpp"
#include "core/error.hpp"
#include "core/synth.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace handlabel;
using namespace handlabel::synth;
using fixtures::code_of;

namespace {

SceneSpec two_blob_scene() {
  SceneSpec s;
  s.seed = 9;
  s.blobs = {{Shape::kEllipse, 150, 200, 25, 20, 800},
             {Shape::kRect, 350, 120, 15, 30, 1100}};
  return s;
}

BlobTrack still_track(int n, geometry::Point3D p, int object) {
  BlobTrack t;
  t.positions.assign(n, p);
  t.visible.assign(n, true);
  t.held_object = object;
  return t;
}

}  // namespace

TEST_CASE("rendering is deterministic per seed and frame") {
  const auto k = default_intrinsics();
  const SceneSpec s = two_blob_scene();
  const SceneRender a = render_scene(s, k, 3);
  const SceneRender b = render_scene(s, k, 3);
  CHECK(a.pair.rgb == b.pair.rgb);
  CHECK(a.pair.depth == b.pair.depth);
  CHECK_FALSE(render_scene(s, k, 4).pair.depth == a.pair.depth);
  SceneSpec t = s;
  t.seed = 10;
  CHECK_FALSE(render_scene(t, k, 3).pair.rgb == a.pair.rgb);
}

TEST_CASE("the key mask equals the visible blob pixels") {
  const auto k = default_intrinsics();
  SceneSpec s = two_blob_scene();
  s.occluders = {{140, 150, 30, 100, {120, 110, 100}, 500}};
  const SceneRender r = render_scene(s, k);
  const BinaryMask key = chromakey::chroma_mask(r.pair.rgb, 40.0);
  std::size_t keyed = 0;
  for (auto v : key.pixels()) keyed += v != 0;
  CHECK(keyed == r.blob_pixels[0].size() + r.blob_pixels[1].size());
  for (const auto& blob : r.blob_pixels) {
    for (const Pixel& p : blob) CHECK(key.at(p.row, p.col) != 0);
  }
  // Hand colour stays within the jitter band.
  for (const Pixel& p : r.blob_pixels[1]) {
    const Rgb c = r.pair.rgb.at(p.row, p.col);
    CHECK(std::abs(c.g - 200) <= 10);
  }
}

TEST_CASE("z-buffer ownership") {
  const auto k = default_intrinsics();
  SceneSpec s;
  s.blobs = {{Shape::kRect, 100, 100, 20, 20, 1200}, {Shape::kRect, 115, 100, 20, 20, 700}};
  s.depth_noise_sigma = 0.0;
  const SceneRender r = render_scene(s, k);
  // Rect 0 spans cols 80..120, rect 1 cols 95..135; the nearer rect 1 wins
  // the shared columns.
  CHECK(r.blob_pixels[1].size() == 41u * 41u);
  CHECK(r.blob_pixels[0].size() == 41u * 15u);
  CHECK(r.clean_depth.at(100, 100) == 700);
  CHECK(r.clean_depth.at(100, 85) == 1200);
  CHECK(r.clean_depth.at(0, 0) == 2500);
  CHECK(r.pair.depth == r.clean_depth);
}

TEST_CASE("a fully occluded blob has no ground truth") {
  const auto k = default_intrinsics();
  SceneSpec s;
  s.blobs = {{Shape::kEllipse, 100, 100, 10, 10, 1000}, {Shape::kEllipse, 300, 300, 10, 10, 900}};
  s.occluders = {{80, 80, 40, 40, {100, 100, 100}, 600}};
  const SceneRender r = render_scene(s, k);
  CHECK(r.blob_pixels[0].empty());
  REQUIRE(r.ground_truth.instances.size() == 1);
  CHECK(r.ground_truth_blob == std::vector<int>{1});
}

TEST_CASE("ground-truth centroids use clean depth") {
  const auto k = default_intrinsics();
  SceneSpec s;
  s.blobs = {{Shape::kRect, 256, 212, 10, 10, 1000}};
  s.hole_fraction = 0.1;
  const SceneRender r = render_scene(s, k);
  const auto c = r.ground_truth.instances.at(0).centroid;
  const auto want = geometry::mask_centroid_3d(r.blob_pixels[0], r.clean_depth, k);
  CHECK(c == want);
  CHECK(c.z == doctest::Approx(1.0));
}

TEST_CASE("hole injection hits the target fraction") {
  const auto k = default_intrinsics();
  for (double f : {0.01, 0.05, 0.2}) {
    SceneSpec s = two_blob_scene();
    s.hole_fraction = f;
    const SceneRender r = render_scene(s, k);
    const auto target = static_cast<std::size_t>(std::ceil(f * 512 * 424));
    CHECK(count_holes(r.pair.depth) == target);
    CHECK(count_holes(r.clean_depth) == 0);
  }
}

TEST_CASE("scene validation") {
  const auto k = default_intrinsics();
  SceneSpec s;
  s.blobs = {{Shape::kEllipse, 5, 100, 10, 10, 800}};
  CHECK(code_of([&] { render_scene(s, k); }) == ErrorCode::kInvalidArgument);
  s.blobs = {};
  s.occluders = {{0, 0, 5, 5, kHandGreen, 500}};
  CHECK(code_of([&] { render_scene(s, k); }) == ErrorCode::kInvalidArgument);
  s.occluders = {};
  s.hole_fraction = 1.0;
  CHECK(code_of([&] { render_scene(s, k); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("sequence labels follow the gate") {
  const auto k = default_intrinsics();
  TrajectorySpec t;
  t.intrinsics = k;
  t.num_frames = 6;
  const geometry::Point3D start{-0.3, 0.0, 0.9};
  t.tracks = {still_track(6, start, 2), still_track(6, {0.3, 0.0, 0.9}, 0)};
  SUBCASE("static holder keeps its label") {
    const auto r = render_sequence(t);
    for (const auto& frame : r.labels) CHECK(frame == std::vector<int>{2, 0});
  }
  SUBCASE("gap with re-entry inside the gate") {
    t.tracks[0].visible[2] = t.tracks[0].visible[3] = false;
    for (int f = 4; f < 6; ++f) t.tracks[0].positions[f].x += 0.1;
    const auto r = render_sequence(t);
    CHECK(r.labels[2] == std::vector<int>{0});
    CHECK(r.labels[3] == std::vector<int>{0});
    CHECK(r.labels[4] == std::vector<int>{2, 0});
    CHECK(r.labels[5] == std::vector<int>{2, 0});
  }
  SUBCASE("a jump is unlabelled and the track recovers") {
    t.tracks[0].positions[3].z += 0.3;
    const auto r = render_sequence(t);
    CHECK(r.labels[2] == std::vector<int>{2, 0});
    CHECK(r.labels[3] == std::vector<int>{0, 0});
    CHECK(r.labels[4] == std::vector<int>{2, 0});
  }
  SUBCASE("hidden in frame 1") {
    t.tracks[0].visible[0] = false;
    CHECK(code_of([&] { render_sequence(t); }) == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("random scenes honour their constraints") {
  const auto k = default_intrinsics();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SceneSpec s = random_scene({seed}, k);
    CHECK(s.blobs.size() >= 1);
    CHECK(s.blobs.size() <= 4);
    const SceneRender r = render_scene(s, k);
    REQUIRE(r.ground_truth.instances.size() == s.blobs.size());
    for (std::size_t i = 0; i < s.blobs.size(); ++i) {
      CHECK(r.blob_pixels[i].size() >= 21);
      for (std::size_t j = i + 1; j < s.blobs.size(); ++j) {
        CHECK(geometry::distance_3d(r.ground_truth.instances[i].centroid,
                                    r.ground_truth.instances[j].centroid) > 0.14);
      }
    }
    CHECK(random_scene({seed}, k).blobs.size() == s.blobs.size());
  }
}

TEST_CASE("random trajectories") {
  const auto k = default_intrinsics();
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    RandomSequenceOptions o;
    o.seed = seed;
    o.num_frames = 20;
    o.object_label = 3;
    const TrajectorySpec t = random_trajectory(o, k);
    REQUIRE(t.tracks.size() == 2);
    const auto& holder = t.tracks[0];
    int hidden = 0;
    for (bool v : holder.visible) hidden += !v;
    CHECK(hidden >= 1);
    CHECK(hidden <= 3);
    CHECK(holder.visible.front());

    const SequenceRender r = render_sequence(t);
    CHECK(r.labels.front().front() == 3);
    int labelled = 0, unlabelled_visible = 0;
    for (std::size_t f = 0; f < r.labels.size(); ++f) {
      for (std::size_t j = 0; j < r.labels[f].size(); ++j) {
        const bool is_holder = r.frames[f].ground_truth_blob[j] == 0 && holder.visible[f];
        if (!is_holder) CHECK(r.labels[f][j] == 0);
        if (is_holder) (r.labels[f][j] == 3 ? labelled : unlabelled_visible)++;
      }
    }
    // One jump frame; everything else visible is labelled.
    CHECK(unlabelled_visible == 1);
    CHECK(labelled == 20 - hidden - 1);
  }
  RandomSequenceOptions bad;
  bad.object_label = 0;
  CHECK(code_of([&] { random_trajectory(bad, k); }) == ErrorCode::kInvalidArgument);
  RandomSequenceOptions crowded;
  crowded.num_frames = 4;  // two events need five frames
  CHECK(code_of([&] { random_trajectory(crowded, k); }) == ErrorCode::kInvalidArgument);
  crowded.num_frames = 5;
  CHECK_NOTHROW(random_trajectory(crowded, k));
}

TEST_CASE("steering-wheel fixture") {
  const auto k = default_intrinsics();
  const WheelFixture w = make_wheel(512, 424, k, 73.0, 80.0, 1000);
  CHECK(w.mask.at(212, 256 + 73) == 1);
  CHECK(w.mask.at(212, 256 + 72) == 0);
  CHECK(w.mask.at(212, 256 + 81) == 0);
  CHECK(w.depth.at(0, 0) == 1000);
}
