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

#include "core/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "core/error.hpp"
#include "core/image_io.hpp"

namespace handlabel::synth {
namespace {

using geometry::CameraIntrinsics;
using geometry::Point3D;

constexpr int kBandHeight = 32;
constexpr Rgb kRed{200, 40, 40};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

bool inside_blob(const BlobSpec& b, int row, int col) {
  const double dx = (col - b.center_x) / b.radius_x;
  const double dy = (row - b.center_y) / b.radius_y;
  if (b.shape == Shape::kRect) return std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
  return dx * dx + dy * dy <= 1.0;
}

// Per-pixel noise is the generator's hot loop. The mappings below use raw
// engine output directly, which is cheaper than the std distributions and,
// unlike them, gives the same frames under every standard library.

// Three channel offsets in [-noise, noise] from one 64-bit draw, 21 bits per
// channel scaled by multiply-shift.
Rgb jitter(const Rgb& c, int noise, std::mt19937_64& rng) {
  if (noise == 0) return c;
  const std::uint64_t bits = rng();
  const auto span = static_cast<std::uint64_t>(2 * noise + 1);
  auto channel = [&](std::uint8_t base, int shift) {
    const int off = static_cast<int>((((bits >> shift) & 0x1fffff) * span) >> 21) - noise;
    return static_cast<std::uint8_t>(std::clamp(base + off, 0, 255));
  };
  return {channel(c.r, 0), channel(c.g, 21), channel(c.b, 42)};
}

// Depths are whole millimetres, so adding N(0, sigma) and rounding equals
// adding round(N(0, sigma)). That discrete offset is drawn through a 16-bit
// inverse-CDF table, four samples per engine draw; mass beyond the table's
// 2^-16 resolution (about 4.3 sigma) is cut off.
class DepthNoise {
 public:
  explicit DepthNoise(double sigma) : table_(1u << 16) {
    auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); };
    int k = -static_cast<int>(std::ceil(10.0 * sigma)) - 1;
    for (std::size_t i = 0; i < table_.size(); ++i) {
      const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(table_.size());
      while (cdf(k + 0.5) < p) ++k;
      table_[i] = k;
    }
  }

  int operator()(std::mt19937_64& rng) {
    if (left_ == 0) {
      bits_ = rng();
      left_ = 4;
    }
    --left_;
    const int v = table_[bits_ & 0xffff];
    bits_ >>= 16;
    return v;
  }

 private:
  std::vector<int> table_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

// Gray shade per band, alternating with red.
Rgb band_color(int row, std::uint64_t seed) {
  const int band = row / kBandHeight;
  if (band % 2 == 1) return kRed;
  const auto level = static_cast<std::uint8_t>(
      90 + (seed * 2654435761u + static_cast<std::uint64_t>(band) * 40503u) % 60);
  return {level, level, level};
}

void inject_holes(DepthFrame& depth, double fraction, std::mt19937_64& rng) {
  if (fraction <= 0.0) return;
  const auto target =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(depth.size())));
  // Half scattered dropouts, half square patches like sensor shadows.
  std::bernoulli_distribution drop(fraction / 2.0);
  std::size_t holes = 0;
  for (auto& d : depth.pixels()) {
    if (drop(rng)) {
      d = kDepthHole;
      ++holes;
    }
  }
  std::uniform_int_distribution<int> side(3, 12);
  std::uniform_int_distribution<int> rows(0, depth.height() - 1);
  std::uniform_int_distribution<int> cols(0, depth.width() - 1);
  while (holes < target) {
    const int s = side(rng);
    const int r0 = rows(rng);
    const int c0 = cols(rng);
    for (int r = r0; r < std::min(depth.height(), r0 + s); ++r) {
      for (int c = c0; c < std::min(depth.width(), c0 + s); ++c) {
        if (depth.at(r, c) == kDepthHole) continue;
        depth.at(r, c) = kDepthHole;
        if (++holes >= target) return;
      }
    }
  }
}

BlobSpec blob_at(const BlobTrack& t, const Point3D& p, const CameraIntrinsics& k) {
  const geometry::ImagePoint ip = geometry::project(p, k);
  BlobSpec b;
  b.shape = t.shape;
  b.center_x = ip.x;
  b.center_y = ip.y;
  b.radius_x = t.radius_x;
  b.radius_y = t.radius_y;
  b.depth_mm = static_cast<std::uint16_t>(
      std::lround(p.z * geometry::kMillimetresPerMetre));
  return b;
}

// Centre of a blob as the pipeline sees it: back-projection of the pixel
// centre at the blob depth.
Point3D blob_center_3d(const BlobSpec& b, const CameraIntrinsics& k) {
  return geometry::backproject(b.center_x, b.center_y,
                               b.depth_mm / geometry::kMillimetresPerMetre, k);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Point3D random_step(std::mt19937_64& rng, double max_len) {
  // Direction uniform on the sphere, length in [0.3, 1] * max_len.
  std::normal_distribution<double> n(0.0, 1.0);
  double x = 0, y = 0, z = 0, len = 0;
  while (len < 1e-9) {
    x = n(rng);
    y = n(rng);
    z = n(rng);
    len = std::sqrt(x * x + y * y + z * z);
  }
  const double s = uniform(rng, 0.3, 1.0) * max_len / len;
  return {x * s, y * s, z * s};
}

Point3D add(const Point3D& a, const Point3D& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

// Whether a track centred at p stays inside [u_lo, u_hi] x [v_lo, v_hi] in
// pixels and within the depth band.
bool in_box(const Point3D& p, const CameraIntrinsics& k, double u_lo,
            double u_hi, double v_lo, double v_hi) {
  if (p.z < 0.6 || p.z > 1.3) return false;
  const geometry::ImagePoint ip = geometry::project(p, k);
  return ip.x >= u_lo && ip.x <= u_hi && ip.y >= v_lo && ip.y <= v_hi;
}

}  // namespace

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::kInvalidArgument, "scene size must be positive");
  }
  if (!(hole_fraction >= 0.0 && hole_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "hole_fraction must lie in [0, 1)");
  }
  if (color_noise < 0 || color_noise > 50) {
    fail(ErrorCode::kInvalidArgument, "color_noise must lie in [0, 50]");
  }
  if (!(depth_noise_sigma >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "depth_noise_sigma must be >= 0");
  }
  if (background_depth == kDepthHole) {
    fail(ErrorCode::kInvalidArgument, "background depth must be nonzero");
  }
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const BlobSpec& b = blobs[i];
    const std::string name = "blob " + std::to_string(i);
    if (!(b.radius_x > 0.0 && b.radius_y > 0.0)) {
      fail(ErrorCode::kInvalidArgument, name + " needs positive radii");
    }
    if (b.center_x - b.radius_x < -0.5 || b.center_x + b.radius_x > width - 0.5 ||
        b.center_y - b.radius_y < -0.5 || b.center_y + b.radius_y > height - 0.5) {
      fail(ErrorCode::kInvalidArgument, name + " extends outside the image");
    }
    if (b.depth_mm == kDepthHole) {
      fail(ErrorCode::kInvalidArgument, name + " needs a nonzero depth");
    }
  }
  for (std::size_t i = 0; i < occluders.size(); ++i) {
    const OccluderSpec& o = occluders[i];
    const std::string name = "occluder " + std::to_string(i);
    if (o.w <= 0 || o.h <= 0 || o.x < 0 || o.y < 0 || o.x + o.w > width ||
        o.y + o.h > height) {
      fail(ErrorCode::kInvalidArgument, name + " lies outside the image");
    }
    if (o.depth_mm == kDepthHole) {
      fail(ErrorCode::kInvalidArgument, name + " needs a nonzero depth");
    }
    // Occluders must never pass the key, even with noise.
    const double key = o.color.g - chromakey::relative_luminance(
                                       o.color.r, o.color.g, o.color.b);
    if (key > 20.0) {
      fail(ErrorCode::kInvalidArgument, name + " is too green");
    }
  }
}

SceneRender render_scene(const SceneSpec& spec, const CameraIntrinsics& k,
                         int frame_index) {
  spec.validate();
  k.validate(spec.width, spec.height);
  const int w = spec.width;
  const int h = spec.height;

  // z-buffer: -1 background, [0, nb) blob, nb + j occluder j.
  const int nb = static_cast<int>(spec.blobs.size());
  Image<int> owner(w, h, -1);
  DepthFrame clean(w, h, spec.background_depth);
  auto paint = [&](int id, int r0, int r1, int c0, int c1, std::uint16_t depth,
                   auto&& covers) {
    r0 = std::max(r0, 0);
    c0 = std::max(c0, 0);
    r1 = std::min(r1, h - 1);
    c1 = std::min(c1, w - 1);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        if (!covers(r, c)) continue;
        if (owner.at(r, c) == -1 || depth < clean.at(r, c)) {
          owner.at(r, c) = id;
          clean.at(r, c) = depth;
        }
      }
    }
  };
  for (int i = 0; i < nb; ++i) {
    const BlobSpec& b = spec.blobs[i];
    paint(i, static_cast<int>(std::floor(b.center_y - b.radius_y)),
          static_cast<int>(std::ceil(b.center_y + b.radius_y)),
          static_cast<int>(std::floor(b.center_x - b.radius_x)),
          static_cast<int>(std::ceil(b.center_x + b.radius_x)), b.depth_mm,
          [&](int r, int c) { return inside_blob(b, r, c); });
  }
  for (std::size_t j = 0; j < spec.occluders.size(); ++j) {
    const OccluderSpec& o = spec.occluders[j];
    paint(nb + static_cast<int>(j), o.y, o.y + o.h - 1, o.x, o.x + o.w - 1,
          o.depth_mm, [](int, int) { return true; });
  }

  SceneRender out;
  out.pair.index = frame_index;
  out.pair.rgb = RgbFrame(w, h);
  out.blob_pixels.assign(spec.blobs.size(), {});
  std::mt19937_64 rng = make_rng(spec.seed, static_cast<std::uint64_t>(frame_index));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int id = owner.at(r, c);
      Rgb base;
      if (id < 0) {
        base = band_color(r, spec.seed);
      } else if (id < nb) {
        base = kHandGreen;
        out.blob_pixels[id].push_back({r, c});
      } else {
        base = spec.occluders[id - nb].color;
      }
      out.pair.rgb.at(r, c) = jitter(base, spec.color_noise, rng);
    }
  }

  out.pair.depth = clean;
  if (spec.depth_noise_sigma > 0.0) {
    DepthNoise noise(spec.depth_noise_sigma);
    for (auto& d : out.pair.depth.pixels()) {
      d = static_cast<std::uint16_t>(std::clamp(d + noise(rng), 1, 65535));
    }
  }
  inject_holes(out.pair.depth, spec.hole_fraction, rng);

  out.ground_truth.frame_index = frame_index;
  for (int i = 0; i < nb; ++i) {
    const PixelSet& px = out.blob_pixels[i];
    if (px.empty()) continue;
    chromakey::InstanceMask m;
    m.pixels = px;
    m.centroid = geometry::mask_centroid_3d(px, clean, k);
    m.bbox = geometry::mask_to_bbox(px);
    out.ground_truth.instances.push_back(std::move(m));
    out.ground_truth_blob.push_back(i);
  }
  out.clean_depth = std::move(clean);
  return out;
}

void TrajectorySpec::validate() const {
  base.validate();
  intrinsics.validate(base.width, base.height);
  if (num_frames < 1) fail(ErrorCode::kInvalidArgument, "num_frames must be >= 1");
  if (!(gate > 0.0)) fail(ErrorCode::kInvalidArgument, "gate must be > 0");
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    const BlobTrack& tr = tracks[t];
    const std::string name = "track " + std::to_string(t);
    if (tr.positions.size() != static_cast<std::size_t>(num_frames) ||
        tr.visible.size() != static_cast<std::size_t>(num_frames)) {
      fail(ErrorCode::kInvalidArgument,
           name + " needs one position and visibility flag per frame");
    }
    if (!propagate::is_object_class(tr.held_object)) {
      fail(ErrorCode::kInvalidArgument, name + " holds an unknown object");
    }
    if (tr.held_object != propagate::kNoObject && !tr.visible[0]) {
      fail(ErrorCode::kInvalidArgument,
           name + " holds an object but is hidden in frame 1");
    }
    for (const Point3D& p : tr.positions) {
      if (!(p.z > 0.0)) fail(ErrorCode::kInvalidArgument, name + " has z <= 0");
    }
  }
}

SequenceRender render_sequence(const TrajectorySpec& spec) {
  spec.validate();
  const CameraIntrinsics& k = spec.intrinsics;
  SequenceRender out;

  // Last labelled analytic centre per held track.
  std::vector<std::optional<Point3D>> last(spec.tracks.size());
  for (int f = 0; f < spec.num_frames; ++f) {
    SceneSpec scene = spec.base;
    scene.blobs.clear();
    std::vector<int> blob_track;
    for (std::size_t t = 0; t < spec.tracks.size(); ++t) {
      const BlobTrack& tr = spec.tracks[t];
      if (!tr.visible[f]) continue;
      scene.blobs.push_back(blob_at(tr, tr.positions[f], k));
      blob_track.push_back(static_cast<int>(t));
    }
    SceneRender render = render_scene(scene, k, f + 1);

    std::vector<int> labels(render.ground_truth.instances.size(),
                            propagate::kNoObject);
    for (std::size_t j = 0; j < labels.size(); ++j) {
      const int blob = render.ground_truth_blob[j];
      const auto t = static_cast<std::size_t>(blob_track[blob]);
      const BlobTrack& tr = spec.tracks[t];
      if (tr.held_object == propagate::kNoObject) continue;
      const Point3D centre = blob_center_3d(scene.blobs[blob], k);
      if (f == 0 ||
          (last[t] && geometry::distance_3d(centre, *last[t]) <= spec.gate)) {
        labels[j] = tr.held_object;
        last[t] = centre;
      }
    }
    out.frames.push_back(std::move(render));
    out.labels.push_back(std::move(labels));
  }
  return out;
}

CameraIntrinsics default_intrinsics() { return {365.0, 365.0, 256.0, 212.0}; }

SceneSpec random_scene(const RandomSceneOptions& options,
                       const CameraIntrinsics& k) {
  if (options.min_blobs < 1 || options.max_blobs < options.min_blobs) {
    fail(ErrorCode::kInvalidArgument, "need 1 <= min_blobs <= max_blobs");
  }
  std::mt19937_64 rng = make_rng(options.seed, 0x5ce7e);
  SceneSpec spec;
  spec.seed = options.seed;
  const int w = spec.width;
  const int h = spec.height;

  for (int attempt = 0; attempt < 10000; ++attempt) {
    const int n = std::uniform_int_distribution<int>(options.min_blobs,
                                                     options.max_blobs)(rng);
    spec.blobs.clear();
    bool overlap_used = !options.allow_overlap;
    for (int tries = 0; static_cast<int>(spec.blobs.size()) < n && tries < 500;
         ++tries) {
      BlobSpec b;
      b.shape = uniform(rng, 0.0, 1.0) < 0.25 ? Shape::kRect : Shape::kEllipse;
      b.radius_x = uniform(rng, 8.0, 30.0);
      b.radius_y = uniform(rng, 8.0, 30.0);
      b.center_x = uniform(rng, b.radius_x + 1.0, w - 2.0 - b.radius_x);
      b.center_y = uniform(rng, b.radius_y + 1.0, h - 2.0 - b.radius_y);
      b.depth_mm = static_cast<std::uint16_t>(
          std::uniform_int_distribution<int>(600, 1500)(rng));
      bool ok = true;
      bool overlaps = false;
      for (const BlobSpec& o : spec.blobs) {
        // Gap of 3 px between bounding boxes keeps components apart.
        const bool apart =
            std::abs(b.center_x - o.center_x) > b.radius_x + o.radius_x + 3.0 ||
            std::abs(b.center_y - o.center_y) > b.radius_y + o.radius_y + 3.0;
        if (apart) continue;
        if (overlap_used || overlaps ||
            std::abs(static_cast<int>(b.depth_mm) - o.depth_mm) < 200) {
          ok = false;
          break;
        }
        overlaps = true;
      }
      if (!ok) continue;
      overlap_used = overlap_used || overlaps;
      spec.blobs.push_back(b);
    }
    if (static_cast<int>(spec.blobs.size()) < options.min_blobs) continue;

    SceneSpec clean = spec;
    clean.color_noise = 0;
    clean.depth_noise_sigma = 0.0;
    const SceneRender r = render_scene(clean, k);
    if (r.ground_truth.instances.size() != spec.blobs.size()) continue;
    bool ok = true;
    const auto& inst = r.ground_truth.instances;
    for (std::size_t i = 0; i < inst.size() && ok; ++i) {
      if (static_cast<int>(inst[i].area()) < options.min_area) ok = false;
      for (std::size_t j = i + 1; j < inst.size() && ok; ++j) {
        if (geometry::distance_3d(inst[i].centroid, inst[j].centroid) <=
            options.min_separation) {
          ok = false;
        }
      }
    }
    if (ok) return spec;
  }
  fail(ErrorCode::kInternal, "could not place a random scene");
}

TrajectorySpec random_trajectory(const RandomSequenceOptions& options,
                                 const CameraIntrinsics& k) {
  const int n = options.num_frames;
  if (n < 2) fail(ErrorCode::kInvalidArgument, "num_frames must be >= 2");
  if (options.object_label < 1 || options.object_label > 4) {
    fail(ErrorCode::kInvalidArgument, "object_label must lie in 1..4");
  }
  if (options.max_gap < 1 || options.num_gaps < 0 || options.num_jumps < 0) {
    fail(ErrorCode::kInvalidArgument, "bad gap or jump counts");
  }
  // Events sit in frames 2..N-1 with a plain frame between neighbours.
  const int events = options.num_gaps + options.num_jumps;
  if (events > 0 && n < 2 * events + 1) {
    fail(ErrorCode::kInvalidArgument,
         std::to_string(n) + " frames cannot hold " + std::to_string(events) +
             " gaps and jumps; need at least " + std::to_string(2 * events + 1));
  }
  std::mt19937_64 rng = make_rng(options.seed, 0x7a11);
  TrajectorySpec spec;
  spec.base.seed = options.seed;
  spec.base.hole_fraction = options.hole_fraction;
  spec.intrinsics = k;
  spec.num_frames = n;
  const double gate = spec.gate;
  const int w = spec.base.width;
  const int h = spec.base.height;

  for (int attempt = 0; attempt < 1000; ++attempt) {
    // Event schedule: 'g' gap, 'j' jump, '.' plain. Frame 0 stays plain and
    // events keep one plain frame between them.
    std::vector<char> event(n, '.');
    bool placed = true;
    auto free_span = [&](int a, int b) {
      for (int f = std::max(a - 1, 1); f <= std::min(b + 1, n - 1); ++f) {
        if (event[f] != '.') return false;
      }
      return a >= 1 && b <= n - 2;
    };
    for (int g = 0; g < options.num_gaps && placed; ++g) {
      placed = false;
      for (int t = 0; t < 200 && !placed; ++t) {
        const int len = std::uniform_int_distribution<int>(1, options.max_gap)(rng);
        const int a = std::uniform_int_distribution<int>(1, n - 1)(rng);
        if (!free_span(a, a + len - 1)) continue;
        for (int f = a; f < a + len; ++f) event[f] = 'g';
        placed = true;
      }
    }
    for (int j = 0; j < options.num_jumps && placed; ++j) {
      placed = false;
      for (int t = 0; t < 200 && !placed; ++t) {
        const int a = std::uniform_int_distribution<int>(1, n - 1)(rng);
        if (!free_span(a, a)) continue;
        event[a] = 'j';
        placed = true;
      }
    }
    if (!placed) continue;

    BlobTrack holder;
    holder.radius_x = uniform(rng, 18.0, 28.0);
    holder.radius_y = uniform(rng, 18.0, 28.0);
    holder.held_object = options.object_label;
    BlobTrack other;
    other.shape = Shape::kRect;
    other.radius_x = uniform(rng, 14.0, 24.0);
    other.radius_y = uniform(rng, 14.0, 24.0);

    // Holder lives in the left part of the image, the other hand in the
    // right part, so their masks never touch.
    const double margin = 4.0;
    const double hu_lo = holder.radius_x + margin, hu_hi = 220.0;
    const double hv_lo = holder.radius_y + margin, hv_hi = h - holder.radius_y - margin;
    const double ou_lo = 340.0, ou_hi = w - other.radius_x - margin;
    const double ov_lo = other.radius_y + margin, ov_hi = h - other.radius_y - margin;

    Point3D hp = geometry::backproject(uniform(rng, 80.0, 180.0),
                                       uniform(rng, hv_lo + 40, hv_hi - 40),
                                       uniform(rng, 0.75, 1.0), k);
    Point3D op = geometry::backproject(uniform(rng, 380.0, 450.0),
                                       uniform(rng, ov_lo + 40, ov_hi - 40),
                                       uniform(rng, 0.7, 1.1), k);
    // The holder's total motion across a gap, including the step onto the
    // reappearance frame, stays within max_reappear.
    std::vector<double> step_cap(n, options.max_step);
    for (int a = 0; a < n; ++a) {
      if (event[a] != 'g' || event[a - 1] == 'g') continue;
      int b = a;
      while (b + 1 < n && event[b + 1] == 'g') ++b;
      const double cap = std::min(options.max_step,
                                  options.max_reappear / (b - a + 2));
      for (int f = a; f <= std::min(b + 1, n - 1); ++f) step_cap[f] = cap;
    }
    bool ok = true;
    for (int f = 0; f < n && ok; ++f) {
      if (f > 0) {
        const double step = step_cap[f];
        bool moved = false;
        for (int t = 0; t < 100 && !moved; ++t) {
          const Point3D cand = add(hp, random_step(rng, step));
          if (in_box(cand, k, hu_lo, hu_hi, hv_lo, hv_hi)) {
            hp = cand;
            moved = true;
          }
        }
        for (int t = 0; t < 100; ++t) {
          const Point3D cand = add(op, random_step(rng, 0.01));
          if (in_box(cand, k, ou_lo, ou_hi, ov_lo, ov_hi)) {
            op = cand;
            break;
          }
        }
        ok = moved;
      }
      Point3D shown = hp;
      if (event[f] == 'j') {
        shown.z += options.jump;
        ok = ok && in_box(shown, k, hu_lo, hu_hi, hv_lo, hv_hi);
      }
      holder.positions.push_back(shown);
      holder.visible.push_back(event[f] != 'g');
      other.positions.push_back(op);
      other.visible.push_back(true);
    }
    if (!ok) continue;

    spec.tracks = {holder, other};
    // Check the analytic labels leave a clear margin around the gate, so
    // rasterisation and depth noise cannot flip a decision.
    std::optional<Point3D> last;
    for (int f = 0; f < n && ok; ++f) {
      const Point3D o = blob_center_3d(blob_at(other, other.positions[f], k), k);
      if (!holder.visible[f]) {
        ok = geometry::distance_3d(o, *last) > gate + 0.05;
        continue;
      }
      const Point3D c = blob_center_3d(blob_at(holder, holder.positions[f], k), k);
      ok = geometry::distance_3d(c, o) >= 0.3;
      if (!last) {
        last = c;
        continue;
      }
      const double d = geometry::distance_3d(c, *last);
      const bool expect_label = event[f] != 'j';
      if (expect_label) {
        ok = ok && d <= gate - 0.02 && geometry::distance_3d(o, *last) > gate + 0.05;
        last = c;
      } else {
        ok = ok && d > gate + 0.02 && geometry::distance_3d(o, *last) > gate + 0.05;
      }
    }
    if (ok) return spec;
  }
  fail(ErrorCode::kInternal, "could not build a random trajectory");
}

annotations::AnnotationFile ground_truth_annotations(
    const SequenceRender& render, const std::string& sequence_id) {
  annotations::AnnotationFile file;
  file.sequence_id = sequence_id;
  int next_id = 1;
  for (std::size_t f = 0; f < render.frames.size(); ++f) {
    const SceneRender& fr = render.frames[f];
    const int image_id = static_cast<int>(f) + 1;
    file.images.push_back(
        {image_id,
         ingest::format_frame_stem(ingest::kDefaultFramePattern, image_id) +
             ingest::kRgbSuffix,
         fr.pair.rgb.width(), fr.pair.rgb.height()});
    const auto& inst = fr.ground_truth.instances;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      annotations::Annotation a;
      a.id = next_id++;
      a.image_id = image_id;
      a.category_id = render.labels[f][j];
      a.mask = inst[j].pixels;
      a.centroid = inst[j].centroid;
      file.annotations.push_back(std::move(a));
    }
  }
  return file;
}

void write_sequence(const std::filesystem::path& dir,
                    const std::string& sequence_id, const CameraIntrinsics& k,
                    const SequenceRender& render) {
  if (render.frames.empty()) fail(ErrorCode::kEmpty, "no frames to write");
  ingest::SequenceManifest m;
  m.id = sequence_id;
  m.num_frames = static_cast<int>(render.frames.size());
  m.intrinsics = k;
  m.width = render.frames[0].pair.rgb.width();
  m.height = render.frames[0].pair.rgb.height();
  ingest::write_sequence_metadata(dir, m);
  for (std::size_t f = 0; f < render.frames.size(); ++f) {
    const std::string stem =
        ingest::format_frame_stem(m.frame_pattern, static_cast<int>(f) + 1);
    io::write_rgb_png(dir / (stem + ingest::kRgbSuffix), render.frames[f].pair.rgb);
    io::write_depth_png(dir / (stem + ingest::kDepthSuffix),
                        render.frames[f].pair.depth);
  }
}

WheelFixture make_wheel(int width, int height, const CameraIntrinsics& k,
                        double inner_px, double outer_px,
                        std::uint16_t depth_mm) {
  if (!(inner_px >= 0.0 && outer_px >= inner_px)) {
    fail(ErrorCode::kInvalidArgument, "need 0 <= inner <= outer radius");
  }
  if (depth_mm == kDepthHole) {
    fail(ErrorCode::kInvalidArgument, "wheel depth must be nonzero");
  }
  k.validate(width, height);
  WheelFixture out{BinaryMask(width, height, 0), DepthFrame(width, height, depth_mm)};
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double d = std::hypot(c - k.cx, r - k.cy);
      if (d >= inner_px && d <= outer_px) out.mask.at(r, c) = 1;
    }
  }
  return out;
}

}  // namespace handlabel::synth
