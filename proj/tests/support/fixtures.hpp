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

#ifndef HANDLABEL_TESTS_SUPPORT_FIXTURES_HPP_
#define HANDLABEL_TESTS_SUPPORT_FIXTURES_HPP_

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/image.hpp"
#include "oracles.hpp"

namespace fixtures {

inline oracle::CellSet to_cells(const handlabel::PixelSet& p) {
  oracle::CellSet s;
  for (const auto& px : p) s.insert({px.row, px.col});
  return s;
}

inline handlabel::PixelSet to_pixels(const oracle::CellSet& s) {
  handlabel::PixelSet p;
  for (const auto& [r, c] : s) p.push_back({r, c});
  return p;
}

inline handlabel::PixelSet rect(int row, int col, int h, int w) {
  handlabel::PixelSet p;
  for (int r = row; r < row + h; ++r) {
    for (int c = col; c < col + w; ++c) p.push_back({r, c});
  }
  return p;
}

// Error code thrown by fn; fails the test when nothing is thrown.
template <typename Fn>
handlabel::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const handlabel::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected an error");
}

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("handlabel_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct MicroDataset {
  std::vector<handlabel::eval::GtInstance> gts;
  std::vector<handlabel::eval::PredInstance> preds;
};

// Random rectangles on a 128 x 128 canvas: sides 4..80 px, so both the
// small and medium area ranges are populated. Predictions are jittered
// copies of ground truth plus false positives; scores come from a coarse
// grid so ties occur.
inline MicroDataset random_micro_dataset(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num_images(1, 4);
  std::uniform_int_distribution<int> num_objs(0, 5);
  std::uniform_int_distribution<int> cat(0, 4);
  std::uniform_int_distribution<int> side(4, 80);
  std::uniform_int_distribution<int> jit(-3, 3);
  std::uniform_int_distribution<int> score_step(1, 10);
  std::uniform_int_distribution<int> coin(0, 9);
  auto random_rect = [&](int h, int w) {
    std::uniform_int_distribution<int> r0(0, 128 - h), c0(0, 128 - w);
    return rect(r0(rng), c0(rng), h, w);
  };
  auto clamp_rect = [](int r, int c, int h, int w) {
    r = std::clamp(r, 0, 127);
    c = std::clamp(c, 0, 127);
    h = std::clamp(h, 1, 128 - r);
    w = std::clamp(w, 1, 128 - c);
    return rect(r, c, h, w);
  };
  MicroDataset ds;
  const int images = num_images(rng);
  for (int img = 1; img <= images; ++img) {
    const int n = num_objs(rng);
    for (int i = 0; i < n; ++i) {
      const int h = side(rng), w = side(rng);
      handlabel::eval::GtInstance g{img, random_rect(h, w), cat(rng)};
      const auto& first = g.mask.front();
      if (coin(rng) < 8) {
        handlabel::eval::PredInstance p;
        p.image_id = img;
        p.mask = clamp_rect(first.row + jit(rng), first.col + jit(rng), h + jit(rng),
                            w + jit(rng));
        p.category = coin(rng) < 7 ? g.category : cat(rng);
        p.score = score_step(rng) / 10.0;
        ds.preds.push_back(std::move(p));
      }
      ds.gts.push_back(std::move(g));
    }
    const int fps = coin(rng) < 5 ? 1 : 0;
    for (int i = 0; i < fps; ++i) {
      handlabel::eval::PredInstance p;
      p.image_id = img;
      p.mask = random_rect(side(rng), side(rng));
      p.category = cat(rng);
      p.score = score_step(rng) / 10.0;
      ds.preds.push_back(std::move(p));
    }
  }
  if (ds.gts.empty()) {
    ds.gts.push_back({1, rect(10, 10, 20, 20), 1});
  }
  return ds;
}

inline oracle::Report reference_ap(const MicroDataset& ds, bool sensitive,
                                   int max_dets) {
  std::vector<oracle::Gt> gts;
  for (const auto& g : ds.gts) gts.push_back({g.image_id, g.category, to_cells(g.mask)});
  std::vector<oracle::Det> dets;
  for (const auto& p : ds.preds) {
    dets.push_back({p.image_id, p.category, p.score, to_cells(p.mask)});
  }
  return oracle::coco_reference(dets, gts, sensitive, max_dets);
}

}  // namespace fixtures

#endif  // HANDLABEL_TESTS_SUPPORT_FIXTURES_HPP_
