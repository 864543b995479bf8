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

// COCO-compatible annotation files.
//
//   {
//     "info": {"sequence_id": "..."},
//     "images": [{"id", "file_name", "width", "height"}],
//     "annotations": [{"id", "image_id", "category_id", "segmentation",
//                      "area", "bbox", "iscrowd", "score"?, "centroid_3d"?,
//                      "roi_plus"?}],
//     "categories": [{"id", "name", "supercategory"}]
//   }
//
// Image ids are 1-based frame indices. Within an image, annotations keep
// their file order, which is the instance order used by propagation and
// the seed overlay. segmentation is uncompressed RLE
// {"size": [h, w], "counts": [...]}.
//
// Results files (predictions) are the COCO array form:
//   [{"image_id", "category_id", "score", "segmentation", ...}]

#ifndef HANDLABEL_CORE_ANNOTATIONS_HPP_
#define HANDLABEL_CORE_ANNOTATIONS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/eval.hpp"
#include "core/geometry.hpp"
#include "core/image.hpp"

namespace handlabel::annotations {

struct ImageRecord {
  int id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
};

struct Annotation {
  int id = 0;
  int image_id = 0;
  int category_id = 0;
  PixelSet mask;
  std::optional<double> score;
  std::optional<geometry::Point3D> centroid;
  std::optional<geometry::RoiBox> roi_plus;
};

struct AnnotationFile {
  std::string sequence_id;
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;

  // Throws kParse on duplicate ids, dangling image references, categories
  // outside 0..4 or empty masks.
  void validate() const;

  const ImageRecord& image(int image_id) const;

  // Image ids in ascending order paired with the indices of their
  // annotations in file order.
  std::vector<std::pair<int, std::vector<std::size_t>>> by_image() const;
};

std::string to_json_text(const AnnotationFile& file);
AnnotationFile from_json_text(const std::string& text);

AnnotationFile load(const std::filesystem::path& path);
void save(const std::filesystem::path& path, const AnnotationFile& file);

// COCO results array; score defaults to 1.0 where absent.
std::string to_results_json_text(const AnnotationFile& file);

std::vector<eval::GtInstance> to_ground_truth(const AnnotationFile& file);

// Accepts a results array or a full annotation file (score defaults to 1.0).
std::vector<eval::PredInstance> load_predictions(
    const std::filesystem::path& path);

}  // namespace handlabel::annotations

#endif  // HANDLABEL_CORE_ANNOTATIONS_HPP_
