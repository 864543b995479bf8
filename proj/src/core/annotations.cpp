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

#include "core/annotations.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/propagate.hpp"
#include "core/rle.hpp"
#include "json.hpp"

namespace handlabel::annotations {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json segmentation_json(const PixelSet& mask, int width, int height) {
  const rle::Rle r = rle::encode(mask, width, height);
  ordered_json seg;
  seg["size"] = {height, width};
  seg["counts"] = r.counts;
  return seg;
}

PixelSet parse_segmentation(const json& seg) {
  if (!seg.is_object() || !seg.contains("size") || !seg.contains("counts")) {
    fail(ErrorCode::kParse, "segmentation must be {size, counts}");
  }
  if (seg["counts"].is_string()) {
    fail(ErrorCode::kParse,
         "compressed RLE strings are not supported; use uncompressed counts");
  }
  const auto size = seg["size"].get<std::vector<int>>();
  if (size.size() != 2) fail(ErrorCode::kParse, "segmentation size is [h, w]");
  rle::Rle r{size[1], size[0], seg["counts"].get<std::vector<std::uint32_t>>()};
  return rle::decode(r);
}

ordered_json bbox_json(const geometry::RoiBox& b) {
  return {b.x, b.y, b.w, b.h};
}

geometry::RoiBox parse_box(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 4) fail(ErrorCode::kParse, "box must have 4 numbers");
  return {v[0], v[1], v[2], v[3]};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

ordered_json categories_json() {
  ordered_json cats = ordered_json::array();
  for (const auto& c : propagate::kObjectClasses) {
    cats.push_back({{"id", c.id},
                    {"name", std::string(c.name)},
                    {"supercategory", "hand"}});
  }
  return cats;
}

}  // namespace

void AnnotationFile::validate() const {
  std::set<int> image_ids;
  for (const auto& im : images) {
    if (!image_ids.insert(im.id).second) {
      fail(ErrorCode::kParse, "duplicate image id " + std::to_string(im.id));
    }
    if (im.width <= 0 || im.height <= 0) {
      fail(ErrorCode::kParse,
           "image " + std::to_string(im.id) + " has non-positive size");
    }
  }
  std::set<int> ann_ids;
  for (const auto& a : annotations) {
    if (!ann_ids.insert(a.id).second) {
      fail(ErrorCode::kParse, "duplicate annotation id " + std::to_string(a.id));
    }
    if (!image_ids.count(a.image_id)) {
      fail(ErrorCode::kParse, "annotation " + std::to_string(a.id) +
                                  " references missing image " +
                                  std::to_string(a.image_id));
    }
    if (!propagate::is_object_class(a.category_id)) {
      fail(ErrorCode::kParse, "annotation " + std::to_string(a.id) +
                                  " has category " +
                                  std::to_string(a.category_id) +
                                  " outside 0..4");
    }
    if (a.mask.empty()) {
      fail(ErrorCode::kParse,
           "annotation " + std::to_string(a.id) + " has an empty mask");
    }
    if (a.score && !(*a.score >= 0.0 && *a.score <= 1.0)) {
      fail(ErrorCode::kParse,
           "annotation " + std::to_string(a.id) + " score outside [0, 1]");
    }
  }
}

const ImageRecord& AnnotationFile::image(int image_id) const {
  for (const auto& im : images) {
    if (im.id == image_id) return im;
  }
  fail(ErrorCode::kParse, "no image with id " + std::to_string(image_id));
}

std::vector<std::pair<int, std::vector<std::size_t>>> AnnotationFile::by_image()
    const {
  std::map<int, std::vector<std::size_t>> grouped;
  for (const auto& im : images) grouped[im.id];
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    grouped[annotations[i].image_id].push_back(i);
  }
  return {grouped.begin(), grouped.end()};
}

std::string to_json_text(const AnnotationFile& file) {
  file.validate();
  ordered_json root;
  root["info"] = {{"sequence_id", file.sequence_id}};
  root["images"] = ordered_json::array();
  for (const auto& im : file.images) {
    root["images"].push_back({{"id", im.id},
                              {"file_name", im.file_name},
                              {"width", im.width},
                              {"height", im.height}});
  }
  root["annotations"] = ordered_json::array();
  for (const auto& a : file.annotations) {
    const ImageRecord& im = file.image(a.image_id);
    ordered_json j;
    j["id"] = a.id;
    j["image_id"] = a.image_id;
    j["category_id"] = a.category_id;
    j["segmentation"] = segmentation_json(a.mask, im.width, im.height);
    j["area"] = a.mask.size();
    j["bbox"] = bbox_json(geometry::mask_to_bbox(a.mask));
    j["iscrowd"] = 0;
    if (a.score) j["score"] = *a.score;
    if (a.centroid) j["centroid_3d"] = {a.centroid->x, a.centroid->y, a.centroid->z};
    if (a.roi_plus) j["roi_plus"] = bbox_json(*a.roi_plus);
    root["annotations"].push_back(std::move(j));
  }
  root["categories"] = categories_json();
  return root.dump() + "\n";
}

AnnotationFile from_json_text(const std::string& text) {
  AnnotationFile file;
  try {
    const json root = json::parse(text);
    if (!root.is_object()) fail(ErrorCode::kParse, "annotation file must be an object");
    if (root.contains("info") && root["info"].contains("sequence_id")) {
      file.sequence_id = root["info"]["sequence_id"].get<std::string>();
    }
    for (const auto& im : root.at("images")) {
      file.images.push_back({im.at("id").get<int>(),
                             im.value("file_name", std::string()),
                             im.at("width").get<int>(),
                             im.at("height").get<int>()});
    }
    for (const auto& j : root.at("annotations")) {
      Annotation a;
      a.id = j.at("id").get<int>();
      a.image_id = j.at("image_id").get<int>();
      a.category_id = j.at("category_id").get<int>();
      a.mask = parse_segmentation(j.at("segmentation"));
      if (j.contains("score")) a.score = j["score"].get<double>();
      if (j.contains("centroid_3d")) {
        const auto c = j["centroid_3d"].get<std::vector<double>>();
        if (c.size() != 3) fail(ErrorCode::kParse, "centroid_3d needs 3 numbers");
        a.centroid = geometry::Point3D{c[0], c[1], c[2]};
      }
      if (j.contains("roi_plus")) a.roi_plus = parse_box(j["roi_plus"]);
      file.annotations.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("annotation file: ") + e.what());
  }
  file.validate();
  for (const auto& a : file.annotations) {
    const ImageRecord& im = file.image(a.image_id);
    for (const Pixel& p : a.mask) {
      if (p.row >= im.height || p.col >= im.width) {
        fail(ErrorCode::kParse, "annotation " + std::to_string(a.id) +
                                    " segmentation size differs from image");
      }
    }
  }
  return file;
}

AnnotationFile load(const std::filesystem::path& path) {
  return from_json_text(read_text(path));
}

void save(const std::filesystem::path& path, const AnnotationFile& file) {
  write_text(path, to_json_text(file));
}

std::string to_results_json_text(const AnnotationFile& file) {
  file.validate();
  ordered_json results = ordered_json::array();
  for (const auto& a : file.annotations) {
    const ImageRecord& im = file.image(a.image_id);
    ordered_json j;
    j["image_id"] = a.image_id;
    j["category_id"] = a.category_id;
    j["score"] = a.score.value_or(1.0);
    j["segmentation"] = segmentation_json(a.mask, im.width, im.height);
    j["area"] = a.mask.size();
    j["bbox"] = bbox_json(geometry::mask_to_bbox(a.mask));
    results.push_back(std::move(j));
  }
  return results.dump() + "\n";
}

std::vector<eval::GtInstance> to_ground_truth(const AnnotationFile& file) {
  std::vector<eval::GtInstance> gts;
  gts.reserve(file.annotations.size());
  for (const auto& a : file.annotations) {
    gts.push_back({a.image_id, a.mask, a.category_id});
  }
  return gts;
}

std::vector<eval::PredInstance> load_predictions(
    const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  std::vector<eval::PredInstance> preds;
  if (root.is_object()) {
    const AnnotationFile file = from_json_text(text);
    for (const auto& a : file.annotations) {
      preds.push_back({a.image_id, a.mask, a.category_id, a.score.value_or(1.0)});
    }
    return preds;
  }
  if (!root.is_array()) {
    fail(ErrorCode::kParse, path.string() + ": expected a results array");
  }
  try {
    for (const auto& j : root) {
      eval::PredInstance p;
      p.image_id = j.at("image_id").get<int>();
      p.category = j.at("category_id").get<int>();
      p.score = j.value("score", 1.0);
      p.mask = parse_segmentation(j.at("segmentation"));
      if (!propagate::is_object_class(p.category)) {
        fail(ErrorCode::kParse, "prediction category " +
                                    std::to_string(p.category) +
                                    " outside 0..4");
      }
      if (!(p.score >= 0.0 && p.score <= 1.0)) {
        fail(ErrorCode::kParse, "prediction score outside [0, 1]");
      }
      if (p.mask.empty()) fail(ErrorCode::kParse, "prediction mask is empty");
      preds.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return preds;
}

}  // namespace handlabel::annotations
