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

#include "core/regions.hpp"

#include <fstream>
#include <set>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "json.hpp"

namespace handlabel::regions {

using nlohmann::json;

std::vector<geometry::ControlRegion> load(const std::filesystem::path& path,
                                          const geometry::CameraIntrinsics& k) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read regions file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("regions") ||
      !root["regions"].is_array()) {
    fail(ErrorCode::kParse, path.string() + ": expected {\"regions\": [...]}");
  }
  const std::filesystem::path base = path.parent_path();
  std::vector<geometry::ControlRegion> out;
  std::set<std::string> names;
  try {
    for (const json& r : root["regions"]) {
      const std::string name = r.at("name").get<std::string>();
      if (!names.insert(name).second) {
        fail(ErrorCode::kParse, "duplicate region name " + name);
      }
      geometry::ControlRegion region;
      if (r.contains("points")) {
        region.name = name;
        for (const json& p : r["points"]) {
          const auto v = p.get<std::vector<double>>();
          if (v.size() != 3) fail(ErrorCode::kParse, "region points need 3 numbers");
          region.points.push_back({v[0], v[1], v[2]});
        }
      } else {
        const BinaryMask mask =
            io::read_mask_png(base / r.at("mask").get<std::string>());
        const DepthFrame depth =
            io::read_depth_png(base / r.at("depth").get<std::string>());
        if (!mask.same_shape(depth)) {
          fail(ErrorCode::kRegistration,
               "region " + name + ": mask and depth sizes differ");
        }
        region = geometry::make_control_region(name, mask, depth, k);
      }
      if (region.points.empty()) {
        fail(ErrorCode::kEmpty, "region " + name + " has no points");
      }
      out.push_back(std::move(region));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace handlabel::regions
