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

#include "core/ingest.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "json.hpp"

namespace handlabel::ingest {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PatternParts {
  std::string prefix;
  std::string suffix;
  int width = 0;  // zero-padding width, 0 for "%d"
};

PatternParts split_pattern(const std::string& pattern) {
  static const std::regex kConversion(R"(%(0?)(\d*)d)");
  std::smatch m;
  if (!std::regex_search(pattern, m, kConversion)) {
    fail(ErrorCode::kParse,
         "frame_pattern needs one %d conversion: " + pattern);
  }
  PatternParts parts;
  parts.prefix = m.prefix().str();
  parts.suffix = m.suffix().str();
  if (parts.suffix.find('%') != std::string::npos ||
      parts.prefix.find('%') != std::string::npos) {
    fail(ErrorCode::kParse,
         "frame_pattern needs exactly one %d conversion: " + pattern);
  }
  if (m[2].length() > 0) parts.width = std::stoi(m[2].str());
  return parts;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "missing " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

double number_field(const json& j, const char* key, const fs::path& path) {
  if (!j.contains(key) || !j[key].is_number()) {
    fail(ErrorCode::kParse, path.string() + ": missing numeric key '" +
                                std::string(key) + "'");
  }
  return j[key].get<double>();
}

std::string regex_escape(const std::string& s) {
  static const std::regex kSpecial(R"([.^$|()\[\]{}*+?\\])");
  return std::regex_replace(s, kSpecial, R"(\$&)");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::string format_frame_stem(const std::string& pattern, int index) {
  const PatternParts parts = split_pattern(pattern);
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < parts.width) {
    digits.insert(0, parts.width - digits.size(), '0');
  }
  return parts.prefix + digits + parts.suffix;
}

geometry::CameraIntrinsics load_intrinsics(const fs::path& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) fail(ErrorCode::kParse, path.string() + ": not an object");
  geometry::CameraIntrinsics k{number_field(j, "fx", path),
                               number_field(j, "fy", path),
                               number_field(j, "cx", path),
                               number_field(j, "cy", path)};
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) {
    fail(ErrorCode::kInvalidArgument,
         path.string() + ": focal lengths must be positive");
  }
  if (!(k.cx >= 0.0) || !(k.cy >= 0.0)) {
    fail(ErrorCode::kInvalidArgument,
         path.string() + ": principal point must be non-negative");
  }
  return k;
}

geometry::CameraIntrinsics load_intrinsics(const fs::path& path, int width,
                                           int height) {
  geometry::CameraIntrinsics k = load_intrinsics(path);
  k.validate(width, height);
  return k;
}

std::string manifest_to_json(const SequenceManifest& manifest) {
  const json j = {{"id", manifest.id},
                  {"num_frames", manifest.num_frames},
                  {"frame_pattern", manifest.frame_pattern}};
  return j.dump(2) + "\n";
}

std::string intrinsics_to_json(const geometry::CameraIntrinsics& k) {
  const json j = {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}};
  return j.dump(2) + "\n";
}

void write_sequence_metadata(const fs::path& dir,
                             const SequenceManifest& manifest) {
  fs::create_directories(dir);
  write_text(dir / kManifestFile, manifest_to_json(manifest));
  write_text(dir / kIntrinsicsFile, intrinsics_to_json(manifest.intrinsics));
}

Sequence Sequence::open(const fs::path& dir) {
  Sequence seq;
  seq.dir_ = dir;
  SequenceManifest& m = seq.manifest_;

  const fs::path manifest_path = dir / kManifestFile;
  if (!fs::exists(manifest_path)) {
    fail(ErrorCode::kIo, "missing manifest " + manifest_path.string());
  }
  const json j = read_json_file(manifest_path);
  try {
    m.id = j.at("id").get<std::string>();
    m.num_frames = j.at("num_frames").get<int>();
    m.frame_pattern = j.at("frame_pattern").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, manifest_path.string() + ": " + e.what());
  }
  if (m.num_frames < 1) {
    fail(ErrorCode::kInvalidArgument,
         manifest_path.string() + ": num_frames must be >= 1");
  }

  // Every frame file on disk must belong to 1..N, and every index in 1..N
  // must be present.
  const PatternParts parts = split_pattern(m.frame_pattern);
  const fs::path frame_dir = (dir / (parts.prefix + "0")).parent_path();
  const std::string name_prefix =
      fs::path(parts.prefix + "0").filename().string();
  const std::string stem_prefix =
      name_prefix.substr(0, name_prefix.size() - 1);
  const std::regex file_re("^" + regex_escape(stem_prefix) + R"((\d+))" +
                           regex_escape(parts.suffix) + R"(\.(rgb|depth)\.png$)");
  std::set<int> on_disk;
  if (fs::is_directory(frame_dir)) {
    for (const auto& entry : fs::directory_iterator(frame_dir)) {
      const std::string name = entry.path().filename().string();
      std::smatch sm;
      if (std::regex_match(name, sm, file_re)) {
        on_disk.insert(std::stoi(sm[1].str()));
      }
    }
  }
  for (int i = 1; i <= m.num_frames; ++i) {
    if (!on_disk.count(i)) {
      fail(ErrorCode::kIo, "frame " + std::to_string(i) +
                               " missing: frame indices must be contiguous "
                               "1.." + std::to_string(m.num_frames));
    }
  }
  for (int i : on_disk) {
    if (i < 1 || i > m.num_frames) {
      fail(ErrorCode::kParse,
           "non-contiguous frame indices: found frame " + std::to_string(i) +
               " outside 1.." + std::to_string(m.num_frames));
    }
  }

  for (int i = 1; i <= m.num_frames; ++i) {
    const std::string stem = format_frame_stem(m.frame_pattern, i);
    FramePaths paths{dir / (stem + kRgbSuffix), dir / (stem + kDepthSuffix)};
    const io::PngHeader rgb = io::read_png_header(paths.rgb);
    const io::PngHeader depth = io::read_png_header(paths.depth);
    if (depth.bit_depth != 16 || depth.color_type != 0) {
      fail(ErrorCode::kParse, paths.depth.string() +
                                  ": depth must be 16-bit grayscale PNG");
    }
    if (rgb.bit_depth != 8 || (rgb.color_type != 2 && rgb.color_type != 6)) {
      fail(ErrorCode::kParse,
           paths.rgb.string() + ": rgb must be 8-bit RGB PNG");
    }
    if (rgb.width != depth.width || rgb.height != depth.height) {
      std::ostringstream msg;
      msg << "frame " << i << " not registered: rgb " << rgb.height << "x"
          << rgb.width << " vs depth " << depth.height << "x" << depth.width;
      fail(ErrorCode::kRegistration, msg.str());
    }
    if (i == 1) {
      m.width = depth.width;
      m.height = depth.height;
    } else if (depth.width != m.width || depth.height != m.height) {
      fail(ErrorCode::kRegistration,
           "frame " + std::to_string(i) + " size differs from frame 1");
    }
    m.frames.push_back(std::move(paths));
  }

  m.intrinsics = load_intrinsics(dir / kIntrinsicsFile, m.width, m.height);
  return seq;
}

RegisteredFramePair Sequence::load_frame(int index) const {
  if (index < 1 || index > manifest_.num_frames) {
    fail(ErrorCode::kOutOfRange, "frame index " + std::to_string(index) +
                                     " outside 1.." +
                                     std::to_string(manifest_.num_frames));
  }
  const FramePaths& paths = manifest_.frames[index - 1];
  RegisteredFramePair pair{io::read_rgb_png(paths.rgb),
                           io::read_depth_png(paths.depth), index};
  if (!pair.rgb.same_shape(pair.depth) ||
      pair.depth.width() != manifest_.width ||
      pair.depth.height() != manifest_.height) {
    fail(ErrorCode::kRegistration,
         "frame " + std::to_string(index) + " changed size since open");
  }
  return pair;
}

}  // namespace handlabel::ingest
