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

#include "core/image_io.hpp"

#include <array>
#include <fstream>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <string>

#include "core/error.hpp"

namespace handlabel::io {
namespace {

constexpr std::array<unsigned char, 8> kPngSignature = {
    0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

cv::Mat read_unchanged(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::kIo, "missing image " + path.string());
  }
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) fail(ErrorCode::kParse, "cannot decode image " + path.string());
  return m;
}

void write_mat(const std::filesystem::path& path, const cv::Mat& m) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m);
  } catch (const cv::Exception& e) {
    fail(ErrorCode::kIo, "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) fail(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

PngHeader read_png_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "missing image " + path.string());
  std::array<unsigned char, 29> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in.gcount() != static_cast<std::streamsize>(buf.size()) ||
      !std::equal(kPngSignature.begin(), kPngSignature.end(), buf.begin()) ||
      std::string(reinterpret_cast<const char*>(buf.data() + 12), 4) !=
          "IHDR") {
    fail(ErrorCode::kParse, "not a PNG file: " + path.string());
  }
  PngHeader h;
  h.width = static_cast<int>(read_be32(buf.data() + 16));
  h.height = static_cast<int>(read_be32(buf.data() + 20));
  h.bit_depth = buf[24];
  h.color_type = buf[25];
  return h;
}

RgbFrame read_rgb_png(const std::filesystem::path& path) {
  cv::Mat m = read_unchanged(path);
  if (m.depth() != CV_8U) {
    fail(ErrorCode::kParse, "RGB image must be 8-bit: " + path.string());
  }
  RgbFrame out(m.cols, m.rows);
  const int ch = m.channels();
  for (int r = 0; r < m.rows; ++r) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(r);
    for (int c = 0; c < m.cols; ++c) {
      const std::uint8_t* px = row + static_cast<std::ptrdiff_t>(c) * ch;
      if (ch >= 3) {
        out.at(r, c) = {px[2], px[1], px[0]};  // OpenCV stores BGR(A)
      } else {
        out.at(r, c) = {px[0], px[0], px[0]};
      }
    }
  }
  return out;
}

DepthFrame read_depth_png(const std::filesystem::path& path) {
  cv::Mat m = read_unchanged(path);
  if (m.depth() != CV_16U || m.channels() != 1) {
    fail(ErrorCode::kParse,
         "depth image must be 16-bit single channel: " + path.string());
  }
  DepthFrame out(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r) {
    const std::uint16_t* row = m.ptr<std::uint16_t>(r);
    std::copy(row, row + m.cols, &out.at(r, 0));
  }
  return out;
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
  cv::Mat m = read_unchanged(path);
  if (m.channels() != 1) {
    cv::Mat gray;
    cv::extractChannel(m, gray, 0);
    m = gray;
  }
  BinaryMask out(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      const bool set = m.depth() == CV_16U ? m.at<std::uint16_t>(r, c) != 0
                                           : m.at<std::uint8_t>(r, c) != 0;
      out.at(r, c) = set ? 1 : 0;
    }
  }
  return out;
}

void write_rgb_png(const std::filesystem::path& path, const RgbFrame& rgb) {
  cv::Mat m(rgb.height(), rgb.width(), CV_8UC3);
  for (int r = 0; r < rgb.height(); ++r) {
    auto* row = m.ptr<std::uint8_t>(r);
    for (int c = 0; c < rgb.width(); ++c) {
      const Rgb& px = rgb.at(r, c);
      row[3 * c + 0] = px.b;
      row[3 * c + 1] = px.g;
      row[3 * c + 2] = px.r;
    }
  }
  write_mat(path, m);
}

void write_depth_png(const std::filesystem::path& path,
                     const DepthFrame& depth) {
  cv::Mat m(depth.height(), depth.width(), CV_16UC1);
  for (int r = 0; r < depth.height(); ++r) {
    std::copy(&depth.at(r, 0), &depth.at(r, 0) + depth.width(),
              m.ptr<std::uint16_t>(r));
  }
  write_mat(path, m);
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      m.at<std::uint8_t>(r, c) = mask.at(r, c) ? 255 : 0;
    }
  }
  write_mat(path, m);
}

}  // namespace handlabel::io
