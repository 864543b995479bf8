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

#include <array>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "core/error.hpp"
#include "core/pipeline.hpp"

namespace handlabel::pipeline {
namespace {

constexpr std::array<Rgb, 6> kPalette = {{
    {230, 25, 75},
    {0, 130, 200},
    {245, 130, 48},
    {145, 30, 180},
    {240, 50, 230},
    {255, 225, 25},
}};

}  // namespace

Overlay seed_overlay(const RgbFrame& rgb,
                     const std::vector<PixelSet>& instances) {
  if (instances.empty()) {
    fail(ErrorCode::kEmpty, "frame 1 has no instances to choose a seed from");
  }
  cv::Mat canvas(rgb.height(), rgb.width(), CV_8UC3);
  for (int r = 0; r < rgb.height(); ++r) {
    for (int c = 0; c < rgb.width(); ++c) {
      const Rgb& p = rgb.at(r, c);
      canvas.at<cv::Vec3b>(r, c) = {p.r, p.g, p.b};
    }
  }
  Overlay out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Rgb tint = kPalette[i % kPalette.size()];
    double sr = 0.0, sc = 0.0;
    for (const Pixel& p : instances[i]) {
      if (!rgb.contains(p.row, p.col)) {
        fail(ErrorCode::kOutOfRange, "instance pixel outside frame 1");
      }
      cv::Vec3b& v = canvas.at<cv::Vec3b>(p.row, p.col);
      v = {static_cast<uchar>((v[0] + tint.r) / 2),
           static_cast<uchar>((v[1] + tint.g) / 2),
           static_cast<uchar>((v[2] + tint.b) / 2)};
      sr += p.row;
      sc += p.col;
    }
    const std::string tag = std::to_string(i + 1);
    const double n = static_cast<double>(instances[i].size());
    int baseline = 0;
    const cv::Size size =
        cv::getTextSize(tag, cv::FONT_HERSHEY_SIMPLEX, 0.8, 2, &baseline);
    const cv::Point origin(static_cast<int>(sc / n) - size.width / 2,
                           static_cast<int>(sr / n) + size.height / 2);
    cv::putText(canvas, tag, origin, cv::FONT_HERSHEY_SIMPLEX, 0.8,
                cv::Scalar(0, 0, 0), 4, cv::LINE_AA);
    cv::putText(canvas, tag, origin, cv::FONT_HERSHEY_SIMPLEX, 0.8,
                cv::Scalar(255, 255, 255), 2, cv::LINE_AA);
    out.tags.push_back(tag);
  }
  out.image = RgbFrame(rgb.width(), rgb.height());
  for (int r = 0; r < rgb.height(); ++r) {
    for (int c = 0; c < rgb.width(); ++c) {
      const cv::Vec3b& v = canvas.at<cv::Vec3b>(r, c);
      out.image.at(r, c) = {v[0], v[1], v[2]};
    }
  }
  return out;
}

Overlay seed_overlay(const annotations::AnnotationFile& file,
                     const ingest::Sequence& seq) {
  file.validate();
  const auto grouped = file.by_image();
  if (grouped.empty()) fail(ErrorCode::kEmpty, "annotation file has no images");
  const int first = grouped.front().first;
  std::vector<PixelSet> masks;
  for (std::size_t idx : grouped.front().second) {
    masks.push_back(file.annotations[idx].mask);
  }
  if (masks.empty()) {
    fail(ErrorCode::kEmpty,
         "frame " + std::to_string(first) + " has no instances to choose a seed from");
  }
  return seed_overlay(seq.load_frame(first).rgb, masks);
}

}  // namespace handlabel::pipeline
