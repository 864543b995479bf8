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

#ifndef HANDLABEL_CORE_IMAGE_HPP_
#define HANDLABEL_CORE_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace handlabel {

// Row-major dense image. Dimensions are fixed at construction.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int row, int col) {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  const T& at(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  bool contains(int row, int col) const {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }

  template <typename U>
  bool same_shape(const Image<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image& a, const Image& b) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Depth in millimetres; 0 marks a hole (no sensor return).
using DepthFrame = Image<std::uint16_t>;
using RgbFrame = Image<Rgb>;
using BinaryMask = Image<std::uint8_t>;

inline constexpr std::uint16_t kDepthHole = 0;

// Pixel coordinate. Ordering is row-major, which is the canonical order of
// every PixelSet.
struct Pixel {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// Sorted, duplicate-free list of pixels.
using PixelSet = std::vector<Pixel>;

// Sorts and removes duplicates in place.
void normalize_pixel_set(PixelSet& pixels);

// Size of the intersection of two sorted pixel sets.
std::size_t intersection_size(std::span<const Pixel> a,
                              std::span<const Pixel> b);

// Sorted union of two sorted pixel sets.
PixelSet merge_pixel_sets(std::span<const Pixel> a, std::span<const Pixel> b);

std::size_t count_holes(const DepthFrame& depth);

}  // namespace handlabel

#endif  // HANDLABEL_CORE_IMAGE_HPP_
