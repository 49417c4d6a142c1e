// Copyright 2026 The vesselq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vesselq {

/// Pixel coordinate: x is the column, y is the row. Ordered row-major.
struct PixelPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
  friend bool operator<(const PixelPoint& a, const PixelPoint& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  }
};

double distance(PixelPoint a, PixelPoint b);

/// True iff the two points are distinct and touch in the 8-neighborhood.
bool adjacent8(PixelPoint a, PixelPoint b);

/// Row-major foreground/background raster. Pixels are stored as 0/1 bytes.
class BinaryMask {
 public:
  /// All-background mask. Throws Error(kInvalidInput) on a zero-area size.
  BinaryMask(int width, int height);
  /// `pixels` holds width*height entries; any nonzero byte is foreground.
  BinaryMask(int width, int height, std::span<const std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool contains(PixelPoint p) const noexcept { return contains(p.x, p.y); }

  bool at(int x, int y) const noexcept {
    return pixels_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  bool at(PixelPoint p) const noexcept { return at(p.x, p.y); }
  /// Out-of-bounds reads as background.
  bool get(int x, int y) const noexcept { return contains(x, y) && at(x, y); }

  void set(int x, int y, bool value) noexcept {
    pixels_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  void set(PixelPoint p, bool value) noexcept { set(p.x, p.y, value); }

  std::span<const std::uint8_t> data() const noexcept { return pixels_; }
  std::size_t count() const noexcept;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Per-pixel foreground probability in [0, 1].
class ProbMask {
 public:
  ProbMask(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

/// 8-bit single-channel raster as read from disk.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Foreground iff intensity >= threshold.
BinaryMask binarize(const GrayImage& image, std::uint8_t threshold = 128);

/// Foreground as 255, background as 0.
GrayImage to_gray(const BinaryMask& mask);

/// Probability = intensity / 255.
ProbMask to_prob(const GrayImage& image);

/// Number of 8-connected foreground components, optionally counting only
/// components of at least `min_size` pixels.
int count_components8(const BinaryMask& mask, std::size_t min_size = 1);

}  // namespace vesselq
