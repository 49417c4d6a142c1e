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

#include "vesselq/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "vesselq/error.hpp"

namespace vesselq {

double distance(PixelPoint a, PixelPoint b) {
  return std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y));
}

bool adjacent8(PixelPoint a, PixelPoint b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return std::max(dx, dy) == 1;
}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidInput,
                "zero-area raster (" + std::to_string(width) + "x" +
                    std::to_string(height) + ")");
  }
}

}  // namespace

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, 0);
}

BinaryMask::BinaryMask(int width, int height, std::span<const std::uint8_t> pixels)
    : BinaryMask(width, height) {
  if (pixels.size() != pixels_.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "pixel buffer holds " + std::to_string(pixels.size()) +
                    " entries, expected " + std::to_string(pixels_.size()));
  }
  std::transform(pixels.begin(), pixels.end(), pixels_.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v != 0); });
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), 1));
}

ProbMask::ProbMask(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidInput, "probability buffer size mismatch");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidInput, "probability outside [0, 1]");
    }
  }
}

BinaryMask binarize(const GrayImage& image, std::uint8_t threshold) {
  check_dims(image.width, image.height);
  std::vector<std::uint8_t> bits(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), bits.begin(),
                 [threshold](std::uint8_t v) { return static_cast<std::uint8_t>(v >= threshold); });
  return BinaryMask(image.width, image.height, bits);
}

GrayImage to_gray(const BinaryMask& mask) {
  GrayImage out{mask.width(), mask.height(), {}};
  out.pixels.resize(mask.size());
  std::transform(mask.data().begin(), mask.data().end(), out.pixels.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  return out;
}

ProbMask to_prob(const GrayImage& image) {
  std::vector<double> values(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), values.begin(),
                 [](std::uint8_t v) { return v / 255.0; });
  return ProbMask(image.width, image.height, std::move(values));
}

int count_components8(const BinaryMask& mask, std::size_t min_size) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<PixelPoint> stack;
  int components = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || seen[idx]) continue;
      std::size_t size = 0;
      seen[idx] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const PixelPoint p = stack.back();
        stack.pop_back();
        ++size;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (!mask.get(nx, ny)) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (seen[n]) continue;
            seen[n] = 1;
            stack.push_back({nx, ny});
          }
        }
      }
      if (size >= min_size) ++components;
    }
  }
  return components;
}

}  // namespace vesselq
