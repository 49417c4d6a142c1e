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

#include "vesselq/overlay.hpp"

#include <algorithm>
#include <vector>

#include "vesselq/error.hpp"

namespace vesselq {

Rgb grade_color(const std::optional<Grade>& grade) {
  if (!grade) return kUngradedColor;
  switch (*grade) {
    case Grade::kSevere:
      return kSevereColor;
    case Grade::kModerate:
      return kModerateColor;
    case Grade::kMild:
      return kMildColor;
  }
  return kUngradedColor;
}

RgbImage render_overlay(const BinaryMask& mask, std::span<const StenosisFinding> findings) {
  RgbImage out{mask.width(), mask.height(), {}};
  out.pixels.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const std::uint8_t v = mask.data()[i] ? 255 : 0;
    out.pixels[i] = {v, v, v};
  }

  std::vector<const StenosisFinding*> order;
  for (const auto& f : findings) {
    if (!mask.contains(f.location)) {
      throw Error(ErrorCode::kInvalidInput, "finding at (" + std::to_string(f.location.x) + ", " +
                                                std::to_string(f.location.y) +
                                                ") lies outside the mask");
    }
    order.push_back(&f);
  }
  auto rank = [](const StenosisFinding* f) { return f->grade ? static_cast<int>(*f->grade) : -1; };
  std::stable_sort(order.begin(), order.end(),
                   [&](const auto* a, const auto* b) { return rank(a) < rank(b); });

  constexpr int r = kMarkerRadius;
  for (const auto* f : order) {
    const Rgb color = grade_color(f->grade);
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy > r * r) continue;
        const int x = f->location.x + dx;
        const int y = f->location.y + dy;
        if (!mask.contains(x, y)) continue;
        out.pixels[static_cast<std::size_t>(y) * out.width + x] = color;
      }
    }
  }
  return out;
}

}  // namespace vesselq
