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

#include <span>

#include "vesselq/raster.hpp"
#include "vesselq/stenosis.hpp"

namespace vesselq {

inline constexpr int kMarkerRadius = 4;

inline constexpr Rgb kSevereColor{255, 0, 0};
inline constexpr Rgb kModerateColor{0, 255, 0};
inline constexpr Rgb kMildColor{0, 0, 255};
inline constexpr Rgb kUngradedColor{255, 255, 0};

Rgb grade_color(const std::optional<Grade>& grade);

/// Vessel pixels white on black with a filled disk of radius kMarkerRadius
/// per finding in its grade color. More severe markers are drawn last.
/// Throws Error(kInvalidInput) if a finding lies outside the mask.
RgbImage render_overlay(const BinaryMask& mask, std::span<const StenosisFinding> findings);

}  // namespace vesselq
