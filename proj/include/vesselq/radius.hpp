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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vesselq/raster.hpp"
#include "vesselq/skeleton.hpp"

namespace vesselq {

inline constexpr int kDefaultMaxSearchRadius = 50;

struct RadiusEntry {
  PixelPoint point;
  int radius = 0;
};

struct RadiusProfile {
  std::size_t branch_id = 0;
  std::vector<RadiusEntry> entries;

  double mean_radius() const;
};

/// Expanding-circle search with the circle samples for every radius
/// precomputed. Ring r is sampled at 8*ceil(2*pi*r/8) evenly spaced angles,
/// so the arc spacing never exceeds one pixel and the eight compass
/// directions are always included.
class CircleSearch {
 public:
  explicit CircleSearch(int max_search_radius = kDefaultMaxSearchRadius);

  int max_search_radius() const noexcept { return static_cast<int>(rings_.size()); }

  /// Smallest r whose circle touches background or leaves the raster, or
  /// max_search_radius when every circle stays inside the foreground.
  /// Throws Error(kInvalidInput) if `center` is not a foreground pixel.
  int radius_at(const BinaryMask& mask, PixelPoint center) const;

  std::span<const std::array<int, 2>> ring(int r) const { return rings_.at(r - 1); }

 private:
  std::vector<std::vector<std::array<int, 2>>> rings_;
};

int inscribed_radius(const BinaryMask& mask, PixelPoint center,
                     int max_search_radius = kDefaultMaxSearchRadius);

/// Throws Error(kOutOfRange) for a bad branch index.
RadiusProfile profile_branch(const BinaryMask& mask, const VesselGraph& graph,
                             std::size_t branch_id, const CircleSearch& search);
RadiusProfile profile_branch(const BinaryMask& mask, const VesselGraph& graph,
                             std::size_t branch_id,
                             int max_search_radius = kDefaultMaxSearchRadius);

struct DistanceMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(PixelPoint p) const { return at(p.x, p.y); }
};

/// Exact Euclidean distance from each foreground pixel to the nearest
/// background pixel; everything outside the raster counts as background.
/// Background pixels map to 0. Uses the separable lower-envelope method.
DistanceMap exact_distance_transform(const BinaryMask& mask);

/// CSV with header `branch_id,index,x,y,radius`.
std::string profiles_csv(std::span<const RadiusProfile> profiles);

}  // namespace vesselq
