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
#include <vector>

#include "vesselq/raster.hpp"

namespace vesselq {

/// A one-pixel-wide centerline obtained by thinning a mask to its fixpoint.
struct Skeleton {
  BinaryMask mask;
};

/// Skeleton pixels split by their count of 8-neighbors in the skeleton.
struct PointClasses {
  std::vector<PixelPoint> branch_points;  // >= 3 neighbors
  std::vector<PixelPoint> endpoints;      // <= 1 neighbor
};

struct VesselGraph {
  /// Ordered, 8-connected paths between junctions and endpoints.
  std::vector<std::vector<PixelPoint>> branches;
  /// Branch points merged into 8-connected junction clusters.
  std::vector<std::vector<PixelPoint>> junctions;
  std::vector<PixelPoint> branch_points;
  std::vector<PixelPoint> endpoints;
  /// Parallel to `branches`: true for a closed loop with no terminal.
  std::vector<bool> closed;
};

/// Guo-Hall two-subiteration parallel thinning, iterated until no pixel is
/// removed. An empty mask yields an empty skeleton.
Skeleton thin(const BinaryMask& mask);

/// Number of skeleton pixels in the 8-neighborhood of `p`.
int neighbor_count(const BinaryMask& skeleton, PixelPoint p);

PointClasses classify_points(const Skeleton& skel);

/// Partitions the skeleton into branch points and maximal paths between them.
/// Each path runs from its row-major smaller terminal to the other; loops
/// start at their smallest pixel.
VesselGraph trace_branches(const Skeleton& skel);

/// Drops branches shorter than `min_length` that end at an endpoint. Loop
/// branches and junction-to-junction branches are kept.
VesselGraph prune_spurs(const VesselGraph& graph, std::size_t min_length = 3);

}  // namespace vesselq
