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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vesselq/radius.hpp"
#include "vesselq/raster.hpp"
#include "vesselq/skeleton.hpp"

namespace vesselq {

enum class Grade { kMild, kModerate, kSevere };

std::string_view to_string(Grade grade);
std::optional<Grade> parse_grade(std::string_view name);

/// Clinical grade for a severity fraction: [0.25, 0.5) mild, [0.5, 0.75)
/// moderate, [0.75, 1) severe, nothing below 0.25.
/// Throws Error(kInvalidInput) when eta is outside [0, 1).
std::optional<Grade> grade(double eta);

struct DetectorConfig {
  /// Branches whose mean diameter (2 x mean radius) falls below this are skipped.
  double min_mean_diameter = 4.0;
  /// Findings closer than this collapse to the most severe one; 0 disables.
  double cluster_threshold_tau = 8.0;
  /// Findings with eta below this are dropped.
  double report_floor = 0.25;
  /// Odd window of the running median applied to each profile before the
  /// scan in detect_all; 1 leaves profiles untouched.
  int median_window = 5;

  /// Throws Error(kInvalidInput) on negative values, a floor outside [0, 1)
  /// or a median window that is not a positive odd number.
  void validate() const;
};

struct StenosisFinding {
  PixelPoint location;
  int r_c = 0;  // minimum radius in the narrowing
  int r_s = 0;  // radius at the shoulder before it
  int r_e = 0;  // radius at the shoulder after it
  double eta = 0.0;
  std::optional<Grade> grade;
  std::size_t branch_id = 0;
  /// Position of `location` within the branch profile.
  std::size_t index = 0;
};

/// eta = 1 - R_c / ((R_s + R_e) / 2)
double severity(int r_c, int r_s, int r_e);

/// Dynamic-queue scan along one radius profile. A strictly decreasing step
/// opens a narrowing whose R_s is the radius where the descent starts;
/// equal steps keep the current phase; a strictly increasing step turns the
/// narrowing into its recovery, which ends at the next strict decrease or at
/// the end of the profile and fixes R_e. A descent that never recovers emits
/// nothing. The reported location is the middle of the run of minimum radius
/// (the earlier middle when the run has even length).
std::vector<StenosisFinding> detect_branch(const RadiusProfile& profile,
                                           const DetectorConfig& config = {});

/// Keeps findings in descending-eta order (ties by row-major location) and
/// drops any finding closer than `tau` to one already kept. The result is
/// sorted by descending eta.
std::vector<StenosisFinding> cluster_findings(std::vector<StenosisFinding> findings,
                                              double tau);

/// Running median of odd `window` over the radii. The window shrinks
/// symmetrically near the ends so the first and last radii are kept.
RadiusProfile median_filtered(const RadiusProfile& profile, int window);

/// Median-filters every profile whose branch is wide enough, runs
/// detect_branch on it, then clusters the pooled findings.
std::vector<StenosisFinding> detect_all(const BinaryMask& mask, const VesselGraph& graph,
                                        std::span<const RadiusProfile> profiles,
                                        const DetectorConfig& config = {});

}  // namespace vesselq
