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
#include <string>
#include <vector>

#include "vesselq/metrics.hpp"
#include "vesselq/raster.hpp"

namespace vesselq {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct StenosisSpec {
  double position = 0.0;  // arclength along the tube path, px
  double severity = 0.0;  // fractional radius loss at the dip, in (0, 1)
  double width = 3.0;     // half-extent of the dip along the path, px
};

struct TubeSpec {
  std::vector<Point2> path;
  double base_radius = 5.0;
  double taper = 0.0;  // radius lost per px of arclength
  std::vector<StenosisSpec> stenoses;

  double length() const;
  Point2 point_at(double s) const;
  double nominal_radius(double s) const { return base_radius - taper * s; }
  /// Nominal radius modulated by every stenosis dip.
  double radius(double s) const;
};

struct PhantomSpec {
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<TubeSpec> tubes;

  /// Throws Error(kInvalidSpec) naming the first violated constraint.
  void validate() const;
};

struct TubeTruth {
  std::vector<Point2> centerline;  // sampled every px of arclength
  std::vector<double> radius;      // analytic radius at each sample
};

struct InjectedStenosis {
  PixelPoint point;
  double severity = 0.0;
  /// 1 - r(s0) / mean(r(s0 - width), r(s0 + width)) from the analytic radius.
  double eta = 0.0;
  std::size_t tube = 0;
  double position = 0.0;
};

struct PhantomTruth {
  BinaryMask mask;
  std::vector<TubeTruth> tubes;
  std::vector<InjectedStenosis> stenoses;
};

/// Raised-cosine dip kernel: (1 + cos(pi u)) / 2 on |u| <= 1, else 0.
double bump(double u);

/// Rasterizes every tube as the union of disks of the local radius along
/// its path. Deterministic in the spec.
PhantomTruth generate(const PhantomSpec& spec);

/// Random binary tree of straight tubes with 2^depth - 1 tubes. Children
/// leave their parent's end at 20 to 70 degrees with a radius no larger than
/// the parent's. Each stenosis sits at least twice its width from either end
/// of its tube. Throws Error(kInvalidSpec) when depth < 1.
PhantomSpec tree_spec(int width, int height, std::uint64_t seed, int depth);
PhantomTruth generate_tree(int width, int height, std::uint64_t seed, int depth);

/// One gently curved tube crossing the raster with one to three stenoses
/// whose severities cycle through {0.3, 0.5, 0.6, 0.8} with the seed.
PhantomSpec random_tube_spec(int width, int height, std::uint64_t seed);

/// Straight tube with a linear taper and no stenosis.
PhantomSpec taper_tube_spec(int width, int height, std::uint64_t seed);

/// 256x128 horizontal tube of radius 8 with one 0.6 stenosis at mid-length.
PhantomSpec default_tube_spec();

std::string spec_to_json(const PhantomSpec& spec);
/// Throws Error(kInvalidSpec) on malformed JSON or a spec that fails validation.
PhantomSpec spec_from_json(const std::string& json_text);

std::string truth_to_json(const PhantomTruth& truth);
Annotations truth_annotations(const PhantomTruth& truth, const std::string& image_name);

}  // namespace vesselq
