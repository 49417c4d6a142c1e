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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vesselq/raster.hpp"
#include "vesselq/stenosis.hpp"

namespace vesselq {

inline constexpr double kDefaultMatchGamma = 10.0;
inline constexpr double kBceEpsilon = 1e-7;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Pixel-wise counts with foreground as the positive class.
/// Throws Error(kInvalidInput) on a dimension mismatch.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);

/// Each metric is empty when its denominator is zero.
struct SegMetrics {
  std::optional<double> iou;
  std::optional<double> acc;
  std::optional<double> spe;
  std::optional<double> sen;
  std::optional<double> f1;
};

SegMetrics seg_metrics(const ConfusionCounts& c);

struct BceDiceLoss {
  double bce = 0.0;
  double dice = 0.0;
  double total = 0.0;
};

/// BCE averages over every pixel with probabilities clamped to
/// [kBceEpsilon, 1 - kBceEpsilon]. Dice compares the truth foreground with
/// the prediction binarized at 0.5 (ties go to foreground); two empty sets
/// give a Dice loss of 0.
BceDiceLoss bce_dice(const ProbMask& pred, const BinaryMask& truth, double lambda1 = 1.0,
                     double lambda2 = 1.0);

struct MatchResult {
  /// (prediction index, label index)
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// One-to-one matching over pairs closer than gamma: as many pairs as
/// possible, then the least total distance. Pairs are listed by prediction.
/// Throws Error(kInvalidInput) unless gamma > 0.
MatchResult match_points(std::span<const PixelPoint> predicted,
                         std::span<const PixelPoint> labeled, double gamma = kDefaultMatchGamma);

MatchResult match_stenoses(std::span<const StenosisFinding> predicted,
                           std::span<const PixelPoint> labeled, double gamma = kDefaultMatchGamma);

struct DetectionRates {
  std::optional<double> tpr;
  std::optional<double> ppv;
};

DetectionRates detection_rates(std::size_t tp, std::size_t fp, std::size_t fn);
DetectionRates detection_rates(const MatchResult& m);

struct CountPair {
  std::size_t predicted = 0;
  std::size_t labeled = 0;
};

struct CountErrors {
  double armse = 0.0;
  /// Empty when every image has zero labeled points.
  std::optional<double> rrmse;
  /// Images left out of the RRMSE mean because they carry no labels.
  std::size_t rrmse_excluded = 0;
};

/// Throws Error(kInvalidInput) on an empty series.
CountErrors count_errors(std::span<const CountPair> series);

struct LabeledPoint {
  PixelPoint point;
  std::optional<Grade> grade;
  std::optional<double> eta;
};

/// Image name -> labeled stenosis points.
using Annotations = std::map<std::string, std::vector<LabeledPoint>>;

/// Parses `{"image": [{"x": .., "y": .., "grade": "mild"?}, ...], ...}`.
/// Throws Error(kInvalidInput) on malformed content.
Annotations parse_annotations(const std::string& json_text);
Annotations load_annotations(const std::string& path);
std::string annotations_to_json(const Annotations& annotations);

std::vector<PixelPoint> points_of(std::span<const LabeledPoint> labels);

}  // namespace vesselq
