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
#include <functional>
#include <string>
#include <vector>

#include "vesselq/metrics.hpp"
#include "vesselq/radius.hpp"
#include "vesselq/raster.hpp"
#include "vesselq/skeleton.hpp"
#include "vesselq/stenosis.hpp"

namespace vesselq {

inline constexpr int kSchemaVersion = 1;

struct PipelineConfig {
  DetectorConfig detector;
  int max_search_radius = kDefaultMaxSearchRadius;
  std::size_t spur_min_length = 3;
  unsigned threads = 1;

  void validate() const;
};

/// Everything the detector produced for one mask.
struct DetectionResult {
  Skeleton skeleton;
  VesselGraph graph;  // spurs already pruned
  std::vector<RadiusProfile> profiles;
  std::vector<StenosisFinding> findings;
};

/// thin -> trace -> prune -> profile -> detect_all. Branch profiling runs on
/// `config.threads` workers; the result does not depend on the thread count.
DetectionResult run_detection(const BinaryMask& mask, const PipelineConfig& config = {});

/// Calls fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

std::string findings_json(const DetectionResult& result, int width, int height,
                          const std::string& image_name);
std::string graph_json(const VesselGraph& graph);

struct EvalOptions {
  PipelineConfig pipeline;
  double gamma = kDefaultMatchGamma;
  std::uint8_t threshold = 128;
  /// Workers over images; each image is processed single-threaded.
  unsigned threads = 1;
};

struct ImageEval {
  std::string name;
  std::size_t predicted = 0;
  std::size_t labeled = 0;
  MatchResult match;
  std::vector<StenosisFinding> findings;
};

struct EvalReport {
  std::vector<ImageEval> images;  // annotation order
  std::vector<std::string> missing;
  std::vector<std::pair<std::string, std::string>> failed;  // name, reason
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  DetectionRates pooled;
  std::optional<CountErrors> counts;

  bool complete() const { return missing.empty() && failed.empty(); }
};

/// Resolves `<dir>/<name>`, then `<dir>/<name>.png`, then `<dir>/<name>.pgm`.
std::optional<std::string> resolve_mask_path(const std::string& dir, const std::string& name);

/// Detects stenoses on every annotated mask in `pred_dir` and scores them.
EvalReport evaluate_directory(const std::string& pred_dir, const Annotations& annotations,
                              const EvalOptions& options);
/// Scores precomputed findings against labels.
EvalReport evaluate_findings(const std::vector<std::pair<std::string, std::vector<StenosisFinding>>>& predictions,
                             const Annotations& annotations, double gamma);

std::string eval_report_json(const EvalReport& report);

struct MetricsOptions {
  std::uint8_t threshold = 128;
  /// Read the prediction's intensities as probabilities for BCE.
  bool prob = false;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

std::string metrics_report_json(const GrayImage& pred, const GrayImage& truth,
                                const MetricsOptions& options);

}  // namespace vesselq
