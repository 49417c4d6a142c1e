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

#include "vesselq/stenosis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vesselq/error.hpp"

namespace vesselq {

std::string_view to_string(Grade grade) {
  switch (grade) {
    case Grade::kMild:
      return "mild";
    case Grade::kModerate:
      return "moderate";
    case Grade::kSevere:
      return "severe";
  }
  return "unknown";
}

std::optional<Grade> parse_grade(std::string_view name) {
  if (name == "mild") return Grade::kMild;
  if (name == "moderate") return Grade::kModerate;
  if (name == "severe") return Grade::kSevere;
  return std::nullopt;
}

std::optional<Grade> grade(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "severity " + std::to_string(eta) + " outside [0, 1)");
  }
  if (eta >= 0.75) return Grade::kSevere;
  if (eta >= 0.50) return Grade::kModerate;
  if (eta >= 0.25) return Grade::kMild;
  return std::nullopt;
}

void DetectorConfig::validate() const {
  if (!(min_mean_diameter >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "min mean diameter must be >= 0");
  }
  if (!(cluster_threshold_tau >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "cluster threshold must be >= 0");
  }
  if (!(report_floor >= 0.0 && report_floor < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "report floor must lie in [0, 1)");
  }
  if (median_window < 1 || median_window % 2 == 0) {
    throw Error(ErrorCode::kInvalidInput, "median window must be a positive odd number");
  }
}

double severity(int r_c, int r_s, int r_e) {
  return 1.0 - static_cast<double>(r_c) / ((r_s + r_e) / 2.0);
}

std::vector<StenosisFinding> detect_branch(const RadiusProfile& profile,
                                           const DetectorConfig& config) {
  enum class Phase { kIdle, kDescending, kRecovering };

  std::vector<StenosisFinding> out;
  const auto& e = profile.entries;
  Phase phase = Phase::kIdle;
  std::size_t start = 0;
  std::size_t lowest = 0;
  std::size_t lowest_end = 0;  // last index of the minimum run

  auto emit = [&](std::size_t end) {
    const int r_s = e[start].radius;
    const int r_c = e[lowest].radius;
    const int r_e = e[end].radius;
    const double eta = severity(r_c, r_s, r_e);
    if (eta < config.report_floor) return;
    const std::size_t at = lowest + (lowest_end - lowest) / 2;
    out.push_back({e[at].point, r_c, r_s, r_e, eta, grade(eta), profile.branch_id, at});
  };

  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const int cur = e[i].radius;
    const int next = e[i + 1].radius;
    switch (phase) {
      case Phase::kIdle:
        if (cur > next) {
          phase = Phase::kDescending;
          start = i;
          lowest = i + 1;
        }
        break;
      case Phase::kDescending:
        if (cur > next) {
          lowest = i + 1;
        } else if (cur < next) {
          phase = Phase::kRecovering;
          lowest_end = i;
        }
        break;
      case Phase::kRecovering:
        if (cur > next) {
          emit(i);
          phase = Phase::kDescending;
          start = i;
          lowest = i + 1;
        }
        break;
    }
  }
  if (phase == Phase::kRecovering) emit(e.size() - 1);
  return out;
}

std::vector<StenosisFinding> cluster_findings(std::vector<StenosisFinding> findings,
                                              double tau) {
  std::sort(findings.begin(), findings.end(), [](const auto& a, const auto& b) {
    if (a.eta != b.eta) return a.eta > b.eta;
    if (a.location != b.location) return a.location < b.location;
    return a.branch_id < b.branch_id;
  });
  std::vector<StenosisFinding> kept;
  for (auto& f : findings) {
    const bool crowded = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return distance(k.location, f.location) < tau;
    });
    if (!crowded) kept.push_back(std::move(f));
  }
  return kept;
}

RadiusProfile median_filtered(const RadiusProfile& profile, int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidInput, "median window must be a positive odd number");
  }
  RadiusProfile out = profile;
  const auto& e = profile.entries;
  const std::size_t n = e.size();
  const auto reach = static_cast<std::size_t>(window / 2);
  std::vector<int> buf;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = std::min({reach, i, n - 1 - i});
    buf.clear();
    for (std::size_t j = i - h; j <= i + h; ++j) buf.push_back(e[j].radius);
    std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(h), buf.end());
    out.entries[i].radius = buf[h];
  }
  return out;
}

std::vector<StenosisFinding> detect_all(const BinaryMask& mask, const VesselGraph& graph,
                                        std::span<const RadiusProfile> profiles,
                                        const DetectorConfig& config) {
  config.validate();
  std::vector<StenosisFinding> pooled;
  for (const auto& profile : profiles) {
    if (profile.branch_id >= graph.branches.size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "profile references missing branch " + std::to_string(profile.branch_id));
    }
    if (profile.entries.empty()) continue;
    if (2.0 * profile.mean_radius() < config.min_mean_diameter) continue;
    for (auto& f : detect_branch(median_filtered(profile, config.median_window), config)) {
      if (!mask.contains(f.location)) {
        throw Error(ErrorCode::kInvalidInput, "finding lies outside the mask");
      }
      pooled.push_back(std::move(f));
    }
  }
  return cluster_findings(std::move(pooled), config.cluster_threshold_tau);
}

}  // namespace vesselq
