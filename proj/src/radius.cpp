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

#include "vesselq/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "vesselq/error.hpp"

namespace vesselq {

double RadiusProfile::mean_radius() const {
  if (entries.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : entries) sum += e.radius;
  return sum / static_cast<double>(entries.size());
}

CircleSearch::CircleSearch(int max_search_radius) {
  if (max_search_radius < 1) {
    throw Error(ErrorCode::kInvalidInput, "max search radius must be >= 1");
  }
  rings_.resize(static_cast<std::size_t>(max_search_radius));
  for (int r = 1; r <= max_search_radius; ++r) {
    const int samples = 8 * static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / 8.0));
    auto& ring = rings_[r - 1];
    for (int k = 0; k < samples; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / samples;
      const std::array<int, 2> offset{static_cast<int>(std::lround(r * std::cos(angle))),
                                      static_cast<int>(std::lround(r * std::sin(angle)))};
      if (std::find(ring.begin(), ring.end(), offset) == ring.end()) ring.push_back(offset);
    }
  }
}

int CircleSearch::radius_at(const BinaryMask& mask, PixelPoint center) const {
  if (!mask.get(center.x, center.y)) {
    throw Error(ErrorCode::kInvalidInput,
                "radius center (" + std::to_string(center.x) + ", " +
                    std::to_string(center.y) + ") is not foreground");
  }
  const int max_r = max_search_radius();
  for (int r = 1; r <= max_r; ++r) {
    for (const auto& [dx, dy] : rings_[r - 1]) {
      if (!mask.get(center.x + dx, center.y + dy)) return r;
    }
  }
  return max_r;
}

int inscribed_radius(const BinaryMask& mask, PixelPoint center, int max_search_radius) {
  return CircleSearch(max_search_radius).radius_at(mask, center);
}

RadiusProfile profile_branch(const BinaryMask& mask, const VesselGraph& graph,
                             std::size_t branch_id, const CircleSearch& search) {
  if (branch_id >= graph.branches.size()) {
    throw Error(ErrorCode::kOutOfRange, "branch index " + std::to_string(branch_id) +
                                            " out of range (" +
                                            std::to_string(graph.branches.size()) + " branches)");
  }
  RadiusProfile profile{branch_id, {}};
  const auto& branch = graph.branches[branch_id];
  profile.entries.reserve(branch.size());
  for (PixelPoint p : branch) profile.entries.push_back({p, search.radius_at(mask, p)});
  return profile;
}

RadiusProfile profile_branch(const BinaryMask& mask, const VesselGraph& graph,
                             std::size_t branch_id, int max_search_radius) {
  return profile_branch(mask, graph, branch_id, CircleSearch(max_search_radius));
}

namespace {

// 1-D squared distance transform of a sampled function (lower envelope of
// parabolas rooted at each sample).
void envelope_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v,
                 std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = 0;
  // Skip leading infinite samples; they never lie on the envelope.
  int first = 0;
  while (first < n && f[first] == kInf) ++first;
  if (first == n) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

DistanceMap exact_distance_transform(const BinaryMask& mask) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Pad by one background pixel on every side so the border acts as background.
  const int w = mask.width() + 2;
  const int h = mask.height() + 2;
  std::vector<double> grid(static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) grid[static_cast<std::size_t>(y + 1) * w + (x + 1)] = kInf;
    }
  }

  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> f(std::max(w, h));
  std::vector<double> d(std::max(w, h));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
    envelope_1d(std::span(f).first(h), std::span(d).first(h), v, z);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    std::span<double> row(grid.data() + static_cast<std::size_t>(y) * w, w);
    std::copy(row.begin(), row.end(), f.begin());
    envelope_1d(std::span(f).first(w), row, v, z);
  }

  DistanceMap out{mask.width(), mask.height(), {}};
  out.values.resize(mask.size());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      out.values[static_cast<std::size_t>(y) * mask.width() + x] =
          std::sqrt(grid[static_cast<std::size_t>(y + 1) * w + (x + 1)]);
    }
  }
  return out;
}

std::string profiles_csv(std::span<const RadiusProfile> profiles) {
  std::ostringstream out;
  out << "branch_id,index,x,y,radius\n";
  for (const auto& profile : profiles) {
    for (std::size_t i = 0; i < profile.entries.size(); ++i) {
      const auto& e = profile.entries[i];
      out << profile.branch_id << ',' << i << ',' << e.point.x << ',' << e.point.y << ','
          << e.radius << '\n';
    }
  }
  return out.str();
}

}  // namespace vesselq
