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

#include "vesselq/skeleton.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace vesselq {

namespace {

// Neighbor bit k-1 holds x_k, counter-clockwise from east (y grows downward).
constexpr std::array<std::array<int, 2>, 8> kNeighborOffsets = {{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

struct ThinningTables {
  std::array<bool, 256> first{};
  std::array<bool, 256> second{};
};

constexpr ThinningTables build_tables() {
  ThinningTables t;
  for (int code = 0; code < 256; ++code) {
    bool x[10] = {};
    for (int k = 1; k <= 8; ++k) x[k] = (code >> (k - 1)) & 1;
    x[9] = x[1];

    int crossings = 0;
    for (int i = 1; i <= 4; ++i) crossings += !x[2 * i - 1] && (x[2 * i] || x[2 * i + 1]);
    int n1 = 0;
    int n2 = 0;
    for (int k = 1; k <= 4; ++k) {
      n1 += x[2 * k - 1] || x[2 * k];
      n2 += x[2 * k] || x[2 * k + 1];
    }
    const int n = n1 < n2 ? n1 : n2;
    const bool base = crossings == 1 && n >= 2 && n <= 3;
    t.first[code] = base && !((x[2] || x[3] || !x[8]) && x[1]);
    t.second[code] = base && !((x[6] || x[7] || !x[4]) && x[5]);
  }
  return t;
}

constexpr ThinningTables kTables = build_tables();

}  // namespace

Skeleton thin(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const int stride = w + 2;
  // One pixel of background padding removes bounds checks.
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(stride) * (h + 2), 0);
  std::vector<int> alive;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const int idx = (y + 1) * stride + (x + 1);
      grid[idx] = 1;
      alive.push_back(idx);
    }
  }

  std::array<int, 8> offsets{};
  for (int k = 0; k < 8; ++k) offsets[k] = kNeighborOffsets[k][1] * stride + kNeighborOffsets[k][0];

  std::vector<int> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto* table : {&kTables.first, &kTables.second}) {
      doomed.clear();
      for (int idx : alive) {
        int code = 0;
        for (int k = 0; k < 8; ++k) code |= grid[idx + offsets[k]] << k;
        if ((*table)[code]) doomed.push_back(idx);
      }
      if (doomed.empty()) continue;
      changed = true;
      for (int idx : doomed) grid[idx] = 0;
      std::erase_if(alive, [&grid](int idx) { return grid[idx] == 0; });
    }
  }

  BinaryMask out(w, h);
  for (int idx : alive) out.set(idx % stride - 1, idx / stride - 1, true);
  return Skeleton{std::move(out)};
}

int neighbor_count(const BinaryMask& skeleton, PixelPoint p) {
  int n = 0;
  for (const auto& [dx, dy] : kNeighborOffsets) n += skeleton.get(p.x + dx, p.y + dy);
  return n;
}

PointClasses classify_points(const Skeleton& skel) {
  PointClasses out;
  const BinaryMask& m = skel.mask;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      const int n = neighbor_count(m, {x, y});
      if (n >= 3) {
        out.branch_points.push_back({x, y});
      } else if (n <= 1) {
        out.endpoints.push_back({x, y});
      }
    }
  }
  return out;
}

namespace {

// Row-major pixel labels: 0 background, 1 path pixel, 2 junction pixel.
enum : std::uint8_t { kEmpty = 0, kPath = 1, kJunction = 2 };

}  // namespace

VesselGraph trace_branches(const Skeleton& skel) {
  const BinaryMask& m = skel.mask;
  const int w = m.width();
  const int h = m.height();
  auto index = [w](PixelPoint p) { return static_cast<std::size_t>(p.y) * w + p.x; };

  VesselGraph graph;
  PointClasses classes = classify_points(skel);
  graph.branch_points = classes.branch_points;
  graph.endpoints = std::move(classes.endpoints);

  std::vector<std::uint8_t> label(m.size(), kEmpty);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (m.at(x, y)) label[index({x, y})] = kPath;
    }
  }
  for (PixelPoint p : graph.branch_points) label[index(p)] = kJunction;

  auto neighbors_with = [&](PixelPoint p, std::uint8_t kind) {
    std::vector<PixelPoint> out;
    for (const auto& [dx, dy] : kNeighborOffsets) {
      const PixelPoint q{p.x + dx, p.y + dy};
      if (m.contains(q) && label[index(q)] == kind) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<std::uint8_t> seen(m.size(), 0);

  // Junction clusters.
  for (PixelPoint start : graph.branch_points) {
    if (seen[index(start)]) continue;
    std::vector<PixelPoint> cluster{start};
    seen[index(start)] = 1;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      for (PixelPoint q : neighbors_with(cluster[i], kJunction)) {
        if (seen[index(q)]) continue;
        seen[index(q)] = 1;
        cluster.push_back(q);
      }
    }
    std::sort(cluster.begin(), cluster.end());
    graph.junctions.push_back(std::move(cluster));
  }

  // Path components: every path pixel has at most two path neighbors, so each
  // component is a simple path or a simple cycle.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const PixelPoint seed{x, y};
      if (label[index(seed)] != kPath || seen[index(seed)]) continue;

      std::vector<PixelPoint> component{seed};
      std::vector<std::uint8_t>& mark = seen;
      mark[index(seed)] = 2;
      for (std::size_t i = 0; i < component.size(); ++i) {
        for (PixelPoint q : neighbors_with(component[i], kPath)) {
          if (mark[index(q)]) continue;
          mark[index(q)] = 2;
          component.push_back(q);
        }
      }

      std::vector<PixelPoint> terminals;
      for (PixelPoint p : component) {
        if (neighbors_with(p, kPath).size() <= 1) terminals.push_back(p);
      }
      const bool loop = terminals.empty();
      const PixelPoint first = loop ? *std::min_element(component.begin(), component.end())
                                    : *std::min_element(terminals.begin(), terminals.end());

      std::vector<PixelPoint> path{first};
      mark[index(first)] = 1;
      while (true) {
        const PixelPoint cur = path.back();
        bool advanced = false;
        for (PixelPoint q : neighbors_with(cur, kPath)) {
          if (mark[index(q)] == 2) {
            mark[index(q)] = 1;
            path.push_back(q);
            advanced = true;
            break;
          }
        }
        if (!advanced) break;
      }
      graph.branches.push_back(std::move(path));
      graph.closed.push_back(loop && graph.branches.back().size() >= 3);
    }
  }
  return graph;
}

VesselGraph prune_spurs(const VesselGraph& graph, std::size_t min_length) {
  VesselGraph out;
  out.junctions = graph.junctions;
  out.branch_points = graph.branch_points;
  out.endpoints = graph.endpoints;
  auto is_endpoint = [&graph](PixelPoint p) {
    return std::binary_search(graph.endpoints.begin(), graph.endpoints.end(), p);
  };
  for (std::size_t i = 0; i < graph.branches.size(); ++i) {
    const auto& branch = graph.branches[i];
    const bool loop = graph.closed[i];
    const bool spur = !loop && branch.size() < min_length &&
                      (is_endpoint(branch.front()) || is_endpoint(branch.back()));
    if (spur) continue;
    out.branches.push_back(branch);
    out.closed.push_back(loop);
  }
  return out;
}

}  // namespace vesselq
