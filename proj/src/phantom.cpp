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

#include "vesselq/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "vesselq/error.hpp"
#include "vesselq/stenosis.hpp"

namespace vesselq {

namespace {

constexpr double kSampleStep = 0.25;
constexpr std::array<double, 4> kSeverityLevels = {0.3, 0.5, 0.6, 0.8};

double segment_length(Point2 a, Point2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidSpec, message);
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

double bump(double u) {
  if (std::abs(u) > 1.0) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * u));
}

double TubeSpec::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += segment_length(path[i - 1], path[i]);
  return total;
}

Point2 TubeSpec::point_at(double s) const {
  if (path.empty()) return {};
  double walked = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double len = segment_length(path[i - 1], path[i]);
    if (s <= walked + len || i + 1 == path.size()) {
      const double t = len > 0.0 ? std::clamp((s - walked) / len, 0.0, 1.0) : 0.0;
      return {path[i - 1].x + t * (path[i].x - path[i - 1].x),
              path[i - 1].y + t * (path[i].y - path[i - 1].y)};
    }
    walked += len;
  }
  return path.back();
}

double TubeSpec::radius(double s) const {
  double r = nominal_radius(s);
  for (const auto& st : stenoses) r *= 1.0 - st.severity * bump((s - st.position) / st.width);
  return r;
}

void PhantomSpec::validate() const {
  if (width < 1 || height < 1) invalid("phantom dimensions must be positive");
  for (std::size_t t = 0; t < tubes.size(); ++t) {
    const auto& tube = tubes[t];
    const std::string tag = "tube " + std::to_string(t) + ": ";
    if (tube.path.size() < 2) invalid(tag + "path needs at least two points");
    if (!(tube.base_radius > 0.0)) invalid(tag + "base_radius must be > 0");
    for (std::size_t i = 1; i < tube.path.size(); ++i) {
      if (!(segment_length(tube.path[i - 1], tube.path[i]) > 0.0)) {
        invalid(tag + "path has repeated consecutive points");
      }
    }
    for (const auto& p : tube.path) {
      const double m = tube.base_radius;
      if (!(p.x >= m && p.y >= m && p.x <= width - 1 - m && p.y <= height - 1 - m)) {
        invalid(tag + "path point lies closer than base_radius to the border");
      }
    }
    const double length = tube.length();
    if (!(tube.nominal_radius(length) > 0.0)) invalid(tag + "taper drives the radius to zero");
    for (const auto& st : tube.stenoses) {
      if (!(st.severity > 0.0 && st.severity < 1.0)) invalid(tag + "severity must lie in (0, 1)");
      if (!(st.width >= 3.0)) invalid(tag + "stenosis width must be >= 3 px");
      if (!(st.position >= 0.0 && st.position <= length)) {
        invalid(tag + "stenosis position lies off the path");
      }
    }
  }
}

PhantomTruth generate(const PhantomSpec& spec) {
  spec.validate();
  PhantomTruth truth{BinaryMask(spec.width, spec.height), {}, {}};
  BinaryMask& mask = truth.mask;

  for (std::size_t t = 0; t < spec.tubes.size(); ++t) {
    const auto& tube = spec.tubes[t];
    const double length = tube.length();
    const auto steps = static_cast<std::size_t>(std::ceil(length / kSampleStep));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double s = std::min(length, k * kSampleStep);
      const Point2 c = tube.point_at(s);
      const double r = tube.radius(s);
      const int x0 = std::max(0, static_cast<int>(std::floor(c.x - r)));
      const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(c.x + r)));
      const int y0 = std::max(0, static_cast<int>(std::floor(c.y - r)));
      const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(c.y + r)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double dx = x - c.x;
          const double dy = y - c.y;
          if (dx * dx + dy * dy <= r * r) mask.set(x, y, true);
        }
      }
      // The pixel holding the center is always inside the tube.
      const int cx = static_cast<int>(std::lround(c.x));
      const int cy = static_cast<int>(std::lround(c.y));
      if (mask.contains(cx, cy)) mask.set(cx, cy, true);
    }

    TubeTruth tt;
    const auto samples = static_cast<std::size_t>(std::floor(length));
    for (std::size_t k = 0; k <= samples; ++k) {
      const double s = static_cast<double>(k);
      tt.centerline.push_back(tube.point_at(s));
      tt.radius.push_back(tube.radius(s));
    }
    truth.tubes.push_back(std::move(tt));

    for (const auto& st : tube.stenoses) {
      const Point2 c = tube.point_at(st.position);
      const double r_c = tube.radius(st.position);
      const double r_s = tube.radius(std::max(0.0, st.position - st.width));
      const double r_e = tube.radius(std::min(length, st.position + st.width));
      truth.stenoses.push_back({{static_cast<int>(std::lround(c.x)), static_cast<int>(std::lround(c.y))},
                                st.severity,
                                1.0 - r_c / ((r_s + r_e) / 2.0),
                                t,
                                st.position});
    }
  }
  return truth;
}

namespace {

// Longest step from `start` along `dir` that keeps the point `margin` px
// inside the raster.
double room_along(Point2 start, Point2 dir, int width, int height, double margin) {
  double t = std::numeric_limits<double>::infinity();
  auto limit = [&t](double pos, double d, double lo, double hi) {
    if (d > 1e-12) t = std::min(t, (hi - pos) / d);
    if (d < -1e-12) t = std::min(t, (lo - pos) / d);
  };
  limit(start.x, dir.x, margin, width - 1 - margin);
  limit(start.y, dir.y, margin, height - 1 - margin);
  return std::max(0.0, t);
}

void add_stenosis(TubeSpec& tube, Rng& rng, std::size_t level_index) {
  const double length = tube.length();
  const double width = std::max(3.0, tube.base_radius * rng.uniform(1.5, 2.5));
  if (length < 4.0 * width + 1.0) return;
  const double pos = rng.uniform(2.0 * width, length - 2.0 * width);
  tube.stenoses.push_back({pos, kSeverityLevels[level_index % kSeverityLevels.size()], width});
}

}  // namespace

PhantomSpec tree_spec(int width, int height, std::uint64_t seed, int depth) {
  if (depth < 1) invalid("tree depth must be >= 1");
  if (width < 64 || height < 64) invalid("tree phantoms need at least 64x64 pixels");
  Rng rng(seed);
  PhantomSpec spec{width, height, seed, {}};
  const double size = std::min(width, height);

  struct Node {
    Point2 start;
    double angle;
    double radius;
    double length;
    int level;
  };
  std::vector<Node> frontier;
  frontier.push_back({{rng.uniform(0.12, 0.25) * width, rng.uniform(0.35, 0.65) * height},
                      deg2rad(rng.uniform(-25.0, 25.0)),
                      std::max(2.5, size * rng.uniform(1.0 / 80.0, 1.0 / 60.0)),
                      size * rng.uniform(0.28, 0.36),
                      1});

  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const Node node = frontier[i];
    const Point2 dir{std::cos(node.angle), std::sin(node.angle)};
    const double margin = node.radius + 2.0;
    const double room = room_along(node.start, dir, width, height, margin);
    const double len = std::max(0.5, std::min(node.length, room));
    const Point2 end{node.start.x + dir.x * len, node.start.y + dir.y * len};

    TubeSpec tube;
    tube.path = {node.start, end};
    tube.base_radius = node.radius;
    if (rng.uniform(0.0, 1.0) < 0.6) {
      add_stenosis(tube, rng, static_cast<std::size_t>(rng.integer(0, 3)));
    }
    spec.tubes.push_back(std::move(tube));

    if (node.level == depth) continue;
    for (int side : {-1, 1}) {
      const double child_radius = std::max(std::min(2.5, node.radius), node.radius * rng.uniform(0.7, 0.9));
      const double child_length = node.length * rng.uniform(0.7, 0.85);
      double best_angle = node.angle + side * deg2rad(45.0);
      double best_room = -1.0;
      for (int attempt = 0; attempt < 16; ++attempt) {
        const double a = node.angle + side * deg2rad(rng.uniform(20.0, 70.0));
        const double r = room_along(end, {std::cos(a), std::sin(a)}, width, height, child_radius + 2.0);
        if (r > best_room) {
          best_room = r;
          best_angle = a;
        }
        if (r >= child_length) break;
        side = -side;
      }
      frontier.push_back({end, best_angle, child_radius, child_length, node.level + 1});
    }
  }
  return spec;
}

PhantomTruth generate_tree(int width, int height, std::uint64_t seed, int depth) {
  return generate(tree_spec(width, height, seed, depth));
}

namespace {

std::vector<Point2> wavy_path(int width, int height, Rng& rng, double margin, bool vertical) {
  const double along = vertical ? height : width;
  const double across = vertical ? width : height;
  const double amplitude = rng.uniform(0.0, 0.12) * across;
  const double period = rng.uniform(0.8, 1.6) * along;
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double center = across / 2.0 + rng.uniform(-0.1, 0.1) * across;
  std::vector<Point2> path;
  const double lo = margin;
  const double hi = along - 1 - margin;
  const int vertices = 24;
  for (int i = 0; i <= vertices; ++i) {
    const double u = lo + (hi - lo) * i / vertices;
    const double v = center + amplitude * std::sin(2.0 * std::numbers::pi * u / period + phase);
    path.push_back(vertical ? Point2{v, u} : Point2{u, v});
  }
  return path;
}

}  // namespace

PhantomSpec random_tube_spec(int width, int height, std::uint64_t seed) {
  if (width < 64 || height < 64) invalid("tube phantoms need at least 64x64 pixels");
  Rng rng(seed);
  PhantomSpec spec{width, height, seed, {}};
  TubeSpec tube;
  tube.base_radius = rng.uniform(9.0, 12.0);
  const double margin = tube.base_radius + 12.0;
  tube.path = wavy_path(width, height, rng, margin, rng.uniform(0.0, 1.0) < 0.5);
  const double length = tube.length();
  tube.taper = rng.uniform(0.0, 0.002);

  // Split the usable arclength into equal slots, one stenosis per slot.
  const double end_margin = 3.0 * tube.base_radius;
  const double usable = length - 2.0 * end_margin;
  const double max_width = 2.5 * tube.base_radius;
  const int fit = static_cast<int>(usable / (4.0 * max_width + 8.0));
  const int count = std::clamp(rng.integer(1, 3), 1, std::max(1, fit));
  const double slot = usable / count;
  for (int i = 0; i < count; ++i) {
    const double w = tube.base_radius * rng.uniform(1.5, 2.5);
    const double jitter = std::max(0.0, slot / 2.0 - 2.0 * w - 4.0);
    const double pos = end_margin + slot * (i + 0.5) + rng.uniform(-jitter, jitter);
    tube.stenoses.push_back({pos, kSeverityLevels[(seed + i) % kSeverityLevels.size()], w});
  }
  spec.tubes.push_back(std::move(tube));
  spec.validate();
  return spec;
}

PhantomSpec taper_tube_spec(int width, int height, std::uint64_t seed) {
  if (width < 64 || height < 64) invalid("tube phantoms need at least 64x64 pixels");
  Rng rng(seed);
  PhantomSpec spec{width, height, seed, {}};
  TubeSpec tube;
  tube.base_radius = rng.uniform(7.0, 10.0);
  const double end_radius = rng.uniform(2.5, 4.0);
  const double margin = tube.base_radius + 4.0;
  const bool vertical = rng.uniform(0.0, 1.0) < 0.5;
  const double across = std::round((vertical ? width : height) / 2.0);
  const double along = vertical ? height : width;
  const Point2 a = vertical ? Point2{across, margin} : Point2{margin, across};
  const Point2 b = vertical ? Point2{across, along - 1 - margin} : Point2{along - 1 - margin, across};
  tube.path = {a, b};
  tube.taper = (tube.base_radius - end_radius) / tube.length();
  spec.tubes.push_back(std::move(tube));
  spec.validate();
  return spec;
}

PhantomSpec default_tube_spec() {
  PhantomSpec spec{256, 128, 0, {}};
  TubeSpec tube;
  tube.path = {{20.0, 64.0}, {235.0, 64.0}};
  tube.base_radius = 8.0;
  tube.stenoses.push_back({tube.length() / 2.0, 0.6, 16.0});
  spec.tubes.push_back(std::move(tube));
  return spec;
}

std::string spec_to_json(const PhantomSpec& spec) {
  nlohmann::ordered_json doc;
  doc["width"] = spec.width;
  doc["height"] = spec.height;
  doc["seed"] = spec.seed;
  auto tubes = nlohmann::ordered_json::array();
  for (const auto& tube : spec.tubes) {
    nlohmann::ordered_json t;
    auto path = nlohmann::ordered_json::array();
    for (const auto& p : tube.path) path.push_back({p.x, p.y});
    t["path"] = std::move(path);
    t["base_radius"] = tube.base_radius;
    t["taper"] = tube.taper;
    auto stenoses = nlohmann::ordered_json::array();
    for (const auto& st : tube.stenoses) {
      stenoses.push_back({{"position", st.position}, {"severity", st.severity}, {"width", st.width}});
    }
    t["stenoses"] = std::move(stenoses);
    tubes.push_back(std::move(t));
  }
  doc["tubes"] = std::move(tubes);
  return doc.dump(2) + "\n";
}

PhantomSpec spec_from_json(const std::string& json_text) {
  using nlohmann::json;
  PhantomSpec spec;
  try {
    const json doc = json::parse(json_text);
    spec.width = doc.at("width").get<int>();
    spec.height = doc.at("height").get<int>();
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& t : doc.at("tubes")) {
      TubeSpec tube;
      for (const auto& p : t.at("path")) tube.path.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      tube.base_radius = t.at("base_radius").get<double>();
      tube.taper = t.value("taper", 0.0);
      if (t.contains("stenoses")) {
        for (const auto& st : t.at("stenoses")) {
          tube.stenoses.push_back({st.at("position").get<double>(), st.at("severity").get<double>(),
                                   st.at("width").get<double>()});
        }
      }
      spec.tubes.push_back(std::move(tube));
    }
  } catch (const json::exception& e) {
    invalid(std::string("phantom spec JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

namespace {

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

}  // namespace

std::string truth_to_json(const PhantomTruth& truth) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["width"] = truth.mask.width();
  doc["height"] = truth.mask.height();
  auto stenoses = nlohmann::ordered_json::array();
  for (const auto& st : truth.stenoses) {
    nlohmann::ordered_json item{{"x", st.point.x},
                                {"y", st.point.y},
                                {"tube", st.tube},
                                {"position", round_to(st.position, 1e3)},
                                {"severity", st.severity},
                                {"eta", round_to(st.eta, 1e4)}};
    const auto g = grade(std::clamp(st.eta, 0.0, 0.999999));
    item["grade"] = g ? nlohmann::ordered_json(std::string(to_string(*g))) : nlohmann::ordered_json();
    stenoses.push_back(std::move(item));
  }
  doc["stenoses"] = std::move(stenoses);
  auto tubes = nlohmann::ordered_json::array();
  for (const auto& tube : truth.tubes) {
    auto centerline = nlohmann::ordered_json::array();
    for (const auto& p : tube.centerline) centerline.push_back({round_to(p.x, 1e3), round_to(p.y, 1e3)});
    auto radius = nlohmann::ordered_json::array();
    for (double r : tube.radius) radius.push_back(round_to(r, 1e3));
    tubes.push_back({{"centerline", std::move(centerline)}, {"radius", std::move(radius)}});
  }
  doc["tubes"] = std::move(tubes);
  return doc.dump(2) + "\n";
}

Annotations truth_annotations(const PhantomTruth& truth, const std::string& image_name) {
  Annotations out;
  auto& list = out[image_name];
  for (const auto& st : truth.stenoses) {
    list.push_back({st.point, grade(std::clamp(st.eta, 0.0, 0.999999)), st.eta});
  }
  return out;
}

}  // namespace vesselq
