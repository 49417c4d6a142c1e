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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "vesselq/error.hpp"
#include "vesselq/phantom.hpp"
#include "vesselq/radius.hpp"

namespace vesselq {
namespace {

PhantomSpec straight_tube(double radius, std::vector<StenosisSpec> stenoses = {}) {
  PhantomSpec spec{200, 80, 0, {}};
  TubeSpec tube;
  tube.path = {{20.0, 40.0}, {180.0, 40.0}};
  tube.base_radius = radius;
  tube.stenoses = std::move(stenoses);
  spec.tubes.push_back(std::move(tube));
  return spec;
}

ErrorCode spec_error(const PhantomSpec& spec) {
  try {
    spec.validate();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: no error
}

/// The transform measures to the nearest background pixel center; the tube
/// wall sits half a pixel closer.
double boundary_distance(const DistanceMap& edt, int x, int y) { return edt.at(x, y) - 0.5; }

TEST(Bump, RaisedCosineShape) {
  EXPECT_DOUBLE_EQ(bump(0.0), 1.0);
  EXPECT_NEAR(bump(0.5), 0.5, 1e-15);
  EXPECT_NEAR(bump(1.0), 0.0, 1e-15);
  EXPECT_EQ(bump(1.5), 0.0);
  EXPECT_EQ(bump(-2.0), 0.0);
  for (double u = 0.0; u < 1.0; u += 0.01) {
    EXPECT_DOUBLE_EQ(bump(u), bump(-u));
    EXPECT_GE(bump(u), bump(u + 0.01) - 1e-15);
  }
}

TEST(Generate, StraightTubeHasConstantAxialDistance) {
  const PhantomTruth t = generate(straight_tube(5.0));
  const DistanceMap edt = exact_distance_transform(t.mask);
  for (int x = 35; x <= 165; ++x) EXPECT_NEAR(boundary_distance(edt, x, 40), 5.0, 0.5 + 1e-9) << x;
}

TEST(Generate, StenosisNarrowsTheAxialDistance) {
  const PhantomTruth t = generate(straight_tube(5.0, {{80.0, 0.6, 6.0}}));
  const DistanceMap edt = exact_distance_transform(t.mask);
  double lowest = 1e9;
  int at = -1;
  for (int x = 35; x <= 165; ++x) {
    if (boundary_distance(edt, x, 40) < lowest) {
      lowest = boundary_distance(edt, x, 40);
      at = x;
    }
  }
  EXPECT_NEAR(lowest, 2.0, 0.5 + 1e-9);
  EXPECT_NEAR(at, 100, 3);
  ASSERT_EQ(t.stenoses.size(), 1u);
  EXPECT_EQ(t.stenoses[0].point, (PixelPoint{100, 40}));
}

TEST(Generate, TruthRadiusAtTheDipIsScaledBySeverity) {
  const PhantomSpec spec = straight_tube(6.0, {{50.0, 0.3, 5.0}, {120.0, 0.8, 8.0}});
  const PhantomTruth t = generate(spec);
  const auto& tube = spec.tubes[0];
  for (const auto& st : tube.stenoses) {
    EXPECT_NEAR(tube.radius(st.position), (1.0 - st.severity) * tube.nominal_radius(st.position),
                1e-12);
  }
  for (const auto& st : t.stenoses) {
    EXPECT_TRUE(t.mask.at(st.point));
    const double rc = tube.radius(st.position);
    const double rs = tube.radius(st.position - tube.stenoses[&st - t.stenoses.data()].width);
    const double re = tube.radius(st.position + tube.stenoses[&st - t.stenoses.data()].width);
    EXPECT_NEAR(st.eta, 1.0 - rc / ((rs + re) / 2.0), 1e-12);
    EXPECT_NEAR(st.eta, st.severity, 1e-9);  // shoulders sit at full radius
  }
}

TEST(Generate, TruthCenterlineIsSampledPerPixel) {
  const PhantomTruth t = generate(straight_tube(4.0));
  ASSERT_EQ(t.tubes.size(), 1u);
  EXPECT_EQ(t.tubes[0].centerline.size(), 161u);
  EXPECT_EQ(t.tubes[0].radius.size(), 161u);
  EXPECT_DOUBLE_EQ(t.tubes[0].centerline[10].x, 30.0);
}

TEST(Generate, IsDeterministic) {
  const PhantomSpec spec = random_tube_spec(320, 320, 42);
  EXPECT_EQ(generate(spec).mask, generate(spec).mask);
  EXPECT_EQ(spec_to_json(random_tube_spec(320, 320, 42)), spec_to_json(spec));
  EXPECT_EQ(generate_tree(300, 300, 9, 3).mask, generate_tree(300, 300, 9, 3).mask);
}

TEST(Generate, MirrorSymmetricSpecGivesSymmetricMask) {
  PhantomSpec spec{240, 128, 0, {}};
  for (int i = 0; i < 4; ++i) {
    TubeSpec tube;
    tube.path = {{20.0 + 10 * i, 63.5}, {120.0 + 20 * i, 63.5}};
    tube.base_radius = 3.0 + i;
    tube.stenoses.push_back({30.0, 0.2 * (i + 1), 4.0 + i});
    spec.tubes.push_back(std::move(tube));
  }
  const BinaryMask m = generate(spec).mask;
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 240; ++x) ASSERT_EQ(m.at(x, y), m.at(x, 127 - y)) << x << "," << y;
  }
}

TEST(Validate, RejectsBadSpecs) {
  EXPECT_EQ(spec_error(straight_tube(5.0)), ErrorCode::kIo);
  EXPECT_EQ(spec_error(straight_tube(5.0, {{80.0, 1.0, 6.0}})), ErrorCode::kInvalidSpec);
  EXPECT_EQ(spec_error(straight_tube(5.0, {{80.0, 0.0, 6.0}})), ErrorCode::kInvalidSpec);
  EXPECT_EQ(spec_error(straight_tube(5.0, {{80.0, 0.5, 2.0}})), ErrorCode::kInvalidSpec);
  EXPECT_EQ(spec_error(straight_tube(5.0, {{400.0, 0.5, 4.0}})), ErrorCode::kInvalidSpec);
  EXPECT_EQ(spec_error(straight_tube(25.0)), ErrorCode::kInvalidSpec);  // too close to the border
  EXPECT_EQ(spec_error(straight_tube(0.0)), ErrorCode::kInvalidSpec);
  PhantomSpec tapered = straight_tube(5.0);
  tapered.tubes[0].taper = 0.05;
  EXPECT_EQ(spec_error(tapered), ErrorCode::kInvalidSpec);
  PhantomSpec single = straight_tube(5.0);
  single.tubes[0].path.pop_back();
  EXPECT_EQ(spec_error(single), ErrorCode::kInvalidSpec);
  PhantomSpec empty{0, 10, 0, {}};
  EXPECT_EQ(spec_error(empty), ErrorCode::kInvalidSpec);
}

TEST(Tree, DepthOneIsASingleTube) {
  EXPECT_EQ(tree_spec(200, 200, 1, 1).tubes.size(), 1u);
}

TEST(Tree, DepthThreeHasSevenTubes) {
  EXPECT_EQ(tree_spec(400, 400, 5, 3).tubes.size(), 7u);
  EXPECT_EQ(generate_tree(400, 400, 5, 3).tubes.size(), 7u);
}

TEST(Tree, RejectsBadArguments) {
  EXPECT_THROW(tree_spec(400, 400, 1, 0), Error);
  EXPECT_THROW(tree_spec(32, 400, 1, 2), Error);
}

TEST(Tree, ChildrenAreNarrowerAndBranchAtModerateAngles) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const PhantomSpec spec = tree_spec(400, 400, seed, 4);
    ASSERT_EQ(spec.tubes.size(), 15u);
    ASSERT_NO_THROW(spec.validate());
    for (std::size_t i = 0; 2 * i + 2 < spec.tubes.size(); ++i) {
      const auto& parent = spec.tubes[i];
      const Point2 pd{parent.path[1].x - parent.path[0].x, parent.path[1].y - parent.path[0].y};
      for (std::size_t c : {2 * i + 1, 2 * i + 2}) {
        const auto& child = spec.tubes[c];
        EXPECT_LE(child.base_radius, parent.base_radius);
        EXPECT_DOUBLE_EQ(child.path[0].x, parent.path[1].x);
        EXPECT_DOUBLE_EQ(child.path[0].y, parent.path[1].y);
        const Point2 cd{child.path[1].x - child.path[0].x, child.path[1].y - child.path[0].y};
        const double cosang = (pd.x * cd.x + pd.y * cd.y) / (std::hypot(pd.x, pd.y) * std::hypot(cd.x, cd.y));
        const double deg = std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / std::numbers::pi;
        EXPECT_GE(deg, 20.0 - 1e-6);
        EXPECT_LE(deg, 70.0 + 1e-6);
      }
    }
  }
}

TEST(Tree, StenosesStayClearOfJunctions) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const PhantomSpec spec = tree_spec(400, 400, seed, 3);
    for (const auto& tube : spec.tubes) {
      for (const auto& st : tube.stenoses) {
        EXPECT_GE(st.position, 2.0 * st.width);
        EXPECT_LE(st.position, tube.length() - 2.0 * st.width);
      }
    }
  }
}

TEST(RandomTube, UsesTheSeverityLevelsAndValidates) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PhantomSpec spec = random_tube_spec(320, 320, seed);
    ASSERT_EQ(spec.tubes.size(), 1u);
    const auto& tube = spec.tubes[0];
    ASSERT_FALSE(tube.stenoses.empty());
    for (const auto& st : tube.stenoses) {
      const double s = st.severity;
      EXPECT_TRUE(s == 0.3 || s == 0.5 || s == 0.6 || s == 0.8) << s;
    }
    for (std::size_t i = 1; i < tube.stenoses.size(); ++i) {
      const auto& a = tube.stenoses[i - 1];
      const auto& b = tube.stenoses[i];
      EXPECT_GE(b.position - b.width, a.position + a.width);  // dips never overlap
    }
    for (const auto& st : generate(spec).stenoses) EXPECT_GT(st.eta, 0.25);
  }
}

TEST(TaperTube, RadiusDecreasesMonotonically) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PhantomSpec spec = taper_tube_spec(320, 320, seed);
    const auto& tube = spec.tubes[0];
    EXPECT_TRUE(tube.stenoses.empty());
    EXPECT_GT(tube.taper, 0.0);
    EXPECT_GT(tube.nominal_radius(tube.length()), 2.0);
  }
}

TEST(DefaultTube, IsValidWithOneModerateStenosis) {
  const PhantomSpec spec = default_tube_spec();
  EXPECT_NO_THROW(spec.validate());
  const PhantomTruth t = generate(spec);
  ASSERT_EQ(t.stenoses.size(), 1u);
  EXPECT_NEAR(t.stenoses[0].eta, 0.6, 1e-9);
}

TEST(SpecJson, RoundTripsExactly) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PhantomSpec spec = tree_spec(300, 300, seed, 3);
    const std::string text = spec_to_json(spec);
    const PhantomSpec back = spec_from_json(text);
    EXPECT_EQ(spec_to_json(back), text);
    EXPECT_EQ(generate(back).mask, generate(spec).mask);
  }
}

TEST(SpecJson, MalformedSpecIsInvalid) {
  for (const char* bad : {"{", "{\"width\": 10}", "{\"width\": 100, \"height\": 100, \"tubes\": [{}]}",
                          R"({"width": 100, "height": 100, "tubes": [{"path": [[10, 10], [90, 10]], "base_radius": 40}]})"}) {
    try {
      spec_from_json(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidSpec) << bad;
    }
  }
}

TEST(TruthExport, AnnotationsListEveryStenosis) {
  const PhantomTruth t = generate(straight_tube(6.0, {{50.0, 0.3, 5.0}, {120.0, 0.8, 8.0}}));
  const Annotations a = truth_annotations(t, "tube.png");
  ASSERT_EQ(a.at("tube.png").size(), 2u);
  EXPECT_EQ(a.at("tube.png")[0].point, t.stenoses[0].point);
  EXPECT_EQ(a.at("tube.png")[0].grade, Grade::kMild);
  EXPECT_EQ(a.at("tube.png")[1].grade, Grade::kSevere);
  const std::string json = truth_to_json(t);
  EXPECT_NE(json.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_EQ(parse_annotations(annotations_to_json(a)).at("tube.png").size(), 2u);
}

}  // namespace
}  // namespace vesselq
