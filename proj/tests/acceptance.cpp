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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed below and are not configurable.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "vesselq/metrics.hpp"
#include "vesselq/phantom.hpp"
#include "vesselq/pipeline.hpp"
#include "vesselq/radius.hpp"
#include "vesselq/skeleton.hpp"
#include "vesselq/stenosis.hpp"

namespace {

using namespace vesselq;
using Clock = std::chrono::steady_clock;

// AC1
constexpr int kThinningPhantoms = 100;
constexpr int kThinningMaxSide = 400;
constexpr double kThinningBudgetMs = 500.0;
// AC2
constexpr int kRadiusPhantoms = 50;
constexpr double kRadiusTolerancePx = 1.5;
constexpr double kRadiusAgreementFraction = 0.95;
constexpr double kEdtTolerance = 1e-9;
constexpr int kEdtMaxSide = 64;
// AC3
constexpr int kStenosisPhantoms = 50;
constexpr int kTaperPhantoms = 20;
constexpr double kMatchGamma = 10.0;
constexpr double kMinTpr = 0.9;
constexpr double kMinPpv = 0.8;
constexpr double kEtaTolerance = 0.10;
// AC5
constexpr double kMetricTolerance = 1e-12;
constexpr int kIdentityTrials = 1000;
constexpr double kCountErrorTolerance = 1e-9;
// AC6
constexpr double kBceTolerance = 1e-9;
constexpr double kPerfectLossCeiling = 1e-6;
// AC7
constexpr int kLargeSide = 800;
constexpr double kDetectBudgetSeconds = 2.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool subset(const BinaryMask& a, const BinaryMask& b) {
  const auto pa = a.data();
  const auto pb = b.data();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] && !pb[i]) return false;
  }
  return true;
}

void ac1(Outcome& o) {
  std::mt19937_64 rng(1001);
  double worst_ms = 0.0;
  for (int i = 0; i < kThinningPhantoms; ++i) {
    const int w = 200 + static_cast<int>(rng() % (kThinningMaxSide - 199));
    const int h = 200 + static_cast<int>(rng() % (kThinningMaxSide - 199));
    const int depth = 2 + static_cast<int>(rng() % 3);
    const PhantomTruth p = generate_tree(w, h, rng(), depth);
    const auto t0 = Clock::now();
    const BinaryMask skel = thin(p.mask).mask;
    const double ms = elapsed_ms(t0);
    worst_ms = std::max(worst_ms, ms);
    const std::string tag = "phantom " + std::to_string(i);
    o.require(subset(skel, p.mask), tag + " skeleton leaves the mask");
    o.require(thin(skel).mask == skel, tag + " thinning is not idempotent");
    o.require(count_components8(skel) == count_components8(p.mask),
              tag + " component count changed");
    o.require(ms < kThinningBudgetMs, tag + " exceeded the time budget");
  }
  o.detail << kThinningPhantoms << " tree phantoms, slowest thinning " << worst_ms << " ms";
}

PhantomSpec straight_tube_spec(std::mt19937_64& rng, int side) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PhantomSpec spec{side, side, 0, {}};
  TubeSpec tube;
  tube.base_radius = 3.0 + 7.0 * u(rng);
  const double angle = 2.0 * std::numbers::pi * u(rng);
  const double half = side / 2.0 - tube.base_radius - 4.0;
  const Point2 c{side / 2.0 + 2.0 * (u(rng) - 0.5), side / 2.0 + 2.0 * (u(rng) - 0.5)};
  const Point2 d{std::cos(angle), std::sin(angle)};
  const double reach = half / std::max(std::abs(d.x), std::abs(d.y));
  tube.path = {{c.x - d.x * reach, c.y - d.y * reach}, {c.x + d.x * reach, c.y + d.y * reach}};
  spec.tubes.push_back(std::move(tube));
  return spec;
}

void ac2(Outcome& o) {
  std::mt19937_64 rng(2002);
  std::size_t agree = 0;
  std::size_t total = 0;
  const CircleSearch search(kDefaultMaxSearchRadius);
  for (int i = 0; i < kRadiusPhantoms; ++i) {
    const PhantomSpec spec =
        i % 2 == 0 ? straight_tube_spec(rng, 256) : taper_tube_spec(256, 256, rng());
    const PhantomTruth p = generate(spec);
    const DistanceMap edt = exact_distance_transform(p.mask);
    for (const Point2& c : p.tubes[0].centerline) {
      const PixelPoint q{static_cast<int>(std::lround(c.x)), static_cast<int>(std::lround(c.y))};
      const int r = search.radius_at(p.mask, q);
      agree += std::abs(r - std::ceil(edt.at(q))) <= kRadiusTolerancePx;
      ++total;
    }
  }
  const double fraction = static_cast<double>(agree) / static_cast<double>(total);
  o.require(fraction >= kRadiusAgreementFraction, "radius agreement fraction too low");

  // Fixture set for the exact transform: small tubes plus random shapes.
  std::vector<BinaryMask> fixtures;
  for (int i = 0; i < 15; ++i) {
    PhantomSpec small{kEdtMaxSide, kEdtMaxSide, 0, {}};
    TubeSpec tube;
    tube.base_radius = 2.0 + i % 5;
    tube.path = {{10.0, 10.0 + 3 * i}, {54.0, 50.0 - 2 * i}};
    small.tubes.push_back(tube);
    fixtures.push_back(generate(small).mask);
  }
  for (int i = 0; i < 15; ++i) {
    const int w = 8 + static_cast<int>(rng() % (kEdtMaxSide - 7));
    const int h = 8 + static_cast<int>(rng() % (kEdtMaxSide - 7));
    fixtures.push_back(i % 2 ? testing::random_blobs(rng, w, h, 5, 12.0)
                             : testing::random_noise(rng, w, h, 0.7));
  }
  double worst = 0.0;
  for (const auto& m : fixtures) {
    const auto ref = testing::brute_force_edt(m);
    const auto got = exact_distance_transform(m).values;
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(ref[k] - got[k]));
  }
  o.require(worst < kEdtTolerance, "exact transform disagrees with brute force");
  o.detail << "radius within " << kRadiusTolerancePx << " px at " << agree << "/" << total
           << " centerline points (" << fraction << "); transform max error " << worst << " on "
           << fixtures.size() << " fixtures";
}

void ac3(Outcome& o) {
  std::size_t tp = 0, fp = 0, fn = 0, labels = 0;
  double worst_eta = 0.0;
  const PipelineConfig config;
  for (int i = 0; i < kStenosisPhantoms; ++i) {
    const PhantomTruth p = generate(random_tube_spec(320, 320, static_cast<std::uint64_t>(i)));
    const DetectionResult r = run_detection(p.mask, config);
    std::vector<PixelPoint> truth;
    for (const auto& s : p.stenoses) truth.push_back(s.point);
    labels += truth.size();
    const MatchResult m = match_stenoses(r.findings, truth, kMatchGamma);
    tp += m.tp;
    fp += m.fp;
    fn += m.fn;
    for (auto [fi, li] : m.matched_pairs) {
      const double err = std::abs(r.findings[fi].eta - p.stenoses[li].eta);
      worst_eta = std::max(worst_eta, err);
      o.require(err <= kEtaTolerance, "phantom " + std::to_string(i) + " eta error " +
                                          std::to_string(err));
    }
  }
  const DetectionRates rates = detection_rates(tp, fp, fn);
  o.require(rates.tpr && *rates.tpr >= kMinTpr, "pooled TPR below threshold");
  o.require(rates.ppv && *rates.ppv >= kMinPpv, "pooled PPV below threshold");

  std::size_t taper_findings = 0;
  for (int i = 0; i < kTaperPhantoms; ++i) {
    const PhantomTruth p = generate(taper_tube_spec(320, 320, 500 + static_cast<std::uint64_t>(i)));
    taper_findings += run_detection(p.mask, config).findings.size();
  }
  o.require(taper_findings == 0, "taper phantoms produced findings");
  o.detail << labels << " injected stenoses; TPR " << rates.tpr.value_or(0.0) << " PPV "
           << rates.ppv.value_or(0.0) << " (tp " << tp << ", fp " << fp << ", fn " << fn
           << "); worst eta error " << worst_eta << "; " << taper_findings
           << " findings on " << kTaperPhantoms << " taper phantoms";
}

RadiusProfile profile_of(const std::vector<int>& radii, std::size_t branch, int y) {
  RadiusProfile p{branch, {}};
  for (std::size_t i = 0; i < radii.size(); ++i) p.entries.push_back({{static_cast<int>(i), y}, radii[i]});
  return p;
}

void ac4(Outcome& o) {
  const auto f = detect_branch(profile_of({5, 4, 3, 2, 3, 4, 5}, 0, 0));
  o.require(f.size() == 1, "hand-traced profile did not give exactly one finding");
  if (f.size() == 1) {
    o.require(f[0].eta == 0.6, "eta is not 0.6");
    o.require(f[0].grade == Grade::kModerate, "grade is not moderate");
  }

  StenosisFinding a, b;
  a.location = {10, 10};
  a.eta = 0.6;
  b.location = {13, 14};  // 5 px away
  b.eta = 0.3;
  const auto kept = cluster_findings({b, a}, DetectorConfig{}.cluster_threshold_tau);
  o.require(kept.size() == 1 && kept[0].eta == 0.6 && kept[0].location == a.location,
            "clustering did not keep the higher-eta finding");

  // Mean radius 1.5 (diameter 3) with a clean dip.
  VesselGraph g;
  g.branches.assign(1, {});
  g.closed.assign(1, false);
  const std::vector<RadiusProfile> narrow{profile_of({2, 2, 1, 2, 1, 1, 2, 1, 2, 1}, 0, 5)};
  const BinaryMask mask(20, 20);
  const auto none = detect_all(mask, g, narrow);
  o.require(2.0 * narrow[0].mean_radius() == 3.0, "fixture branch is not diameter 3");
  o.require(none.empty(), "diameter-3 branch produced findings");
  o.detail << "eta " << (f.empty() ? -1.0 : f[0].eta) << " "
           << (f.empty() || !f[0].grade ? "none" : std::string(to_string(*f[0].grade)))
           << "; cluster kept " << kept.size() << "; narrow branch findings " << none.size();
}

void ac5(Outcome& o) {
  std::mt19937_64 rng(5005);
  double worst = 0.0;
  auto check = [&](std::optional<double> got, double num, double den, const std::string& what) {
    if (den == 0.0) {
      o.require(!got.has_value(), what + " should be undefined");
      return;
    }
    o.require(got.has_value(), what + " should be defined");
    if (got) {
      const double err = std::abs(*got - num / den);
      worst = std::max(worst, err);
      o.require(err < kMetricTolerance, what + " off by " + std::to_string(err));
    }
  };
  for (int t = 0; t < 200; ++t) {
    const int w = 1 + static_cast<int>(rng() % 40);
    const int h = 1 + static_cast<int>(rng() % 40);
    const double dp = (rng() % 11) / 10.0;
    const double dt = (rng() % 11) / 10.0;
    const BinaryMask pred = testing::random_noise(rng, w, h, dp);
    const BinaryMask truth = testing::random_noise(rng, w, h, dt);
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool p = pred.get(x, y), q = truth.get(x, y);
        tp += p && q;
        fp += p && !q;
        fn += !p && q;
        tn += !p && !q;
      }
    }
    const SegMetrics s = seg_metrics(confusion(pred, truth));
    check(s.iou, tp, tp + fp + fn, "iou");
    check(s.acc, tp + tn, tp + tn + fp + fn, "acc");
    check(s.spe, tn, tn + fp, "spe");
    check(s.sen, tp, tp + fn, "sen");
    check(s.f1, 2 * tp, 2 * tp + fp + fn, "f1");
  }

  std::vector<CountPair> series;
  double sq = 0.0, rel = 0.0;
  std::size_t rel_n = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<PixelPoint> pred(rng() % 7), labels(rng() % 7);
    for (auto& p : pred) p = {static_cast<int>(rng() % 40), static_cast<int>(rng() % 40)};
    for (auto& p : labels) p = {static_cast<int>(rng() % 40), static_cast<int>(rng() % 40)};
    const MatchResult m = match_points(pred, labels, kMatchGamma);
    const auto best = testing::brute_force_matching(pred, labels, kMatchGamma);
    o.require(m.tp == best.pairs, "matching misses the maximum pair count");
    const double btp = static_cast<double>(best.pairs);
    const DetectionRates r = detection_rates(m);
    check(r.tpr, btp, static_cast<double>(labels.size()), "tpr");
    check(r.ppv, btp, static_cast<double>(pred.size()), "ppv");

    series.push_back({pred.size(), labels.size()});
    const double d = static_cast<double>(pred.size()) - static_cast<double>(labels.size());
    sq += d * d;
    if (!labels.empty()) {
      rel += (d / labels.size()) * (d / labels.size());
      ++rel_n;
    }
  }
  const CountErrors ce = count_errors(series);
  const double armse_err = std::abs(ce.armse - std::sqrt(sq / series.size()));
  const double rrmse_err = std::abs(ce.rrmse.value_or(-1.0) - std::sqrt(rel / rel_n));
  worst = std::max({worst, armse_err, rrmse_err});
  o.require(armse_err < kMetricTolerance && rrmse_err < kMetricTolerance,
            "count errors disagree with direct evaluation");

  double identity = 0.0;
  for (int t = 0; t < kIdentityTrials; ++t) {
    const ConfusionCounts c{1 + rng() % 100000, rng() % 100000, rng() % 100000, rng() % 100000};
    const SegMetrics s = seg_metrics(c);
    identity = std::max(identity, std::abs(*s.f1 - 2.0 * *s.iou / (1.0 + *s.iou)));
  }
  o.require(identity < kMetricTolerance, "F1-IoU identity fails");

  const std::vector<CountPair> fixture{{3, 4}, {5, 5}};
  const CountErrors fx = count_errors(fixture);
  o.require(std::abs(fx.armse - 0.70710678118654752) < kCountErrorTolerance, "ARMSE fixture");
  o.require(fx.rrmse && std::abs(*fx.rrmse - 0.17677669529663688) < kCountErrorTolerance,
            "RRMSE fixture");
  o.detail << "max oracle deviation " << worst << "; F1-IoU identity max error " << identity
           << " over " << kIdentityTrials << " counts; ARMSE " << fx.armse << " RRMSE "
           << fx.rrmse.value_or(-1.0);
}

void ac6(Outcome& o) {
  const std::vector<std::uint8_t> px{1, 0};
  const BinaryMask truth(2, 1, px);
  const BceDiceLoss l = bce_dice(ProbMask(2, 1, {0.5, 0.5}), truth);
  o.require(std::abs(l.bce - std::numbers::ln2) <= kBceTolerance, "bce is not ln 2");
  o.require(l.dice == 1.0 / 3.0, "dice is not exactly 1/3");
  const BceDiceLoss perfect = bce_dice(ProbMask(2, 1, {1.0, 0.0}), truth);
  o.require(perfect.total <= kPerfectLossCeiling, "perfect prediction loss too large");
  o.detail.precision(17);
  o.detail << "bce " << l.bce << " dice " << l.dice << "; perfect total " << perfect.total;
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult cli(const std::string& args) {
  CliResult r;
  FILE* pipe = ::popen((std::string(VESSELQ_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ac7(Outcome& o) {
  // Same stem in two directories: the annotation file embeds the image name.
  testing::TempDir run_a;
  testing::TempDir run_b;
  const std::string side = std::to_string(kLargeSide);
  const std::string gen = "phantom --tree --depth 4 --seed 7 --width " + side + " --height " + side;
  o.require(cli(gen + " --out " + run_a.file("p")).code == 0, "phantom generation failed");
  o.require(cli(gen + " --out " + run_b.file("p")).code == 0, "phantom generation failed");
  for (const char* ext : {".png", ".spec.json", ".truth.json", ".json"}) {
    const std::string a = slurp(run_a.file(std::string("p") + ext));
    o.require(!a.empty() && a == slurp(run_b.file(std::string("p") + ext)),
              std::string("phantom output ") + ext + " differs between runs");
  }
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const PhantomTruth x = generate_tree(kLargeSide, kLargeSide, seed, 4);
    const PhantomTruth y = generate_tree(kLargeSide, kLargeSide, seed, 4);
    o.require(x.mask == y.mask && truth_to_json(x) == truth_to_json(y),
              "in-process generation is not reproducible");
  }

  const std::string mask = run_a.file("p.png");
  const auto t0 = Clock::now();
  const CliResult single = cli("detect " + mask + " --threads 1");
  const double seconds = elapsed_ms(t0) / 1000.0;
  o.require(single.code == 0, "detect failed");
  o.require(seconds < kDetectBudgetSeconds, "detect exceeded the time budget");

  std::vector<std::string> outputs;
  for (unsigned threads : {1u, 2u, 8u}) {
    const std::string t = std::to_string(threads);
    const CliResult r = cli("detect " + mask + " --threads " + t + " --overlay " +
                            run_a.file("o" + t + ".png") + " --graph " + run_a.file("g" + t + ".json") +
                            " --profiles " + run_a.file("p" + t + ".csv"));
    o.require(r.code == 0, "detect failed with --threads " + t);
    outputs.push_back(r.out + slurp(run_a.file("o" + t + ".png")) + slurp(run_a.file("g" + t + ".json")) +
                      slurp(run_a.file("p" + t + ".csv")));
  }
  o.require(outputs[0] == single.out + outputs[0].substr(single.out.size()) &&
                outputs[0] == outputs[1] && outputs[1] == outputs[2],
            "--threads changed output bytes");

  testing::TempDir suite_a, suite_b;
  cli("phantom --seed 40 --count 3 --out " + suite_a.path().string());
  cli("phantom --seed 40 --count 3 --out " + suite_b.path().string());
  const CliResult ea = cli("eval " + suite_a.path().string() + " " + suite_a.file("annotations.json") +
                           " --threads 1");
  const CliResult eb = cli("eval " + suite_b.path().string() + " " + suite_b.file("annotations.json") +
                           " --threads 4");
  o.require(ea.code == 0 && ea.out == eb.out, "eval report depends on --threads");
  o.detail << "800x800 detect " << seconds << " s; outputs identical across --threads 1/2/8";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"AC1 thinning suite", ac1},        {"AC2 radius oracle", ac2},
      {"AC3 stenosis detection", ac3},    {"AC4 severity and grading", ac4},
      {"AC5 metric formulas", ac5},       {"AC6 BceDice", ac6},
      {"AC7 determinism and performance", ac7},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
