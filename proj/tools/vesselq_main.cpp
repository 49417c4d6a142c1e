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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vesselq/vesselq.h"

namespace {

namespace fs = std::filesystem;

struct CString {
  char* ptr = nullptr;
  ~CString() { vq_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
};
using Mask = Handle<vq_mask, vq_mask_free>;
using Detection = Handle<vq_detection, vq_detection_free>;
using Phantom = Handle<vq_phantom, vq_phantom_free>;

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

void check(vq_status status) {
  if (status != VQ_OK) throw Failure(status, vq_last_error());
}

int report_error(int code, const std::string& message) {
  nlohmann::json err{{"error", message}, {"code", code}};
  std::cerr << err.dump() << std::endl;
  return code;
}

void require_file(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Failure(VQ_ERR_IO, "no such file: " + path);
}

void require_dir(const std::string& path) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) throw Failure(VQ_ERR_IO, "no such directory: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure(VQ_ERR_IO, "cannot write " + path);
  out << text;
  if (!out) throw Failure(VQ_ERR_IO, "write failed: " + path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(VQ_ERR_IO, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct CommonFlags {
  int threshold = 128;
  double tau = 8.0;
  double min_diameter = 4.0;
  double report_floor = 0.25;
  int median_window = 5;
  int max_radius = 50;
  unsigned threads = 1;
  std::string out;

  vq_detector_config config() const {
    vq_detector_config c;
    vq_detector_config_init(&c);
    c.cluster_threshold_tau = tau;
    c.min_mean_diameter = min_diameter;
    c.report_floor = report_floor;
    c.median_window = median_window;
    c.max_search_radius = max_radius;
    c.threads = threads;
    return c;
  }
};

void add_threshold(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--threshold", f.threshold, "Foreground if intensity >= threshold")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
}

void add_detector_flags(CLI::App* cmd, CommonFlags& f) {
  add_threshold(cmd, f);
  cmd->add_option("--tau", f.tau, "Cluster distance in px (0 disables)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--min-diameter", f.min_diameter, "Skip branches with a smaller mean diameter")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--floor", f.report_floor, "Drop findings with a smaller severity")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  cmd->add_option("--median", f.median_window, "Odd profile smoothing window (1 disables)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-radius", f.max_radius, "Largest radius searched, px")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Report path (default: stdout)");
}

struct DetectArgs {
  std::string mask;
  std::string overlay;
  std::string skeleton;
  std::string graph;
  std::string profiles;
};

int run_detect(const CommonFlags& f, const DetectArgs& a) {
  require_file(a.mask);
  Mask mask;
  check(vq_mask_load(a.mask.c_str(), static_cast<uint8_t>(f.threshold), &mask.ptr));
  const vq_detector_config config = f.config();
  Detection det;
  check(vq_detect(mask.ptr, &config, &det.ptr));

  CString report;
  check(vq_detection_findings_json(det.ptr, fs::path(a.mask).filename().string().c_str(),
                                   &report.ptr));
  emit(f.out, report.str());
  if (!a.overlay.empty()) check(vq_detection_write_overlay(det.ptr, a.overlay.c_str()));
  if (!a.skeleton.empty()) check(vq_detection_write_skeleton(det.ptr, a.skeleton.c_str()));
  if (!a.graph.empty()) {
    CString graph;
    check(vq_detection_graph_json(det.ptr, &graph.ptr));
    write_text(a.graph, graph.str());
  }
  if (!a.profiles.empty()) {
    CString csv;
    check(vq_detection_profiles_csv(det.ptr, &csv.ptr));
    write_text(a.profiles, csv.str());
  }
  return 0;
}

int run_eval(const CommonFlags& f, const std::string& pred_dir, const std::string& annotations,
             double gamma) {
  require_dir(pred_dir);
  require_file(annotations);
  const vq_detector_config config = f.config();
  CString report;
  int complete = 0;
  check(vq_eval(pred_dir.c_str(), annotations.c_str(), &config, gamma,
                static_cast<uint8_t>(f.threshold), &report.ptr, &complete));
  emit(f.out, report.str());
  if (!complete) {
    return report_error(VQ_ERR_IO, "some annotated images had no readable mask; see report");
  }
  return 0;
}

struct MetricsArgs {
  std::string pred;
  std::string truth;
  bool prob = false;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

int run_metrics(const CommonFlags& f, const MetricsArgs& a) {
  require_file(a.pred);
  require_file(a.truth);
  CString report;
  check(vq_metrics(a.pred.c_str(), a.truth.c_str(), static_cast<uint8_t>(f.threshold),
                   a.prob ? 1 : 0, a.lambda1, a.lambda2, &report.ptr));
  emit(f.out, report.str());
  return 0;
}

struct PhantomArgs {
  std::string spec;
  std::optional<std::uint64_t> seed;
  bool tree = false;
  int depth = 3;
  int width = 0;
  int height = 0;
  int count = 0;
  std::string out;
};

void make_phantom(const PhantomArgs& a, std::uint64_t seed, Phantom& p) {
  if (!a.spec.empty()) {
    check(vq_phantom_from_spec_json(read_text(a.spec).c_str(), &p.ptr));
  } else if (a.tree) {
    check(vq_phantom_tree(a.width ? a.width : 800, a.height ? a.height : 800, seed, a.depth, &p.ptr));
  } else if (a.seed) {
    check(vq_phantom_random_tube(a.width ? a.width : 320, a.height ? a.height : 320, seed, &p.ptr));
  } else {
    check(vq_phantom_default(&p.ptr));
  }
}

// Writes <stem>.png, <stem>.spec.json, <stem>.truth.json and returns the
// annotation entries keyed by the PNG file name.
nlohmann::json write_phantom(const Phantom& p, const fs::path& stem) {
  const fs::path png = fs::path(stem.string() + ".png");
  const std::string name = png.filename().string();
  Mask mask;
  check(vq_phantom_mask(p.ptr, &mask.ptr));
  check(vq_mask_write_png(mask.ptr, png.string().c_str()));
  CString spec;
  check(vq_phantom_spec_json(p.ptr, &spec.ptr));
  write_text(stem.string() + ".spec.json", spec.str());
  CString truth;
  check(vq_phantom_truth_json(p.ptr, &truth.ptr));
  write_text(stem.string() + ".truth.json", truth.str());
  CString annotations;
  check(vq_phantom_annotations_json(p.ptr, name.c_str(), &annotations.ptr));
  return nlohmann::json::parse(annotations.str());
}

int run_phantom(const PhantomArgs& a) {
  if (a.out.empty()) throw Failure(VQ_ERR_INVALID_INPUT, "--out is required");
  if (!a.spec.empty()) require_file(a.spec);
  const std::uint64_t seed = a.seed.value_or(0);

  if (a.count > 0) {
    if (!a.spec.empty()) throw Failure(VQ_ERR_INVALID_INPUT, "--count cannot be combined with --spec");
    std::error_code ec;
    fs::create_directories(a.out, ec);
    require_dir(a.out);
    PhantomArgs each = a;
    if (!each.seed) each.seed = seed;
    nlohmann::ordered_json merged = nlohmann::ordered_json::object();
    for (int i = 0; i < a.count; ++i) {
      Phantom p;
      make_phantom(each, seed + static_cast<std::uint64_t>(i), p);
      char name[32];
      std::snprintf(name, sizeof(name), "phantom_%04d", i);
      const nlohmann::json entries = write_phantom(p, fs::path(a.out) / name);
      for (const auto& [key, value] : entries.items()) {
        merged[key] = value;
      }
    }
    write_text((fs::path(a.out) / "annotations.json").string(), merged.dump(2) + "\n");
    return 0;
  }

  Phantom p;
  make_phantom(a, seed, p);
  const nlohmann::ordered_json annotations = write_phantom(p, a.out);
  write_text(a.out + ".json", annotations.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coronary stenosis quantification from binary vessel masks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vq_version()));

  CommonFlags flags;

  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "Detect and grade stenoses on one mask");
  detect->add_option("mask", detect_args.mask, "Mask image (PNG or PGM)")->required();
  add_detector_flags(detect, flags);
  detect->add_option("--overlay", detect_args.overlay, "Write a color-coded overlay PNG");
  detect->add_option("--skeleton", detect_args.skeleton, "Write the skeleton as a PGM");
  detect->add_option("--graph", detect_args.graph, "Write the vessel graph as JSON");
  detect->add_option("--profiles", detect_args.profiles, "Write radius profiles as CSV");

  std::string pred_dir;
  std::string annotation_path;
  double gamma = 10.0;
  auto* eval = app.add_subcommand("eval", "Score detection over a directory of masks");
  eval->add_option("pred_dir", pred_dir, "Directory of predicted masks")->required();
  eval->add_option("annotations", annotation_path, "Annotation JSON")->required();
  eval->add_option("--gamma", gamma, "Match distance in px")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_detector_flags(eval, flags);

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Segmentation metrics between two masks");
  metrics->add_option("pred", metrics_args.pred, "Predicted mask")->required();
  metrics->add_option("truth", metrics_args.truth, "Ground-truth mask")->required();
  metrics->add_flag("--prob", metrics_args.prob, "Read prediction intensities as probabilities");
  metrics->add_option("--lambda1", metrics_args.lambda1, "BCE weight")->capture_default_str();
  metrics->add_option("--lambda2", metrics_args.lambda2, "Dice weight")->capture_default_str();
  add_threshold(metrics, flags);
  metrics->add_option("--out", flags.out, "Report path (default: stdout)");

  PhantomArgs phantom_args;
  auto* phantom = app.add_subcommand("phantom", "Generate a synthetic vessel phantom");
  phantom->add_option("--spec", phantom_args.spec, "Phantom spec JSON");
  phantom->add_option("--seed", phantom_args.seed, "Random seed");
  phantom->add_flag("--tree", phantom_args.tree, "Random binary vessel tree");
  phantom->add_option("--depth", phantom_args.depth, "Tree depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  phantom->add_option("--width", phantom_args.width, "Raster width")->check(CLI::PositiveNumber);
  phantom->add_option("--height", phantom_args.height, "Raster height")->check(CLI::PositiveNumber);
  phantom->add_option("--count", phantom_args.count, "Emit a numbered suite into the --out directory")
      ->check(CLI::NonNegativeNumber);
  phantom->add_option("--out", phantom_args.out, "Output stem, or directory with --count")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(VQ_ERR_INVALID_INPUT, e.what());
  }

  try {
    if (*detect) return run_detect(flags, detect_args);
    if (*eval) return run_eval(flags, pred_dir, annotation_path, gamma);
    if (*metrics) return run_metrics(flags, metrics_args);
    if (*phantom) return run_phantom(phantom_args);
  } catch (const Failure& f) {
    return report_error(f.code(), f.message());
  } catch (const std::exception& e) {
    return report_error(VQ_ERR_INTERNAL, e.what());
  }
  return 0;
}
