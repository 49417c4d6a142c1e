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

#include "vesselq/vesselq.h"

#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <exception>
#include <functional>
#include <memory>
#include <new>
#include <string>

#include "vesselq/error.hpp"
#include "vesselq/image_io.hpp"
#include "vesselq/metrics.hpp"
#include "vesselq/overlay.hpp"
#include "vesselq/phantom.hpp"
#include "vesselq/pipeline.hpp"

struct vq_mask {
  vesselq::BinaryMask rep;
};

struct vq_detection {
  vesselq::BinaryMask mask;
  vesselq::DetectionResult rep;
};

struct vq_phantom {
  vesselq::PhantomSpec spec;
  vesselq::PhantomTruth truth;
};

namespace {

thread_local std::string g_last_error;

vq_status fail(vq_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
vq_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return VQ_OK;
  } catch (const vesselq::Error& e) {
    return fail(static_cast<vq_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VQ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VQ_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

vesselq::PipelineConfig to_pipeline(const vq_detector_config* config) {
  vq_detector_config c;
  vq_detector_config_init(&c);
  if (config) c = *config;
  vesselq::PipelineConfig out;
  out.detector.min_mean_diameter = c.min_mean_diameter;
  out.detector.cluster_threshold_tau = c.cluster_threshold_tau;
  out.detector.report_floor = c.report_floor;
  out.detector.median_window = c.median_window;
  out.max_search_radius = c.max_search_radius;
  out.threads = c.threads;
  return out;
}

vq_grade to_c(const std::optional<vesselq::Grade>& g) {
  if (!g) return VQ_GRADE_NONE;
  switch (*g) {
    case vesselq::Grade::kMild:
      return VQ_GRADE_MILD;
    case vesselq::Grade::kModerate:
      return VQ_GRADE_MODERATE;
    case vesselq::Grade::kSevere:
      return VQ_GRADE_SEVERE;
  }
  return VQ_GRADE_NONE;
}

#define VQ_REQUIRE(cond)                                                      \
  do {                                                                        \
    if (!(cond)) return fail(VQ_ERR_INVALID_INPUT, "null argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* vq_version(void) { return "1.0.0"; }

const char* vq_last_error(void) { return g_last_error.c_str(); }

void vq_string_free(char* s) { std::free(s); }

void vq_detector_config_init(vq_detector_config* config) {
  if (!config) return;
  const vesselq::PipelineConfig defaults;
  config->min_mean_diameter = defaults.detector.min_mean_diameter;
  config->cluster_threshold_tau = defaults.detector.cluster_threshold_tau;
  config->report_floor = defaults.detector.report_floor;
  config->median_window = defaults.detector.median_window;
  config->max_search_radius = defaults.max_search_radius;
  config->threads = defaults.threads;
}

vq_status vq_mask_load(const char* path, uint8_t threshold, vq_mask** out) {
  VQ_REQUIRE(path && out);
  return guarded([&] { *out = new vq_mask{vesselq::load_mask(path, threshold)}; });
}

vq_status vq_mask_from_pixels(int width, int height, const uint8_t* pixels, vq_mask** out) {
  VQ_REQUIRE(pixels && out);
  return guarded([&] {
    const auto n = static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0);
    *out = new vq_mask{vesselq::BinaryMask(width, height, std::span(pixels, n))};
  });
}

void vq_mask_free(vq_mask* mask) { delete mask; }

int vq_mask_width(const vq_mask* mask) { return mask ? mask->rep.width() : 0; }

int vq_mask_height(const vq_mask* mask) { return mask ? mask->rep.height() : 0; }

size_t vq_mask_foreground_count(const vq_mask* mask) { return mask ? mask->rep.count() : 0; }

vq_status vq_mask_write_png(const vq_mask* mask, const char* path) {
  VQ_REQUIRE(mask && path);
  return guarded([&] { vesselq::write_png(path, vesselq::to_gray(mask->rep)); });
}

vq_status vq_detect(const vq_mask* mask, const vq_detector_config* config, vq_detection** out) {
  VQ_REQUIRE(mask && out);
  return guarded([&] {
    auto result = vesselq::run_detection(mask->rep, to_pipeline(config));
    *out = new vq_detection{mask->rep, std::move(result)};
  });
}

void vq_detection_free(vq_detection* detection) { delete detection; }

size_t vq_detection_count(const vq_detection* detection) {
  return detection ? detection->rep.findings.size() : 0;
}

size_t vq_detection_branch_count(const vq_detection* detection) {
  return detection ? detection->rep.graph.branches.size() : 0;
}

vq_status vq_detection_get(const vq_detection* detection, size_t index, vq_finding* out) {
  VQ_REQUIRE(detection && out);
  if (index >= detection->rep.findings.size()) {
    return fail(VQ_ERR_OUT_OF_RANGE, "finding index out of range");
  }
  const auto& f = detection->rep.findings[index];
  *out = {f.location.x, f.location.y, f.r_c, f.r_s, f.r_e, f.eta, to_c(f.grade), f.branch_id};
  g_last_error.clear();
  return VQ_OK;
}

vq_status vq_detection_findings_json(const vq_detection* detection, const char* image_name,
                                     char** out) {
  VQ_REQUIRE(detection && out);
  return guarded([&] {
    *out = dup_string(vesselq::findings_json(detection->rep, detection->mask.width(),
                                             detection->mask.height(),
                                             image_name ? image_name : ""));
  });
}

vq_status vq_detection_graph_json(const vq_detection* detection, char** out) {
  VQ_REQUIRE(detection && out);
  return guarded([&] { *out = dup_string(vesselq::graph_json(detection->rep.graph)); });
}

vq_status vq_detection_profiles_csv(const vq_detection* detection, char** out) {
  VQ_REQUIRE(detection && out);
  return guarded([&] { *out = dup_string(vesselq::profiles_csv(detection->rep.profiles)); });
}

vq_status vq_detection_write_overlay(const vq_detection* detection, const char* png_path) {
  VQ_REQUIRE(detection && png_path);
  return guarded([&] {
    vesselq::write_png(png_path, vesselq::render_overlay(detection->mask, detection->rep.findings));
  });
}

vq_status vq_detection_write_skeleton(const vq_detection* detection, const char* pgm_path) {
  VQ_REQUIRE(detection && pgm_path);
  return guarded(
      [&] { vesselq::write_pgm(pgm_path, vesselq::to_gray(detection->rep.skeleton.mask)); });
}

vq_status vq_metrics(const char* pred_path, const char* truth_path, uint8_t threshold, int prob,
                     double lambda1, double lambda2, char** out_json) {
  VQ_REQUIRE(pred_path && truth_path && out_json);
  return guarded([&] {
    const auto pred = vesselq::read_gray(pred_path);
    const auto truth = vesselq::read_gray(truth_path);
    vesselq::MetricsOptions options{threshold, prob != 0, lambda1, lambda2};
    *out_json = dup_string(vesselq::metrics_report_json(pred, truth, options));
  });
}

vq_status vq_eval(const char* pred_dir, const char* annotation_path,
                  const vq_detector_config* config, double gamma, uint8_t threshold,
                  char** out_json, int* complete) {
  VQ_REQUIRE(pred_dir && annotation_path && out_json && complete);
  return guarded([&] {
    const auto annotations = vesselq::load_annotations(annotation_path);
    vesselq::EvalOptions options;
    options.pipeline = to_pipeline(config);
    options.threads = options.pipeline.threads;
    options.gamma = gamma;
    options.threshold = threshold;
    const auto report = vesselq::evaluate_directory(pred_dir, annotations, options);
    *out_json = dup_string(vesselq::eval_report_json(report));
    *complete = report.complete() ? 1 : 0;
  });
}

namespace {

vq_status make_phantom(vq_phantom** out, const std::function<vesselq::PhantomSpec()>& make_spec) {
  VQ_REQUIRE(out);
  return guarded([&] {
    auto spec = make_spec();
    auto truth = vesselq::generate(spec);
    *out = new vq_phantom{std::move(spec), std::move(truth)};
  });
}

}  // namespace

vq_status vq_phantom_default(vq_phantom** out) {
  return make_phantom(out, [] { return vesselq::default_tube_spec(); });
}

vq_status vq_phantom_from_spec_json(const char* spec_json, vq_phantom** out) {
  VQ_REQUIRE(spec_json);
  return make_phantom(out, [&] { return vesselq::spec_from_json(spec_json); });
}

vq_status vq_phantom_random_tube(int width, int height, uint64_t seed, vq_phantom** out) {
  return make_phantom(out, [&] { return vesselq::random_tube_spec(width, height, seed); });
}

vq_status vq_phantom_tree(int width, int height, uint64_t seed, int depth, vq_phantom** out) {
  return make_phantom(out, [&] { return vesselq::tree_spec(width, height, seed, depth); });
}

void vq_phantom_free(vq_phantom* phantom) { delete phantom; }

size_t vq_phantom_tube_count(const vq_phantom* phantom) {
  return phantom ? phantom->spec.tubes.size() : 0;
}

size_t vq_phantom_stenosis_count(const vq_phantom* phantom) {
  return phantom ? phantom->truth.stenoses.size() : 0;
}

vq_status vq_phantom_mask(const vq_phantom* phantom, vq_mask** out) {
  VQ_REQUIRE(phantom && out);
  return guarded([&] { *out = new vq_mask{phantom->truth.mask}; });
}

vq_status vq_phantom_spec_json(const vq_phantom* phantom, char** out) {
  VQ_REQUIRE(phantom && out);
  return guarded([&] { *out = dup_string(vesselq::spec_to_json(phantom->spec)); });
}

vq_status vq_phantom_truth_json(const vq_phantom* phantom, char** out) {
  VQ_REQUIRE(phantom && out);
  return guarded([&] { *out = dup_string(vesselq::truth_to_json(phantom->truth)); });
}

vq_status vq_phantom_annotations_json(const vq_phantom* phantom, const char* image_name,
                                      char** out) {
  VQ_REQUIRE(phantom && image_name && out);
  return guarded([&] {
    *out = dup_string(
        vesselq::annotations_to_json(vesselq::truth_annotations(phantom->truth, image_name)));
  });
}

}  // extern "C"
