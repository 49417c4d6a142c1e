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

#include "vesselq/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "vesselq/error.hpp"
#include "vesselq/image_io.hpp"

namespace vesselq {

using ordered_json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
  detector.validate();
  if (max_search_radius < 1) throw Error(ErrorCode::kInvalidInput, "max search radius must be >= 1");
  if (threads < 1) throw Error(ErrorCode::kInvalidInput, "thread count must be >= 1");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

DetectionResult run_detection(const BinaryMask& mask, const PipelineConfig& config) {
  config.validate();
  DetectionResult result{thin(mask), {}, {}, {}};
  result.graph = prune_spurs(trace_branches(result.skeleton), config.spur_min_length);

  const CircleSearch search(config.max_search_radius);
  result.profiles.resize(result.graph.branches.size());
  parallel_for(result.graph.branches.size(), config.threads, [&](std::size_t i) {
    result.profiles[i] = profile_branch(mask, result.graph, i, search);
  });
  result.findings = detect_all(mask, result.graph, result.profiles, config.detector);
  return result;
}

namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

ordered_json optional_value(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json();
}

ordered_json finding_json(const StenosisFinding& f) {
  return ordered_json{
      {"branch_id", f.branch_id},
      {"x", f.location.x},
      {"y", f.location.y},
      {"r_c", f.r_c},
      {"r_s", f.r_s},
      {"r_e", f.r_e},
      {"eta", round4(f.eta)},
      {"grade", f.grade ? ordered_json(std::string(to_string(*f.grade))) : ordered_json()},
  };
}

ordered_json points_json(const std::vector<PixelPoint>& points) {
  auto out = ordered_json::array();
  for (const auto& p : points) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

std::string findings_json(const DetectionResult& result, int width, int height,
                          const std::string& image_name) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["image"] = image_name;
  doc["width"] = width;
  doc["height"] = height;
  doc["branches"] = result.graph.branches.size();
  auto findings = ordered_json::array();
  for (const auto& f : result.findings) findings.push_back(finding_json(f));
  doc["findings"] = std::move(findings);
  return doc.dump(2) + "\n";
}

std::string graph_json(const VesselGraph& graph) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  auto branches = ordered_json::array();
  for (std::size_t i = 0; i < graph.branches.size(); ++i) {
    branches.push_back({{"id", i}, {"closed", static_cast<bool>(graph.closed[i])},
                        {"points", points_json(graph.branches[i])}});
  }
  doc["branches"] = std::move(branches);
  auto junctions = ordered_json::array();
  for (const auto& j : graph.junctions) junctions.push_back(points_json(j));
  doc["junctions"] = std::move(junctions);
  doc["endpoints"] = points_json(graph.endpoints);
  return doc.dump(2) + "\n";
}

std::optional<std::string> resolve_mask_path(const std::string& dir, const std::string& name) {
  namespace fs = std::filesystem;
  for (const std::string suffix : {"", ".png", ".pgm"}) {
    const fs::path p = fs::path(dir) / (name + suffix);
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  return std::nullopt;
}

namespace {

void aggregate(EvalReport& report) {
  std::vector<CountPair> series;
  for (const auto& img : report.images) {
    report.tp += img.match.tp;
    report.fp += img.match.fp;
    report.fn += img.match.fn;
    series.push_back({img.predicted, img.labeled});
  }
  report.pooled = detection_rates(report.tp, report.fp, report.fn);
  if (!series.empty()) report.counts = count_errors(series);
}

ImageEval score(const std::string& name, std::vector<StenosisFinding> findings,
                const std::vector<LabeledPoint>& labels, double gamma) {
  ImageEval img;
  img.name = name;
  img.predicted = findings.size();
  img.labeled = labels.size();
  img.match = match_stenoses(findings, points_of(labels), gamma);
  img.findings = std::move(findings);
  return img;
}

}  // namespace

EvalReport evaluate_directory(const std::string& pred_dir, const Annotations& annotations,
                              const EvalOptions& options) {
  options.pipeline.validate();
  if (!(options.gamma > 0.0)) throw Error(ErrorCode::kInvalidInput, "gamma must be > 0");

  std::vector<const Annotations::value_type*> entries;
  for (const auto& entry : annotations) entries.push_back(&entry);

  struct Slot {
    std::optional<ImageEval> eval;
    bool missing = false;
    std::string failure;
  };
  std::vector<Slot> slots(entries.size());
  PipelineConfig per_image = options.pipeline;
  per_image.threads = 1;

  parallel_for(entries.size(), options.threads, [&](std::size_t i) {
    const auto& [name, labels] = *entries[i];
    const auto path = resolve_mask_path(pred_dir, name);
    if (!path) {
      slots[i].missing = true;
      return;
    }
    try {
      const BinaryMask mask = load_mask(*path, options.threshold);
      auto result = run_detection(mask, per_image);
      slots[i].eval = score(name, std::move(result.findings), labels, options.gamma);
    } catch (const Error& e) {
      slots[i].failure = e.what();
    }
  });

  EvalReport report;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].missing) {
      report.missing.push_back(entries[i]->first);
    } else if (!slots[i].eval) {
      report.failed.emplace_back(entries[i]->first, slots[i].failure);
    } else {
      report.images.push_back(std::move(*slots[i].eval));
    }
  }
  aggregate(report);
  return report;
}

EvalReport evaluate_findings(
    const std::vector<std::pair<std::string, std::vector<StenosisFinding>>>& predictions,
    const Annotations& annotations, double gamma) {
  EvalReport report;
  for (const auto& [name, labels] : annotations) {
    const auto it = std::find_if(predictions.begin(), predictions.end(),
                                 [&name](const auto& p) { return p.first == name; });
    if (it == predictions.end()) {
      report.missing.push_back(name);
      continue;
    }
    report.images.push_back(score(name, it->second, labels, gamma));
  }
  aggregate(report);
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  auto images = ordered_json::array();
  for (const auto& img : report.images) {
    const auto rates = detection_rates(img.match);
    auto findings = ordered_json::array();
    for (const auto& f : img.findings) findings.push_back(finding_json(f));
    images.push_back({{"image", img.name},
                      {"n_predicted", img.predicted},
                      {"n_labeled", img.labeled},
                      {"tp", img.match.tp},
                      {"fp", img.match.fp},
                      {"fn", img.match.fn},
                      {"tpr", optional_value(rates.tpr)},
                      {"ppv", optional_value(rates.ppv)},
                      {"findings", std::move(findings)}});
  }

  ordered_json agg;
  agg["M"] = report.images.size();
  agg["tp"] = report.tp;
  agg["fp"] = report.fp;
  agg["fn"] = report.fn;
  agg["tpr"] = optional_value(report.pooled.tpr);
  agg["ppv"] = optional_value(report.pooled.ppv);
  agg["armse"] = report.counts ? ordered_json(report.counts->armse) : ordered_json();
  agg["rrmse"] = report.counts ? optional_value(report.counts->rrmse) : ordered_json();
  agg["rrmse_excluded_images"] = report.counts ? report.counts->rrmse_excluded : 0;
  auto undefined = ordered_json::array();
  if (!report.pooled.tpr) undefined.push_back("tpr");
  if (!report.pooled.ppv) undefined.push_back("ppv");
  if (!report.counts) undefined.push_back("armse");
  if (!report.counts || !report.counts->rrmse) undefined.push_back("rrmse");
  agg["undefined"] = std::move(undefined);

  doc["aggregate"] = std::move(agg);
  doc["images"] = std::move(images);
  doc["missing"] = report.missing;
  auto failed = ordered_json::array();
  for (const auto& [name, reason] : report.failed) failed.push_back({{"image", name}, {"error", reason}});
  doc["failed"] = std::move(failed);
  return doc.dump(2) + "\n";
}

std::string metrics_report_json(const GrayImage& pred, const GrayImage& truth,
                                const MetricsOptions& options) {
  const BinaryMask pred_mask = binarize(pred, options.threshold);
  const BinaryMask truth_mask = binarize(truth, options.threshold);
  const ConfusionCounts c = confusion(pred_mask, truth_mask);
  const SegMetrics m = seg_metrics(c);

  std::vector<double> probs;
  if (options.prob) {
    probs.resize(pred.pixels.size());
    std::transform(pred.pixels.begin(), pred.pixels.end(), probs.begin(),
                   [](std::uint8_t v) { return v / 255.0; });
  } else {
    probs.assign(pred_mask.data().begin(), pred_mask.data().end());
  }
  const BceDiceLoss loss =
      bce_dice(ProbMask(pred.width, pred.height, std::move(probs)), truth_mask, options.lambda1,
               options.lambda2);

  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tp"] = c.tp;
  doc["fp"] = c.fp;
  doc["fn"] = c.fn;
  doc["tn"] = c.tn;
  doc["iou"] = optional_value(m.iou);
  doc["acc"] = optional_value(m.acc);
  doc["spe"] = optional_value(m.spe);
  doc["sen"] = optional_value(m.sen);
  doc["f1"] = optional_value(m.f1);
  doc["bce"] = loss.bce;
  doc["dice"] = loss.dice;
  doc["bce_dice"] = loss.total;
  auto undefined = ordered_json::array();
  for (const auto& [name, value] : {std::pair{"iou", m.iou}, std::pair{"acc", m.acc},
                                    std::pair{"spe", m.spe}, std::pair{"sen", m.sen},
                                    std::pair{"f1", m.f1}}) {
    if (!value) undefined.push_back(name);
  }
  doc["undefined"] = std::move(undefined);
  return doc.dump(2) + "\n";
}

}  // namespace vesselq
