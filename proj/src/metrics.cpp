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

#include "vesselq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "vesselq/error.hpp"
#include "vesselq/image_io.hpp"

namespace vesselq {

namespace {

void require_same_dims(int w1, int h1, int w2, int h2) {
  if (w1 != w2 || h1 != h2) {
    throw Error(ErrorCode::kInvalidInput, "dimension mismatch: " + std::to_string(w1) + "x" +
                                              std::to_string(h1) + " vs " + std::to_string(w2) +
                                              "x" + std::to_string(h2));
  }
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
  require_same_dims(pred.width(), pred.height(), truth.width(), truth.height());
  ConfusionCounts c;
  const auto p = pred.data();
  const auto t = truth.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      t[i] ? ++c.tp : ++c.fp;
    } else {
      t[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

SegMetrics seg_metrics(const ConfusionCounts& c) {
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  const auto tn = static_cast<double>(c.tn);
  return {
      ratio(tp, tp + fp + fn),
      ratio(tp + tn, tp + tn + fp + fn),
      ratio(tn, tn + fp),
      ratio(tp, tp + fn),
      ratio(2.0 * tp, 2.0 * tp + fp + fn),
  };
}

BceDiceLoss bce_dice(const ProbMask& pred, const BinaryMask& truth, double lambda1,
                     double lambda2) {
  require_same_dims(pred.width(), pred.height(), truth.width(), truth.height());
  const auto probs = pred.values();
  const auto labels = truth.data();
  double log_sum = 0.0;
  std::size_t truth_count = 0;
  std::size_t pred_count = 0;
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kBceEpsilon, 1.0 - kBceEpsilon);
    const bool y = labels[i] != 0;
    log_sum += y ? std::log(p) : std::log1p(-p);
    const bool predicted = probs[i] >= 0.5;
    truth_count += y;
    pred_count += predicted;
    overlap += y && predicted;
  }
  BceDiceLoss out;
  out.bce = -log_sum / static_cast<double>(probs.size());
  const std::size_t denom = truth_count + pred_count;
  // (|X| + |Y| - 2|X n Y|) / (|X| + |Y|) keeps the ratio exactly rounded.
  out.dice = denom == 0 ? 0.0
                        : static_cast<double>(denom - 2 * overlap) / static_cast<double>(denom);
  out.total = lambda1 * out.bce + lambda2 * out.dice;
  return out;
}

namespace {

/// Minimum-cost assignment of every row of a square cost matrix (Hungarian
/// method with potentials). Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t col0 = 0;
    std::vector<double> slack(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r = owner[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double reduced = cost[r - 1][c - 1] - u[r] - v[c];
        if (reduced < slack[c]) {
          slack[c] = reduced;
          way[c] = col0;
        }
        if (slack[c] < delta) {
          delta = slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[owner[c]] += delta;
          v[c] -= delta;
        } else {
          slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const std::size_t prev = way[col0];
      owner[col0] = owner[prev];
      col0 = prev;
    } while (col0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t c = 1; c <= n; ++c) assignment[owner[c] - 1] = c - 1;
  return assignment;
}

}  // namespace

MatchResult match_points(std::span<const PixelPoint> predicted,
                         std::span<const PixelPoint> labeled, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::kInvalidInput, "gamma must be > 0");
  MatchResult out;
  const std::size_t n = std::max(predicted.size(), labeled.size());
  bool any_edge = false;
  // Each admissible pair earns a bonus larger than any sum of admissible
  // distances, so the optimum first maximizes pairs, then minimizes distance.
  const double bonus =
      gamma * static_cast<double>(std::min(predicted.size(), labeled.size()) + 1);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = 0; j < labeled.size(); ++j) {
      const double d = distance(predicted[i], labeled[j]);
      if (d < gamma) {
        cost[i][j] = d - bonus;
        any_edge = true;
      }
    }
  }
  if (any_edge) {
    const auto assignment = solve_assignment(cost);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      const std::size_t j = assignment[i];
      if (j < labeled.size() && distance(predicted[i], labeled[j]) < gamma) {
        out.matched_pairs.emplace_back(i, j);
      }
    }
  }
  out.tp = out.matched_pairs.size();
  out.fp = predicted.size() - out.tp;
  out.fn = labeled.size() - out.tp;
  return out;
}

MatchResult match_stenoses(std::span<const StenosisFinding> predicted,
                           std::span<const PixelPoint> labeled, double gamma) {
  std::vector<PixelPoint> points;
  points.reserve(predicted.size());
  for (const auto& f : predicted) points.push_back(f.location);
  return match_points(points, labeled, gamma);
}

DetectionRates detection_rates(std::size_t tp, std::size_t fp, std::size_t fn) {
  const auto t = static_cast<double>(tp);
  return {ratio(t, t + static_cast<double>(fn)), ratio(t, t + static_cast<double>(fp))};
}

DetectionRates detection_rates(const MatchResult& m) { return detection_rates(m.tp, m.fp, m.fn); }

CountErrors count_errors(std::span<const CountPair> series) {
  if (series.empty()) throw Error(ErrorCode::kInvalidInput, "count series is empty");
  double abs_sum = 0.0;
  double rel_sum = 0.0;
  std::size_t rel_n = 0;
  for (const auto& [nf, nl] : series) {
    const double diff = static_cast<double>(nf) - static_cast<double>(nl);
    abs_sum += diff * diff;
    if (nl > 0) {
      const double rel = diff / static_cast<double>(nl);
      rel_sum += rel * rel;
      ++rel_n;
    }
  }
  CountErrors out;
  out.armse = std::sqrt(abs_sum / static_cast<double>(series.size()));
  if (rel_n > 0) out.rrmse = std::sqrt(rel_sum / static_cast<double>(rel_n));
  out.rrmse_excluded = series.size() - rel_n;
  return out;
}

Annotations parse_annotations(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("annotation JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidInput, "annotation JSON must be an object");

  Annotations out;
  for (const auto& [name, points] : doc.items()) {
    if (!points.is_array()) {
      throw Error(ErrorCode::kInvalidInput, "annotations for '" + name + "' must be an array");
    }
    auto& list = out[name];
    for (const auto& item : points) {
      if (!item.is_object() || !item.contains("x") || !item.contains("y") ||
          !item["x"].is_number_integer() || !item["y"].is_number_integer()) {
        throw Error(ErrorCode::kInvalidInput,
                    "annotation entries for '" + name + "' need integer x and y");
      }
      LabeledPoint lp{{item["x"].get<int>(), item["y"].get<int>()}, std::nullopt, std::nullopt};
      if (item.contains("grade") && !item["grade"].is_null()) {
        if (!item["grade"].is_string()) {
          throw Error(ErrorCode::kInvalidInput, "grade must be a string");
        }
        lp.grade = parse_grade(item["grade"].get<std::string>());
        if (!lp.grade) {
          throw Error(ErrorCode::kInvalidInput,
                      "unknown grade '" + item["grade"].get<std::string>() + "'");
        }
      }
      if (item.contains("eta") && item["eta"].is_number()) lp.eta = item["eta"].get<double>();
      list.push_back(lp);
    }
  }
  return out;
}

Annotations load_annotations(const std::string& path) {
  const auto bytes = read_file(path);
  return parse_annotations(std::string(bytes.begin(), bytes.end()));
}

std::string annotations_to_json(const Annotations& annotations) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [name, points] : annotations) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& p : points) {
      nlohmann::ordered_json item{{"x", p.point.x}, {"y", p.point.y}};
      if (p.grade) item["grade"] = std::string(to_string(*p.grade));
      if (p.eta) item["eta"] = std::round(*p.eta * 1e4) / 1e4;
      list.push_back(std::move(item));
    }
    doc[name] = std::move(list);
  }
  return doc.dump(2) + "\n";
}

std::vector<PixelPoint> points_of(std::span<const LabeledPoint> labels) {
  std::vector<PixelPoint> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.point);
  return out;
}

}  // namespace vesselq
