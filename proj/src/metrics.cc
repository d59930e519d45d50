// Copyright 2026 The autoctx Authors.
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

#include "autoctx/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "autoctx/components.h"
#include "autoctx/error.h"
#include "autoctx/image_io.h"
#include "autoctx/schemes.h"

namespace autoctx {

namespace {

template <typename Map>
const ClassScheme& CheckAligned(std::span<const Map> pred,
                                std::span<const Map> gt) {
  if (pred.empty() || gt.empty()) {
    throw UsageError("metrics need at least one image");
  }
  if (pred.size() != gt.size()) {
    throw UsageError("prediction and ground-truth lists differ in length");
  }
  const std::string& scheme = gt.front().scheme;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].scheme != scheme || gt[i].scheme != scheme) {
      throw ValidationError("all maps must share scheme '" + scheme + "'");
    }
    if (pred[i].height != gt[i].height || pred[i].width != gt[i].width) {
      throw ValidationError("image " + std::to_string(i) +
                            ": prediction and ground truth differ in shape");
    }
  }
  return GetScheme(scheme);
}

void FinishReport(MetricReport& report) {
  if (report.per_class.empty()) {
    report.aggregate.reset();
    return;
  }
  std::vector<double> scores;
  for (const auto& c : report.per_class) scores.push_back(c.score);
  report.aggregate = MacroMean(scores);
}

void NoteExclusion(MetricReport& report) {
  if (!report.excluded.empty()) {
    report.notes.push_back(
        "classes without support on either side are excluded from the mean");
  }
}

std::uint64_t PairKey(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

const ClassScore* MetricReport::Find(std::string_view class_name) const {
  for (const auto& c : per_class) {
    if (c.name == class_name) return &c;
  }
  return nullptr;
}

nlohmann::ordered_json ReportToJson(const MetricReport& report) {
  nlohmann::ordered_json doc;
  doc["metric"] = report.metric;
  doc["scheme"] = report.scheme;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& c : report.per_class) {
    per_class[c.name] = c.score;
    nlohmann::ordered_json cc = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.counts) cc[k] = v;
    counts[c.name] = std::move(cc);
  }
  doc["per_class"] = std::move(per_class);
  if (report.aggregate) {
    doc["aggregate"] = *report.aggregate;
  } else {
    doc["aggregate"] = nullptr;
  }
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  doc["params"] = std::move(params);
  doc["counts"] = std::move(counts);
  doc["excluded_classes"] = report.excluded;
  doc["notes"] = report.notes;
  return doc;
}

double MacroMean(std::span<const double> scores) {
  if (scores.empty()) throw UsageError("mean of zero scores");
  return std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
}

MetricReport MicroDice(std::span<const LabelMap> pred,
                       std::span<const LabelMap> gt) {
  const ClassScheme& scheme = CheckAligned(pred, gt);
  const int k = scheme.size();
  std::vector<std::int64_t> intersection(k, 0);
  std::vector<std::int64_t> sizes(k, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ValidateLabelMap(pred[i]);
    ValidateLabelMap(gt[i]);
    for (std::size_t p = 0; p < pred[i].data.size(); ++p) {
      const std::uint16_t a = pred[i].data[p];
      const std::uint16_t b = gt[i].data[p];
      ++sizes[a];
      ++sizes[b];
      if (a == b) ++intersection[a];
    }
  }
  MetricReport report;
  report.metric = "micro_dice";
  report.scheme = scheme.id();
  for (int c = 1; c < k; ++c) {
    if (sizes[c] == 0) {
      report.excluded.push_back(scheme.at(c).name);
      continue;
    }
    report.per_class.push_back(
        {c, scheme.at(c).name,
         2.0 * static_cast<double>(intersection[c]) / static_cast<double>(sizes[c]),
         {{"intersection", static_cast<double>(intersection[c])},
          {"pred_plus_gt", static_cast<double>(sizes[c])}}});
  }
  NoteExclusion(report);
  FinishReport(report);
  return report;
}

DetectionMatch MatchDetections(const InstanceMap& pred, const InstanceMap& gt,
                               double radius) {
  if (!(radius >= 0.0)) throw ValidationError("match radius must be >= 0");
  ValidateInstanceMap(pred);
  ValidateInstanceMap(gt);
  if (pred.scheme != gt.scheme) {
    throw ValidationError("prediction and ground truth differ in scheme");
  }
  const int k = GetScheme(gt.scheme).size();
  const auto pred_c = Centroids(pred);
  const auto gt_c = Centroids(gt);

  struct Candidate {
    double d2;
    std::uint32_t pred_id;
    std::uint32_t gt_id;
  };
  std::vector<Candidate> candidates;
  const double r2 = radius * radius;
  for (const auto& [pid, pc] : pred_c) {
    const int pcls = pred.classes.at(pid);
    for (const auto& [gid, gc] : gt_c) {
      if (gt.classes.at(gid) != pcls) continue;
      const double dr = pc.row - gc.row;
      const double dc = pc.col - gc.col;
      const double d2 = dr * dr + dc * dc;
      if (d2 <= r2) candidates.push_back({d2, pid, gid});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.d2, a.pred_id, a.gt_id) <
                     std::tie(b.d2, b.pred_id, b.gt_id);
            });

  DetectionMatch match{{}, std::vector<std::int64_t>(k, 0),
                       std::vector<std::int64_t>(k, 0),
                       std::vector<std::int64_t>(k, 0)};
  std::map<std::uint32_t, bool> pred_used;
  std::map<std::uint32_t, bool> gt_used;
  for (const Candidate& cand : candidates) {
    if (pred_used[cand.pred_id] || gt_used[cand.gt_id]) continue;
    pred_used[cand.pred_id] = true;
    gt_used[cand.gt_id] = true;
    match.pairs.push_back({cand.pred_id, cand.gt_id, std::sqrt(cand.d2)});
    ++match.tp[gt.classes.at(cand.gt_id)];
  }
  for (const auto& [pid, pc] : pred_c) {
    if (!pred_used[pid]) ++match.fp[pred.classes.at(pid)];
  }
  for (const auto& [gid, gc] : gt_c) {
    if (!gt_used[gid]) ++match.fn[gt.classes.at(gid)];
  }
  return match;
}

MetricReport DetectionF1(std::span<const InstanceMap> pred,
                         std::span<const InstanceMap> gt, double radius) {
  const ClassScheme& scheme = CheckAligned(pred, gt);
  const int k = scheme.size();
  std::vector<std::int64_t> tp(k, 0), fp(k, 0), fn(k, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const DetectionMatch m = MatchDetections(pred[i], gt[i], radius);
    for (int c = 0; c < k; ++c) {
      tp[c] += m.tp[c];
      fp[c] += m.fp[c];
      fn[c] += m.fn[c];
    }
  }
  MetricReport report;
  report.metric = "detection_f1";
  report.scheme = scheme.id();
  report.params["radius"] = radius;
  for (int c = 1; c < k; ++c) {
    const std::int64_t denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom == 0) {
      report.excluded.push_back(scheme.at(c).name);
      continue;
    }
    report.per_class.push_back(
        {c, scheme.at(c).name,
         2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom),
         {{"tp", static_cast<double>(tp[c])},
          {"fp", static_cast<double>(fp[c])},
          {"fn", static_cast<double>(fn[c])}}});
  }
  NoteExclusion(report);
  FinishReport(report);
  return report;
}

PqStats ComputePqStats(const InstanceMap& pred, const InstanceMap& gt,
                       double iou_threshold) {
  if (!(iou_threshold >= 0.5 && iou_threshold < 1.0)) {
    throw ValidationError("IoU threshold must lie in [0.5, 1)");
  }
  ValidateInstanceMap(pred);
  ValidateInstanceMap(gt);
  if (pred.scheme != gt.scheme || pred.height != gt.height ||
      pred.width != gt.width) {
    throw ValidationError("prediction and ground truth differ in scheme or shape");
  }
  const int k = GetScheme(gt.scheme).size();
  const auto pred_area = InstanceAreas(pred);
  const auto gt_area = InstanceAreas(gt);

  std::unordered_map<std::uint64_t, std::int64_t> overlap;
  for (std::size_t p = 0; p < pred.ids.size(); ++p) {
    if (pred.ids[p] != 0 && gt.ids[p] != 0) {
      ++overlap[PairKey(pred.ids[p], gt.ids[p])];
    }
  }

  PqStats stats;
  stats.tp.assign(k, 0);
  stats.fp.assign(k, 0);
  stats.fn.assign(k, 0);
  stats.iou_sum.assign(k, 0.0);
  stats.gt_instances.assign(k, 0);

  std::map<std::uint32_t, bool> pred_matched;
  std::map<std::uint32_t, bool> gt_matched;
  std::vector<std::pair<std::uint64_t, std::int64_t>> ordered(overlap.begin(),
                                                              overlap.end());
  std::sort(ordered.begin(), ordered.end());
  for (const auto& [key, inter] : ordered) {
    const auto pid = static_cast<std::uint32_t>(key >> 32);
    const auto gid = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
    const int cls = gt.classes.at(gid);
    if (pred.classes.at(pid) != cls) continue;
    const double iou =
        static_cast<double>(inter) /
        static_cast<double>(pred_area.at(pid) + gt_area.at(gid) - inter);
    if (iou <= iou_threshold) continue;
    stats.matches.push_back({pid, gid, iou});
    pred_matched[pid] = true;
    gt_matched[gid] = true;
    ++stats.tp[cls];
    stats.iou_sum[cls] += iou;
  }
  for (const auto& [pid, area] : pred_area) {
    if (!pred_matched[pid]) ++stats.fp[pred.classes.at(pid)];
  }
  for (const auto& [gid, area] : gt_area) {
    ++stats.gt_instances[gt.classes.at(gid)];
    if (!gt_matched[gid]) ++stats.fn[gt.classes.at(gid)];
  }
  return stats;
}

namespace {

double PqFromCounts(double iou_sum, std::int64_t tp, std::int64_t fp,
                    std::int64_t fn) {
  const double denom = static_cast<double>(tp) + 0.5 * static_cast<double>(fp) +
                       0.5 * static_cast<double>(fn);
  return denom > 0.0 ? iou_sum / denom : 0.0;
}

}  // namespace

MetricReport PanopticQuality(std::span<const InstanceMap> pred,
                             std::span<const InstanceMap> gt,
                             double iou_threshold) {
  const ClassScheme& scheme = CheckAligned(pred, gt);
  const int k = scheme.size();
  std::vector<double> pq_sum(k, 0.0);
  std::vector<std::int64_t> images(k, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const PqStats s = ComputePqStats(pred[i], gt[i], iou_threshold);
    for (int c = 1; c < k; ++c) {
      if (s.gt_instances[c] == 0) continue;
      pq_sum[c] += PqFromCounts(s.iou_sum[c], s.tp[c], s.fp[c], s.fn[c]);
      ++images[c];
    }
  }
  MetricReport report;
  report.metric = "panoptic_quality";
  report.scheme = scheme.id();
  report.params["iou_threshold"] = iou_threshold;
  report.notes.push_back(
      "class PQ averages only images whose ground truth contains the class");
  for (int c = 1; c < k; ++c) {
    if (images[c] == 0) {
      report.excluded.push_back(scheme.at(c).name);
      continue;
    }
    report.per_class.push_back({c, scheme.at(c).name,
                                pq_sum[c] / static_cast<double>(images[c]),
                                {{"images", static_cast<double>(images[c])}}});
  }
  NoteExclusion(report);
  FinishReport(report);
  return report;
}

MetricReport MicroPanopticQuality(std::span<const InstanceMap> pred,
                                  std::span<const InstanceMap> gt,
                                  double iou_threshold) {
  const ClassScheme& scheme = CheckAligned(pred, gt);
  const int k = scheme.size();
  std::vector<std::int64_t> tp(k, 0), fp(k, 0), fn(k, 0);
  std::vector<double> iou_sum(k, 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const PqStats s = ComputePqStats(pred[i], gt[i], iou_threshold);
    for (int c = 0; c < k; ++c) {
      tp[c] += s.tp[c];
      fp[c] += s.fp[c];
      fn[c] += s.fn[c];
      iou_sum[c] += s.iou_sum[c];
    }
  }
  MetricReport report;
  report.metric = "micro_pq";
  report.scheme = scheme.id();
  report.params["iou_threshold"] = iou_threshold;
  for (int c = 1; c < k; ++c) {
    if (tp[c] + fp[c] + fn[c] == 0) {
      report.excluded.push_back(scheme.at(c).name);
      continue;
    }
    report.per_class.push_back(
        {c, scheme.at(c).name, PqFromCounts(iou_sum[c], tp[c], fp[c], fn[c]),
         {{"tp", static_cast<double>(tp[c])},
          {"fp", static_cast<double>(fp[c])},
          {"fn", static_cast<double>(fn[c])},
          {"iou_sum", iou_sum[c]}}});
  }
  NoteExclusion(report);
  FinishReport(report);
  return report;
}

double MeanTrackScore(double dice_mean, double f1_mean) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(dice_mean) || !in_unit(f1_mean)) {
    throw ValidationError("track scores must lie in [0,1]");
  }
  return 0.5 * (dice_mean + f1_mean);
}

}  // namespace autoctx
