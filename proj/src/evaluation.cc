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

#include "autoctx/evaluation.h"

#include <algorithm>
#include <set>

#include "autoctx/error.h"
#include "autoctx/image_io.h"

namespace autoctx {

namespace fs = std::filesystem;

namespace {

std::set<std::string> FrameDirs(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw UsageError(dir.string() + " is not a directory");
  }
  std::set<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) ids.insert(entry.path().filename().string());
  }
  return ids;
}

bool HasTissue(const fs::path& frame_dir) {
  return fs::exists(frame_dir / kTissueFile);
}

bool HasNuclei(const fs::path& frame_dir) {
  return fs::exists(frame_dir / kNucleiFile) &&
         fs::exists(frame_dir / kNucleiClassesFile);
}

struct LoadedFrames {
  std::vector<LabelMap> tissue_pred, tissue_gt;
  std::vector<InstanceMap> nuclei_pred, nuclei_gt;
};

LoadedFrames LoadFrames(const fs::path& pred_dir, const fs::path& gt_dir,
                        const EvalOptions& options, bool want_tissue,
                        bool want_nuclei) {
  LoadedFrames out;
  for (const std::string& id : AlignedFrameIds(pred_dir, gt_dir)) {
    const fs::path p = pred_dir / id;
    const fs::path g = gt_dir / id;
    if (want_tissue && HasTissue(g)) {
      if (!HasTissue(p)) {
        throw UsageError("frame " + id + ": ground truth has tissue, prediction does not");
      }
      out.tissue_gt.push_back(ReadLabelPng(g / kTissueFile, options.tissue_scheme));
      out.tissue_pred.push_back(ReadLabelPng(p / kTissueFile, options.tissue_scheme));
    }
    if (want_nuclei && HasNuclei(g)) {
      if (!HasNuclei(p)) {
        throw UsageError("frame " + id + ": ground truth has nuclei, prediction does not");
      }
      out.nuclei_gt.push_back(ReadInstances(g / kNucleiFile, g / kNucleiClassesFile));
      out.nuclei_pred.push_back(ReadInstances(p / kNucleiFile, p / kNucleiClassesFile));
    }
  }
  return out;
}

}  // namespace

MetricKind ParseMetricKind(std::string_view name) {
  if (name == "dice") return MetricKind::kDice;
  if (name == "f1") return MetricKind::kF1;
  if (name == "pq") return MetricKind::kPq;
  if (name == "micropq") return MetricKind::kMicroPq;
  throw UsageError("unknown metric '" + std::string(name) + "'");
}

std::vector<std::string> AlignedFrameIds(const fs::path& pred_dir,
                                         const fs::path& gt_dir) {
  const std::set<std::string> gt = FrameDirs(gt_dir);
  if (gt.empty()) throw UsageError("ground-truth directory " + gt_dir.string() + " is empty");
  const std::set<std::string> pred = FrameDirs(pred_dir);
  std::vector<std::string> orphans;
  for (const auto& id : pred) {
    if (!gt.contains(id)) orphans.push_back("pred:" + id);
  }
  for (const auto& id : gt) {
    if (!pred.contains(id)) orphans.push_back("gt:" + id);
  }
  if (!orphans.empty()) {
    std::string msg = "frame ids do not align:";
    for (const auto& o : orphans) msg += " " + o;
    throw UsageError(msg);
  }
  return {gt.begin(), gt.end()};
}

MetricReport EvaluateDirs(MetricKind kind, const fs::path& pred_dir,
                          const fs::path& gt_dir, const EvalOptions& options) {
  const bool tissue = kind == MetricKind::kDice;
  LoadedFrames frames = LoadFrames(pred_dir, gt_dir, options, tissue, !tissue);
  switch (kind) {
    case MetricKind::kDice:
      if (frames.tissue_gt.empty()) throw UsageError("no tissue ground truth found");
      return MicroDice(frames.tissue_pred, frames.tissue_gt);
    case MetricKind::kF1:
    case MetricKind::kPq:
    case MetricKind::kMicroPq:
      if (frames.nuclei_gt.empty()) throw UsageError("no nuclei ground truth found");
      if (kind == MetricKind::kF1) {
        return DetectionF1(frames.nuclei_pred, frames.nuclei_gt, options.radius);
      }
      if (kind == MetricKind::kPq) {
        return PanopticQuality(frames.nuclei_pred, frames.nuclei_gt,
                               options.iou_threshold);
      }
      return MicroPanopticQuality(frames.nuclei_pred, frames.nuclei_gt,
                                  options.iou_threshold);
  }
  throw UsageError("unknown metric");
}

nlohmann::ordered_json CombinedMetrics(std::span<const LabelMap> tissue_pred,
                                       std::span<const LabelMap> tissue_gt,
                                       std::span<const InstanceMap> nuclei_pred,
                                       std::span<const InstanceMap> nuclei_gt,
                                       const EvalOptions& options) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  std::optional<double> dice;
  std::optional<double> f1;
  if (!tissue_gt.empty()) {
    MetricReport r = MicroDice(tissue_pred, tissue_gt);
    dice = r.aggregate;
    doc["micro_dice"] = ReportToJson(r);
  }
  if (!nuclei_gt.empty()) {
    MetricReport r = DetectionF1(nuclei_pred, nuclei_gt, options.radius);
    f1 = r.aggregate;
    doc["detection_f1"] = ReportToJson(r);
    doc["panoptic_quality"] = ReportToJson(
        PanopticQuality(nuclei_pred, nuclei_gt, options.iou_threshold));
    doc["micro_pq"] = ReportToJson(
        MicroPanopticQuality(nuclei_pred, nuclei_gt, options.iou_threshold));
  }
  if (dice && f1) doc["mean"] = MeanTrackScore(*dice, *f1);
  return doc;
}

nlohmann::ordered_json EvalReport(const fs::path& pred_dir,
                                  const fs::path& gt_dir,
                                  const EvalOptions& options) {
  LoadedFrames frames = LoadFrames(pred_dir, gt_dir, options, true, true);
  if (frames.tissue_gt.empty() && frames.nuclei_gt.empty()) {
    throw UsageError("ground-truth directory holds no tissue or nuclei files");
  }
  return CombinedMetrics(frames.tissue_pred, frames.tissue_gt,
                         frames.nuclei_pred, frames.nuclei_gt, options);
}

}  // namespace autoctx
