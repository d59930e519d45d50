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

#ifndef AUTOCTX_METRICS_H_
#define AUTOCTX_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autoctx/types.h"
#include "json.hpp"

namespace autoctx {

struct ClassScore {
  int class_id = 0;
  std::string name;
  double score = 0.0;
  std::map<std::string, double> counts;
};

// Per-class scores plus their mean. Classes without support (no pixels or
// no instances on either side) are listed in `excluded` and left out of the
// mean.
struct MetricReport {
  std::string metric;
  std::string scheme;
  std::vector<ClassScore> per_class;
  std::vector<std::string> excluded;
  std::optional<double> aggregate;
  std::map<std::string, double> params;
  std::vector<std::string> notes;

  const ClassScore* Find(std::string_view class_name) const;
};

nlohmann::ordered_json ReportToJson(const MetricReport& report);

// Arithmetic mean of per-class scores. Throws UsageError when empty.
double MacroMean(std::span<const double> scores);

// Dice per foreground class after pooling every image into one canvas:
// 2 * sum(|pred & gt|) / sum(|pred| + |gt|).
MetricReport MicroDice(std::span<const LabelMap> pred,
                       std::span<const LabelMap> gt);

inline constexpr double kDefaultMatchRadius = 15.0;
inline constexpr double kDefaultIouThreshold = 0.5;

struct MatchedPair {
  std::uint32_t pred_id = 0;
  std::uint32_t gt_id = 0;
  double distance = 0.0;
};

struct DetectionMatch {
  std::vector<MatchedPair> pairs;
  // Indexed by class id.
  std::vector<std::int64_t> tp;
  std::vector<std::int64_t> fp;
  std::vector<std::int64_t> fn;
};

// Greedy same-class centroid matching for one image: candidate pairs within
// `radius` are taken in ascending distance, ties by (pred id, gt id).
DetectionMatch MatchDetections(const InstanceMap& pred, const InstanceMap& gt,
                               double radius = kDefaultMatchRadius);

// Per-class detection F1 from TP/FP/FN summed over images; the aggregate is
// the mean over classes with any support.
MetricReport DetectionF1(std::span<const InstanceMap> pred,
                         std::span<const InstanceMap> gt,
                         double radius = kDefaultMatchRadius);

struct PqPair {
  std::uint32_t pred_id = 0;
  std::uint32_t gt_id = 0;
  double iou = 0.0;
};

struct PqStats {
  std::vector<PqPair> matches;
  // Indexed by class id.
  std::vector<std::int64_t> tp;
  std::vector<std::int64_t> fp;
  std::vector<std::int64_t> fn;
  std::vector<double> iou_sum;
  std::vector<std::int64_t> gt_instances;
};

// Same-class instance matches with IoU above `iou_threshold` (>= 0.5, so a
// match is unique) for one image.
PqStats ComputePqStats(const InstanceMap& pred, const InstanceMap& gt,
                       double iou_threshold = kDefaultIouThreshold);

// Class PQ averaged over the images in which the class occurs in ground truth.
MetricReport PanopticQuality(std::span<const InstanceMap> pred,
                             std::span<const InstanceMap> gt,
                             double iou_threshold = kDefaultIouThreshold);

// Class PQ computed once on the pooled matches of all images.
MetricReport MicroPanopticQuality(std::span<const InstanceMap> pred,
                                  std::span<const InstanceMap> gt,
                                  double iou_threshold = kDefaultIouThreshold);

// Mean of the tissue micro Dice and the nuclei macro F1, both in [0,1].
double MeanTrackScore(double dice_mean, double f1_mean);

}  // namespace autoctx

#endif  // AUTOCTX_METRICS_H_
