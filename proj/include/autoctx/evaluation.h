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

#ifndef AUTOCTX_EVALUATION_H_
#define AUTOCTX_EVALUATION_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autoctx/metrics.h"
#include "autoctx/schemes.h"
#include "json.hpp"

namespace autoctx {

enum class MetricKind { kDice, kF1, kPq, kMicroPq };

MetricKind ParseMetricKind(std::string_view name);

struct EvalOptions {
  std::string tissue_scheme = kPumaTissue6;
  double radius = kDefaultMatchRadius;
  double iou_threshold = kDefaultIouThreshold;
};

// Frame directories hold one subdirectory per frame id containing
// tissue.png and/or nuclei.png + nuclei.json.
inline constexpr char kTissueFile[] = "tissue.png";
inline constexpr char kNucleiFile[] = "nuclei.png";
inline constexpr char kNucleiClassesFile[] = "nuclei.json";

// Sorted frame ids present in both directories. Throws UsageError when the
// ground-truth directory is empty or either side has orphans.
std::vector<std::string> AlignedFrameIds(const std::filesystem::path& pred_dir,
                                         const std::filesystem::path& gt_dir);

MetricReport EvaluateDirs(MetricKind kind, const std::filesystem::path& pred_dir,
                          const std::filesystem::path& gt_dir,
                          const EvalOptions& options = {});

// Dice, F1, PQ and micro PQ plus the track mean, whichever the inputs allow.
// Either pair of spans may be empty.
nlohmann::ordered_json CombinedMetrics(std::span<const LabelMap> tissue_pred,
                                       std::span<const LabelMap> tissue_gt,
                                       std::span<const InstanceMap> nuclei_pred,
                                       std::span<const InstanceMap> nuclei_gt,
                                       const EvalOptions& options);

nlohmann::ordered_json EvalReport(const std::filesystem::path& pred_dir,
                                  const std::filesystem::path& gt_dir,
                                  const EvalOptions& options = {});

}  // namespace autoctx

#endif  // AUTOCTX_EVALUATION_H_
