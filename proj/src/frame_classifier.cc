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

#include "autoctx/frame_classifier.h"

#include <string>

#include "autoctx/error.h"
#include "autoctx/image_io.h"
#include "autoctx/schemes.h"

namespace autoctx {

const char* FrameTypeName(FrameType type) {
  return type == FrameType::kPrimary ? "primary" : "metastatic";
}

FrameType ParseFrameType(std::string_view name) {
  if (name == "primary") return FrameType::kPrimary;
  if (name == "metastatic") return FrameType::kMetastatic;
  throw ValidationError("unknown frame type '" + std::string(name) + "'");
}

FrameType ClassifyFrame(const LabelMap& ext_map,
                        const ClassifierParams& params) {
  if (ext_map.scheme != kPumaExt11) {
    throw ValidationError("frame classification needs a puma_ext11 map, got '" +
                          ext_map.scheme + "'");
  }
  if (params.epidermis_min_pixels < 1) {
    throw ValidationError("epidermis_min_pixels must be >= 1");
  }
  ValidateLabelMap(ext_map);

  const std::vector<std::int64_t> hist = ClassHistogram(ext_map);
  if (params.epidermis_rule &&
      hist[tissue::kEpidermis] >= params.epidermis_min_pixels) {
    return FrameType::kPrimary;
  }
  auto groups = GroupCounts(ext_map);
  return groups[ClassGroup::kPrimary] > groups[ClassGroup::kMetastatic]
             ? FrameType::kPrimary
             : FrameType::kMetastatic;
}

}  // namespace autoctx
