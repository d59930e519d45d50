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

#ifndef AUTOCTX_FRAME_CLASSIFIER_H_
#define AUTOCTX_FRAME_CLASSIFIER_H_

#include <cstdint>
#include <string_view>

#include "autoctx/types.h"

namespace autoctx {

enum class FrameType { kPrimary, kMetastatic };

const char* FrameTypeName(FrameType type);
FrameType ParseFrameType(std::string_view name);

struct ClassifierParams {
  // Minimum primary-epidermis pixels for the epidermis rule to fire.
  std::int64_t epidermis_min_pixels = 1;
  // When false only the primary-vs-metastatic pixel majority rule runs.
  bool epidermis_rule = true;
};

// Decides the origin of a frame from its 11-class (puma_ext11) segmentation:
//   1. any primary epidermis (>= epidermis_min_pixels) -> primary;
//   2. more primary-group than metastatic-group pixels -> primary;
//   3. otherwise metastatic, including ties.
FrameType ClassifyFrame(const LabelMap& ext_map,
                        const ClassifierParams& params = {});

}  // namespace autoctx

#endif  // AUTOCTX_FRAME_CLASSIFIER_H_
