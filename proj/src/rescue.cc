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

#include "autoctx/rescue.h"

#include <string>
#include <vector>

#include "autoctx/components.h"
#include "autoctx/error.h"
#include "autoctx/image_io.h"

namespace autoctx {

LabelMap NecrosisRescue(const LabelMap& stage1, const LabelMap& stage4,
                        const RescueParams& params) {
  ValidateLabelMap(stage1);
  ValidateLabelMap(stage4);
  if (stage1.height != stage4.height || stage1.width != stage4.width) {
    throw ValidationError("stage-1 and stage-4 maps differ in shape");
  }
  if (stage1.scheme != stage4.scheme) {
    throw ValidationError("stage-1 and stage-4 maps differ in scheme");
  }
  const ClassScheme& scheme = GetScheme(stage4.scheme);
  if (params.target_class <= 0 || params.target_class >= scheme.size() ||
      scheme.at(params.target_class).group == ClassGroup::kBackground) {
    throw ValidationError("rescue target " +
                          std::to_string(params.target_class) +
                          " is not a foreground class");
  }
  if (!params.enabled) return stage4;

  const auto target = static_cast<std::uint16_t>(params.target_class);
  std::vector<std::uint8_t> mask(stage1.PixelCount());
  for (std::size_t p = 0; p < mask.size(); ++p) {
    mask[p] = stage1.data[p] == target ? 1 : 0;
  }
  const ComponentLabels comps =
      LabelComponents(mask, stage1.height, stage1.width);

  std::vector<bool> overlaps(comps.count + 1, false);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (comps.ids[p] != 0 && stage4.data[p] == target) {
      overlaps[comps.ids[p]] = true;
    }
  }
  LabelMap out = stage4;
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (overlaps[comps.ids[p]]) out.data[p] = target;
  }
  return out;
}

}  // namespace autoctx
