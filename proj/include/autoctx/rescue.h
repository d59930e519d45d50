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

#ifndef AUTOCTX_RESCUE_H_
#define AUTOCTX_RESCUE_H_

#include "autoctx/schemes.h"
#include "autoctx/types.h"

namespace autoctx {

struct RescueParams {
  bool enabled = true;
  int target_class = tissue::kNecrosis;
};

// Restores under-segmented regions of `target_class` in the final tissue map.
// Each 8-connected stage-1 component of the target class that overlaps the
// stage-4 target class by at least one pixel is copied into the result whole.
LabelMap NecrosisRescue(const LabelMap& stage1, const LabelMap& stage4,
                        const RescueParams& params = {});

}  // namespace autoctx

#endif  // AUTOCTX_RESCUE_H_
