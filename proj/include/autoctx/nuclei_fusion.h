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

#ifndef AUTOCTX_NUCLEI_FUSION_H_
#define AUTOCTX_NUCLEI_FUSION_H_

#include <string_view>

#include "autoctx/types.h"

namespace autoctx {

// What to do with an instance whose pixels are all background in the class
// map.
enum class VoteFallback { kKeepOriginal, kLowestForeground };

VoteFallback ParseVoteFallback(std::string_view name);

struct VoteParams {
  VoteFallback fallback = VoteFallback::kKeepOriginal;
};

struct BorderParams {
  int margin = 16;  // band = pixels closer than `margin` to any image edge
};

// Reassigns every instance the most frequent non-background class of its
// pixels in `class_map` (ties go to the lower class index). Instance geometry
// is left untouched.
InstanceMap MajorityVoteClassify(const InstanceMap& inst,
                                 const LabelMap& class_map,
                                 const VoteParams& params = {});

// Replaces instance results inside the border band with class-map results.
// Band pixels of existing instances are erased; each 8-connected component of
// non-background class-map pixels inside the band then either joins the
// surviving instance it touches most (lowest id on equal contact) or becomes a
// new instance labeled with its majority class. Interior pixels never change.
InstanceMap BorderCorrect(const InstanceMap& inst, const LabelMap& class_map,
                          const BorderParams& params = {});

// Per-pixel class of the covering instance (0 where no instance).
LabelMap RasterizeInstanceClasses(const InstanceMap& inst);

}  // namespace autoctx

#endif  // AUTOCTX_NUCLEI_FUSION_H_
