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

#ifndef AUTOCTX_COMPONENTS_H_
#define AUTOCTX_COMPONENTS_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "autoctx/types.h"

namespace autoctx {

struct ComponentLabels {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> ids;  // 0 = not in mask
  std::uint32_t count = 0;
};

// 8-connected labeling of nonzero mask pixels. Ids start at 1 and follow the
// raster-scan order of each component's first pixel.
ComponentLabels LabelComponents(std::span<const std::uint8_t> mask, int height,
                                int width);

// Same labeling as an InstanceMap with every component assigned class 1 and
// an empty scheme id.
InstanceMap ConnectedComponents(std::span<const std::uint8_t> mask, int height,
                                int width);

struct Centroid {
  double row = 0.0;
  double col = 0.0;
  std::int64_t area = 0;
};

// Unweighted mean pixel coordinate per nonzero id.
std::map<std::uint32_t, Centroid> Centroids(const InstanceMap& inst);

// Pixel count per nonzero id.
std::map<std::uint32_t, std::int64_t> InstanceAreas(const InstanceMap& inst);

}  // namespace autoctx

#endif  // AUTOCTX_COMPONENTS_H_
