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

#include "autoctx/components.h"

#include <string>

#include "autoctx/error.h"

namespace autoctx {

ComponentLabels LabelComponents(std::span<const std::uint8_t> mask, int height,
                                int width) {
  const std::size_t pixels = static_cast<std::size_t>(height) * width;
  if (height < 0 || width < 0 || mask.size() != pixels) {
    throw ValidationError("mask size does not match " + std::to_string(height) +
                          "x" + std::to_string(width));
  }
  ComponentLabels out{height, width, std::vector<std::uint32_t>(pixels, 0), 0};
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < pixels; ++start) {
    if (mask[start] == 0 || out.ids[start] != 0) continue;
    const std::uint32_t id = ++out.count;
    out.ids[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int r = static_cast<int>(p / width);
      const int c = static_cast<int>(p % width);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int nr = r + dr;
          const int nc = c + dc;
          if (nr < 0 || nr >= height || nc < 0 || nc >= width) continue;
          const std::size_t q = static_cast<std::size_t>(nr) * width + nc;
          if (mask[q] != 0 && out.ids[q] == 0) {
            out.ids[q] = id;
            stack.push_back(q);
          }
        }
      }
    }
  }
  return out;
}

InstanceMap ConnectedComponents(std::span<const std::uint8_t> mask, int height,
                                int width) {
  ComponentLabels labels = LabelComponents(mask, height, width);
  InstanceMap inst{height, width, "", std::move(labels.ids), {}};
  for (std::uint32_t id = 1; id <= labels.count; ++id) inst.classes[id] = 1;
  return inst;
}

std::map<std::uint32_t, Centroid> Centroids(const InstanceMap& inst) {
  struct Sum {
    double rows = 0.0;
    double cols = 0.0;
    std::int64_t n = 0;
  };
  std::map<std::uint32_t, Sum> sums;
  for (int r = 0; r < inst.height; ++r) {
    for (int c = 0; c < inst.width; ++c) {
      const std::uint32_t id = inst.At(r, c);
      if (id == 0) continue;
      Sum& s = sums[id];
      s.rows += r;
      s.cols += c;
      ++s.n;
    }
  }
  std::map<std::uint32_t, Centroid> out;
  for (const auto& [id, s] : sums) {
    out[id] = {s.rows / static_cast<double>(s.n),
               s.cols / static_cast<double>(s.n), s.n};
  }
  return out;
}

std::map<std::uint32_t, std::int64_t> InstanceAreas(const InstanceMap& inst) {
  std::map<std::uint32_t, std::int64_t> areas;
  for (std::uint32_t id : inst.ids) {
    if (id != 0) ++areas[id];
  }
  return areas;
}

}  // namespace autoctx
