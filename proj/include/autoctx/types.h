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

#ifndef AUTOCTX_TYPES_H_
#define AUTOCTX_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace autoctx {

// Per-class scores, row-major with the channel index varying fastest.
struct ProbabilityMap {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::string scheme;
  std::vector<float> data;

  std::size_t Offset(int row, int col, int ch = 0) const {
    return (static_cast<std::size_t>(row) * width + col) * channels + ch;
  }
  float At(int row, int col, int ch) const { return data[Offset(row, col, ch)]; }
  float& At(int row, int col, int ch) { return data[Offset(row, col, ch)]; }
  std::span<const float> Pixel(std::size_t pixel_index) const {
    return {data.data() + pixel_index * channels,
            static_cast<std::size_t>(channels)};
  }
  std::size_t PixelCount() const {
    return static_cast<std::size_t>(height) * width;
  }

  bool operator==(const ProbabilityMap&) const = default;
};

struct LabelMap {
  int height = 0;
  int width = 0;
  std::string scheme;
  std::vector<std::uint16_t> data;

  std::uint16_t At(int row, int col) const {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::uint16_t& At(int row, int col) {
    return data[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t PixelCount() const {
    return static_cast<std::size_t>(height) * width;
  }

  bool operator==(const LabelMap&) const = default;
};

// Instance ids (0 = background) plus the class of every nonzero id.
struct InstanceMap {
  int height = 0;
  int width = 0;
  std::string scheme;
  std::vector<std::uint32_t> ids;
  std::map<std::uint32_t, int> classes;

  std::uint32_t At(int row, int col) const {
    return ids[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t PixelCount() const {
    return static_cast<std::size_t>(height) * width;
  }

  bool operator==(const InstanceMap&) const = default;
};

// Interleaved RGB in [0,1].
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  bool operator==(const RgbImage&) const = default;
};

}  // namespace autoctx

#endif  // AUTOCTX_TYPES_H_
