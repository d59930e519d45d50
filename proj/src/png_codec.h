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

#ifndef AUTOCTX_SRC_PNG_CODEC_H_
#define AUTOCTX_SRC_PNG_CODEC_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace autoctx::internal {

struct PngPixels {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 gray, 3 rgb, 4 rgba
  int bit_depth = 0;  // 8 or 16
  std::vector<std::uint16_t> samples;  // interleaved, native values
};

// Throws FormatError on malformed files, IoError when unreadable.
PngPixels ReadPng(const std::filesystem::path& path);

// `samples` holds width*height*channels values; channels is 1 or 3.
void WritePng(const std::filesystem::path& path, int width, int height,
              int channels, int bit_depth,
              std::span<const std::uint16_t> samples);

}  // namespace autoctx::internal

#endif  // AUTOCTX_SRC_PNG_CODEC_H_
