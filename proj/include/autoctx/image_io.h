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

#ifndef AUTOCTX_IMAGE_IO_H_
#define AUTOCTX_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autoctx/types.h"

namespace autoctx {

// PMAP container layout:
//   bytes 0-7   "PMAPV001"
//   bytes 8-11  header length L, uint32 little-endian
//   bytes 12..  L bytes of UTF-8 JSON
//               {"height":H,"width":W,"channels":C,"dtype":"f32le","scheme":S}
//   then        H*W*C float32 little-endian, offset ((r*W)+c)*C+ch
inline constexpr char kPmapMagic[] = "PMAPV001";
inline constexpr std::size_t kPmapMagicSize = 8;

// Invariant checks. All throw ValidationError.
void ValidateProbabilityMap(const ProbabilityMap& map);
void ValidateLabelMap(const LabelMap& map);
void ValidateInstanceMap(const InstanceMap& map);
void ValidateRgbImage(const RgbImage& image);

// A PMAP payload without scheme semantics. `tag` goes into the "scheme"
// header field verbatim. Used for auto-context tensors, which carry RGB plus
// a context channel rather than class scores.
struct RawTensor {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::string tag;
  std::vector<float> data;
};

std::string EncodeTensor(const RawTensor& tensor);
RawTensor DecodeTensor(std::string_view bytes);

std::string EncodePmap(const ProbabilityMap& map);
ProbabilityMap DecodePmap(std::string_view bytes);

ProbabilityMap ReadPmap(const std::filesystem::path& path);
// Validates first; nothing is written for an invalid map.
void WritePmap(const ProbabilityMap& map, const std::filesystem::path& path);

RawTensor ReadTensor(const std::filesystem::path& path);
void WriteTensor(const RawTensor& tensor, const std::filesystem::path& path);

// 16-bit grayscale PNG, pixel value = class id.
LabelMap ReadLabelPng(const std::filesystem::path& path,
                      std::string_view scheme_id);
void WriteLabelPng(const LabelMap& map, const std::filesystem::path& path);

// 16-bit grayscale PNG of ids plus a JSON sidecar
// {"scheme":"<nuclei scheme>","classes":{"<id>":<class>}}.
InstanceMap ReadInstances(const std::filesystem::path& png_path,
                          const std::filesystem::path& json_path);
void WriteInstances(const InstanceMap& inst,
                    const std::filesystem::path& png_path,
                    const std::filesystem::path& json_path);
std::string EncodeInstanceSidecar(const InstanceMap& inst);

// 8-bit RGB PNG scaled to [0,1]. RGBA input drops alpha.
RgbImage ReadRgbPng(const std::filesystem::path& path);
void WriteRgbPng(const RgbImage& image, const std::filesystem::path& path);

// Per pixel, the lowest channel index attaining the maximum score.
LabelMap Argmax(const ProbabilityMap& map);

// Binary helpers shared by the CLI and tests.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace autoctx

#endif  // AUTOCTX_IMAGE_IO_H_
