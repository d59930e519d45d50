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

#ifndef AUTOCTX_SYNTH_H_
#define AUTOCTX_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string_view>

namespace autoctx {

// Planted model failures, each repaired by one pipeline component.
enum class Defect {
  kBorder,      // instance masks missing inside the border band
  kNecrosis,    // stage-4 models under-segment necrosis
  kClassNoise,  // SegFormer models (stage 1/2/4) miss blood vessels
};

std::set<Defect> ParseDefects(std::string_view comma_list);

struct SynthSpec {
  int frames = 4;
  int size = 128;
  int nuclei_per_frame = 24;
  int track = 2;
  std::set<Defect> defects;
};

// Writes a complete fixture under `out_dir`:
//   manifest.json, config.json   pipeline inputs (all toggles on)
//   frames/<id>/...              model outputs per frame
//   gt/<id>/tissue.png, nuclei.png, nuclei.json
// Output bytes depend only on `seed` and `spec`. Returns the config path.
std::filesystem::path SynthFixtures(std::uint64_t seed, const SynthSpec& spec,
                                    const std::filesystem::path& out_dir);

// Border band width written into the fixture config for a given frame size.
int SynthBorderMargin(int size);

}  // namespace autoctx

#endif  // AUTOCTX_SYNTH_H_
