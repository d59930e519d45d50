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

#ifndef AUTOCTX_FUSION_H_
#define AUTOCTX_FUSION_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "autoctx/image_io.h"
#include "autoctx/schemes.h"
#include "autoctx/types.h"

namespace autoctx {

// Where a fused channel takes its score from.
enum class FusionSource { kSegformerOnly, kUnetOnly, kMean };

const char* FusionSourceName(FusionSource source);
FusionSource ParseFusionSource(std::string_view name);

// Per-channel source selection for the two-model tissue ensemble. Every
// foreground class of `scheme` needs exactly one entry.
struct FusionRuleSet {
  std::string scheme = kPumaTissue6;
  FusionSource background = FusionSource::kSegformerOnly;
  std::map<int, FusionSource> per_class;

  // Epidermis and necrosis averaged, blood vessel from the U-Net, tumor and
  // stroma from the SegFormer.
  static FusionRuleSet Default();
  // The U-Net contributes the blood-vessel channel only.
  static FusionRuleSet VesselOnly();
  // Pass-through of the SegFormer scores.
  static FusionRuleSet SegformerOnly();

  bool operator==(const FusionRuleSet&) const = default;
};

// "default", "vessel_only", "segformer_only"; anything else is read as a JSON
// file: {"scheme":..,"background":"segformer_only","classes":{"<name>":"mean"}}.
FusionRuleSet ResolveRuleSet(std::string_view name_or_path);
FusionRuleSet ParseRuleSetJson(std::string_view text);
void ValidateRuleSet(const FusionRuleSet& rules);

ProbabilityMap FuseTissue(const ProbabilityMap& segformer,
                          const ProbabilityMap& unet,
                          const FusionRuleSet& rules);

// Argmax over the fused scores; the scheme carries through.
LabelMap TissueLabel(const ProbabilityMap& fused);

// RGB plus one context channel, interleaved as 4 floats per pixel.
struct AutoContextInput {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  static constexpr int kChannels = 4;
  bool operator==(const AutoContextInput&) const = default;
};

// The context channel is label / (K - 1), K the class count of the context
// map's scheme.
AutoContextInput ComposeAutoContext(const RgbImage& rgb,
                                    const LabelMap& context);

// PMAP-container view of an auto-context tensor; the header's scheme field
// reads "autocontext:<context scheme>".
RawTensor AutoContextTensor(const AutoContextInput& input,
                            std::string_view context_scheme);

}  // namespace autoctx

#endif  // AUTOCTX_FUSION_H_
