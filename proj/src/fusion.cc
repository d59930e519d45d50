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

#include "autoctx/fusion.h"

#include <filesystem>

#include "autoctx/error.h"
#include "json.hpp"

namespace autoctx {

const char* FusionSourceName(FusionSource source) {
  switch (source) {
    case FusionSource::kSegformerOnly:
      return "segformer_only";
    case FusionSource::kUnetOnly:
      return "unet_only";
    case FusionSource::kMean:
      return "mean";
  }
  return "?";
}

FusionSource ParseFusionSource(std::string_view name) {
  if (name == "segformer_only") return FusionSource::kSegformerOnly;
  if (name == "unet_only") return FusionSource::kUnetOnly;
  if (name == "mean") return FusionSource::kMean;
  throw ValidationError("unknown fusion source '" + std::string(name) + "'");
}

FusionRuleSet FusionRuleSet::Default() {
  FusionRuleSet rules;
  rules.per_class = {
      {tissue::kTumor, FusionSource::kSegformerOnly},
      {tissue::kStroma, FusionSource::kSegformerOnly},
      {tissue::kEpidermis, FusionSource::kMean},
      {tissue::kNecrosis, FusionSource::kMean},
      {tissue::kBloodVessel, FusionSource::kUnetOnly},
  };
  return rules;
}

FusionRuleSet FusionRuleSet::VesselOnly() {
  FusionRuleSet rules = SegformerOnly();
  rules.per_class[tissue::kBloodVessel] = FusionSource::kUnetOnly;
  return rules;
}

FusionRuleSet FusionRuleSet::SegformerOnly() {
  FusionRuleSet rules;
  for (int c = 1; c < tissue::kCount; ++c) {
    rules.per_class[c] = FusionSource::kSegformerOnly;
  }
  return rules;
}

FusionRuleSet ParseRuleSetJson(std::string_view text) {
  using Json = nlohmann::json;
  try {
    Json doc = Json::parse(text);
    FusionRuleSet rules;
    rules.scheme = doc.value("scheme", std::string(kPumaTissue6));
    rules.background =
        ParseFusionSource(doc.value("background", std::string("segformer_only")));
    const ClassScheme& scheme = GetScheme(rules.scheme);
    for (const auto& [name, source] : doc.at("classes").items()) {
      rules.per_class[scheme.IndexOf(name)] =
          ParseFusionSource(source.get<std::string>());
    }
    ValidateRuleSet(rules);
    return rules;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("fusion rules JSON: ") + e.what());
  }
}

FusionRuleSet ResolveRuleSet(std::string_view name_or_path) {
  if (name_or_path == "default") return FusionRuleSet::Default();
  if (name_or_path == "vessel_only") return FusionRuleSet::VesselOnly();
  if (name_or_path == "segformer_only") return FusionRuleSet::SegformerOnly();
  const std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path)) {
    throw UsageError("unknown rule set '" + std::string(name_or_path) + "'");
  }
  return ParseRuleSetJson(ReadFileBytes(path));
}

void ValidateRuleSet(const FusionRuleSet& rules) {
  const ClassScheme& scheme = GetScheme(rules.scheme);
  for (const auto& [cls, source] : rules.per_class) {
    if (cls <= 0 || cls >= scheme.size()) {
      throw ValidationError("fusion rule for class " + std::to_string(cls) +
                            " outside the foreground of '" + rules.scheme + "'");
    }
  }
  for (int c = 1; c < scheme.size(); ++c) {
    if (!rules.per_class.contains(c)) {
      throw ValidationError("no fusion rule for class '" + scheme.at(c).name +
                            "'");
    }
  }
}

ProbabilityMap FuseTissue(const ProbabilityMap& segformer,
                          const ProbabilityMap& unet,
                          const FusionRuleSet& rules) {
  ValidateProbabilityMap(segformer);
  ValidateProbabilityMap(unet);
  ValidateRuleSet(rules);
  if (segformer.height != unet.height || segformer.width != unet.width) {
    throw ValidationError("fusion inputs differ in shape");
  }
  if (segformer.scheme != unet.scheme || segformer.scheme != rules.scheme) {
    throw ValidationError("fusion inputs and rules must share one scheme");
  }

  std::vector<FusionSource> source(segformer.channels);
  source[0] = rules.background;
  for (const auto& [cls, s] : rules.per_class) source[cls] = s;

  ProbabilityMap fused = segformer;
  const std::size_t pixels = fused.PixelCount();
  const std::size_t channels = fused.channels;
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t ch = 0; ch < channels; ++ch) {
      const std::size_t at = p * channels + ch;
      switch (source[ch]) {
        case FusionSource::kSegformerOnly:
          break;
        case FusionSource::kUnetOnly:
          fused.data[at] = unet.data[at];
          break;
        case FusionSource::kMean:
          fused.data[at] = 0.5f * (segformer.data[at] + unet.data[at]);
          break;
      }
    }
  }
  return fused;
}

LabelMap TissueLabel(const ProbabilityMap& fused) { return Argmax(fused); }

AutoContextInput ComposeAutoContext(const RgbImage& rgb,
                                    const LabelMap& context) {
  ValidateRgbImage(rgb);
  ValidateLabelMap(context);
  if (rgb.height != context.height || rgb.width != context.width) {
    throw ValidationError("RGB image and context map differ in shape");
  }
  const int classes = GetScheme(context.scheme).size();
  const double denom = classes > 1 ? classes - 1 : 1;

  AutoContextInput out{rgb.height, rgb.width, {}};
  const std::size_t pixels = context.PixelCount();
  out.data.resize(pixels * AutoContextInput::kChannels);
  for (std::size_t p = 0; p < pixels; ++p) {
    float* dst = out.data.data() + p * AutoContextInput::kChannels;
    dst[0] = rgb.data[p * 3];
    dst[1] = rgb.data[p * 3 + 1];
    dst[2] = rgb.data[p * 3 + 2];
    dst[3] = static_cast<float>(context.data[p] / denom);
  }
  return out;
}

RawTensor AutoContextTensor(const AutoContextInput& input,
                            std::string_view context_scheme) {
  return {input.height, input.width, AutoContextInput::kChannels,
          "autocontext:" + std::string(context_scheme), input.data};
}

}  // namespace autoctx
