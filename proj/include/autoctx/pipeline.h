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

#ifndef AUTOCTX_PIPELINE_H_
#define AUTOCTX_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autoctx/frame_classifier.h"
#include "autoctx/fusion.h"
#include "autoctx/nuclei_fusion.h"
#include "autoctx/rescue.h"
#include "json.hpp"

namespace autoctx {

// On/off switches for the ablation study. Experiments 1..7 enable the
// components cumulatively in the order declared here.
struct StageToggles {
  bool classifier = true;
  bool classification_rules = true;
  bool unet_branch = true;
  bool stage4 = true;
  bool tissue_ensemble_rules = true;
  bool post_processing = true;

  bool operator==(const StageToggles&) const = default;
};

StageToggles AblationToggles(int experiment);

struct PipelineParams {
  ClassifierParams classifier;
  BorderParams border;
  VoteParams vote;
  // Unset: rescue runs on track 2 only, as the published setup did.
  std::optional<bool> rescue_enabled;
  int rescue_class = tissue::kNecrosis;
  double radius = 15.0;
  double iou_threshold = 0.5;
};

struct PipelineConfig {
  std::filesystem::path manifest;
  StageToggles toggles;
  PipelineParams params;
  std::optional<FrameType> frame_type_override;
  int track = 2;
  bool export_autocontext = true;
};

// Paths are resolved against `base_dir`.
PipelineConfig ParseConfigJson(std::string_view text,
                               const std::filesystem::path& base_dir);
PipelineConfig LoadConfig(const std::filesystem::path& path);
nlohmann::ordered_json ConfigToJson(const PipelineConfig& config);
// Throws ConfigError for inconsistent settings.
void ValidateConfig(const PipelineConfig& config);

bool RescueActive(const PipelineConfig& config);
FusionRuleSet StageRules(const StageToggles& toggles);

// One frame's precomputed model outputs. Unset paths mean "not provided".
struct FrameBundle {
  using OptPath = std::optional<std::filesystem::path>;
  struct StagePair {
    OptPath stage2;
    OptPath stage4;
  };

  std::string id;
  OptPath rgb;
  OptPath ext11;
  StagePair segformer_primary;
  StagePair segformer_metastatic;
  StagePair unet;
  OptPath instances_png;
  OptPath instances_json;
  OptPath classmap;
  OptPath gt_tissue;
  OptPath gt_instances_png;
  OptPath gt_instances_json;

  const StagePair& Segformer(FrameType type) const {
    return type == FrameType::kPrimary ? segformer_primary
                                       : segformer_metastatic;
  }
};

// Manifest: a JSON list of frame records with paths relative to the manifest.
std::vector<FrameBundle> ParseManifestJson(std::string_view text,
                                           const std::filesystem::path& base_dir);
std::vector<FrameBundle> LoadManifest(const std::filesystem::path& path);
nlohmann::ordered_json ManifestToJson(const std::vector<FrameBundle>& frames,
                                      const std::filesystem::path& base_dir);

struct FrameOutcome {
  std::string id;
  FrameType frame_type = FrameType::kMetastatic;
  bool frame_type_from_classifier = false;
  LabelMap tissue;
  InstanceMap nuclei;
  // Stage artifact name -> path relative to the output directory.
  std::vector<std::pair<std::string, std::string>> artifacts;
};

// Runs one frame and writes its artifacts under out_dir/<frame id>/.
FrameOutcome RunFrame(const PipelineConfig& config, const FrameBundle& frame,
                      const std::filesystem::path& out_dir);

struct RunResult {
  std::string config_hash;
  std::vector<FrameOutcome> frames;
  nlohmann::ordered_json report;
};

// Runs every frame of the manifest (up to `jobs` at a time), then scores the
// frames that carry ground truth and writes out_dir/report.json.
RunResult RunPipeline(const PipelineConfig& config,
                      const std::filesystem::path& out_dir, int jobs = 1);

// SHA-256 over the canonical config JSON and the manifest bytes.
std::string ConfigHash(const PipelineConfig& config);

}  // namespace autoctx

#endif  // AUTOCTX_PIPELINE_H_
