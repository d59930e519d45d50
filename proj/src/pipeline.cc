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

#include "autoctx/pipeline.h"

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <exception>
#include <set>
#include <thread>

#include "autoctx/error.h"
#include "autoctx/evaluation.h"
#include "autoctx/image_io.h"
#include "autoctx/metrics.h"
#include "autoctx/schemes.h"

namespace autoctx {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

StageToggles AblationToggles(int experiment) {
  if (experiment < 1 || experiment > 7) {
    throw ConfigError("ablation experiment must be 1..7");
  }
  StageToggles t;
  t.classifier = experiment >= 2;
  t.classification_rules = experiment >= 3;
  t.unet_branch = experiment >= 4;
  t.stage4 = experiment >= 5;
  t.tissue_ensemble_rules = experiment >= 6;
  t.post_processing = experiment >= 7;
  return t;
}

namespace {

const std::set<std::string> kConfigKeys = {
    "manifest", "track",  "ablation",          "toggles",
    "params",   "frame_type_override", "export_autocontext"};

template <typename T>
T Get(const Json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

PipelineConfig ParseConfigJson(std::string_view text, const fs::path& base_dir) {
  PipelineConfig config;
  try {
    const Json doc = Json::parse(text);
    if (!doc.is_object()) throw ConfigError("pipeline config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (!kConfigKeys.contains(key)) {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
    if (!doc.contains("manifest")) throw ConfigError("config needs a manifest path");
    config.manifest = base_dir / doc.at("manifest").get<std::string>();
    config.track = Get(doc, "track", 2);
    if (doc.contains("ablation")) {
      config.toggles = AblationToggles(doc.at("ablation").get<int>());
    }
    if (doc.contains("toggles")) {
      const Json& t = doc.at("toggles");
      StageToggles& out = config.toggles;
      out.classifier = Get(t, "classifier", out.classifier);
      out.classification_rules =
          Get(t, "classification_rules", out.classification_rules);
      out.unet_branch = Get(t, "unet_branch", out.unet_branch);
      out.stage4 = Get(t, "stage4", out.stage4);
      out.tissue_ensemble_rules =
          Get(t, "tissue_ensemble_rules", out.tissue_ensemble_rules);
      out.post_processing = Get(t, "post_processing", out.post_processing);
    }
    if (doc.contains("params")) {
      const Json& p = doc.at("params");
      PipelineParams& out = config.params;
      out.classifier.epidermis_min_pixels =
          Get<std::int64_t>(p, "epidermis_min_pixels", 1);
      out.border.margin = Get(p, "border_margin", out.border.margin);
      if (p.contains("vote_fallback")) {
        out.vote.fallback = ParseVoteFallback(p.at("vote_fallback").get<std::string>());
      }
      if (p.contains("rescue_enabled") && !p.at("rescue_enabled").is_null()) {
        out.rescue_enabled = p.at("rescue_enabled").get<bool>();
      }
      if (p.contains("rescue_class")) {
        const Json& rc = p.at("rescue_class");
        out.rescue_class = rc.is_string()
                               ? GetScheme(kPumaTissue6).IndexOf(rc.get<std::string>())
                               : rc.get<int>();
      }
      out.radius = Get(p, "radius", out.radius);
      out.iou_threshold = Get(p, "iou_threshold", out.iou_threshold);
    }
    if (doc.contains("frame_type_override") &&
        !doc.at("frame_type_override").is_null()) {
      config.frame_type_override =
          ParseFrameType(doc.at("frame_type_override").get<std::string>());
    }
    config.export_autocontext = Get(doc, "export_autocontext", true);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }
  ValidateConfig(config);
  return config;
}

PipelineConfig LoadConfig(const fs::path& path) {
  return ParseConfigJson(ReadFileBytes(path), path.parent_path());
}

OrderedJson ConfigToJson(const PipelineConfig& config) {
  OrderedJson doc;
  doc["manifest"] = config.manifest.filename().string();
  doc["track"] = config.track;
  const StageToggles& t = config.toggles;
  doc["toggles"] = {{"classifier", t.classifier},
                    {"classification_rules", t.classification_rules},
                    {"unet_branch", t.unet_branch},
                    {"stage4", t.stage4},
                    {"tissue_ensemble_rules", t.tissue_ensemble_rules},
                    {"post_processing", t.post_processing}};
  const PipelineParams& p = config.params;
  OrderedJson params;
  params["epidermis_min_pixels"] = p.classifier.epidermis_min_pixels;
  params["border_margin"] = p.border.margin;
  params["vote_fallback"] = p.vote.fallback == VoteFallback::kKeepOriginal
                                ? "keep_original"
                                : "lowest_foreground";
  if (p.rescue_enabled) {
    params["rescue_enabled"] = *p.rescue_enabled;
  } else {
    params["rescue_enabled"] = nullptr;
  }
  params["rescue_class"] = GetScheme(kPumaTissue6).at(p.rescue_class).name;
  params["radius"] = p.radius;
  params["iou_threshold"] = p.iou_threshold;
  doc["params"] = std::move(params);
  if (config.frame_type_override) {
    doc["frame_type_override"] = FrameTypeName(*config.frame_type_override);
  } else {
    doc["frame_type_override"] = nullptr;
  }
  doc["export_autocontext"] = config.export_autocontext;
  return doc;
}

void ValidateConfig(const PipelineConfig& config) {
  if (config.track != 1 && config.track != 2) {
    throw ConfigError("track must be 1 or 2");
  }
  const PipelineParams& p = config.params;
  if (p.classifier.epidermis_min_pixels < 1) {
    throw ConfigError("epidermis_min_pixels must be >= 1");
  }
  if (p.border.margin < 0) throw ConfigError("border_margin must be >= 0");
  if (!(p.radius > 0.0)) throw ConfigError("radius must be positive");
  if (!(p.iou_threshold >= 0.5 && p.iou_threshold < 1.0)) {
    throw ConfigError("iou_threshold must lie in [0.5, 1)");
  }
  if (p.rescue_class <= 0 || p.rescue_class >= tissue::kCount) {
    throw ConfigError("rescue_class must be a foreground tissue class");
  }
  if (p.rescue_enabled.value_or(false) && !config.toggles.stage4) {
    throw ConfigError("rescue needs stage4; disable rescue or enable stage4");
  }
}

bool RescueActive(const PipelineConfig& config) {
  return config.toggles.post_processing && config.toggles.stage4 &&
         config.params.rescue_enabled.value_or(config.track == 2);
}

FusionRuleSet StageRules(const StageToggles& toggles) {
  if (!toggles.unet_branch) return FusionRuleSet::SegformerOnly();
  return toggles.tissue_ensemble_rules ? FusionRuleSet::Default()
                                       : FusionRuleSet::VesselOnly();
}

namespace {

FrameBundle::OptPath PathField(const Json& obj, const char* key,
                               const fs::path& base) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return base / it->get<std::string>();
}

FrameBundle::StagePair StageField(const Json& obj, const char* key,
                                  const fs::path& base) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  return {PathField(*it, "stage2", base), PathField(*it, "stage4", base)};
}

std::string RelativeString(const FrameBundle::OptPath& p, const fs::path& base) {
  return p->lexically_relative(base).generic_string();
}

}  // namespace

std::vector<FrameBundle> ParseManifestJson(std::string_view text,
                                           const fs::path& base_dir) {
  std::vector<FrameBundle> frames;
  try {
    const Json doc = Json::parse(text);
    if (!doc.is_array()) throw ConfigError("manifest must be a JSON list");
    std::set<std::string> seen;
    for (const Json& rec : doc) {
      FrameBundle f;
      f.id = rec.at("id").get<std::string>();
      if (f.id.empty() || f.id.find('/') != std::string::npos || f.id == "." ||
          f.id == "..") {
        throw ConfigError("bad frame id '" + f.id + "'");
      }
      if (!seen.insert(f.id).second) {
        throw ConfigError("duplicate frame id '" + f.id + "'");
      }
      f.rgb = PathField(rec, "rgb", base_dir);
      f.ext11 = PathField(rec, "ext11", base_dir);
      if (auto it = rec.find("segformer"); it != rec.end()) {
        f.segformer_primary = StageField(*it, "primary", base_dir);
        f.segformer_metastatic = StageField(*it, "metastatic", base_dir);
      }
      f.unet = StageField(rec, "unet", base_dir);
      if (auto it = rec.find("instances"); it != rec.end()) {
        f.instances_png = PathField(*it, "png", base_dir);
        f.instances_json = PathField(*it, "json", base_dir);
      }
      f.classmap = PathField(rec, "classmap", base_dir);
      if (auto it = rec.find("gt"); it != rec.end()) {
        f.gt_tissue = PathField(*it, "tissue", base_dir);
        if (auto inst = it->find("instances"); inst != it->end()) {
          f.gt_instances_png = PathField(*inst, "png", base_dir);
          f.gt_instances_json = PathField(*inst, "json", base_dir);
        }
      }
      frames.push_back(std::move(f));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  return frames;
}

std::vector<FrameBundle> LoadManifest(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("manifest " + path.string() + " not found");
  return ParseManifestJson(ReadFileBytes(path), path.parent_path());
}

OrderedJson ManifestToJson(const std::vector<FrameBundle>& frames,
                           const fs::path& base_dir) {
  OrderedJson list = OrderedJson::array();
  auto put = [&](OrderedJson& obj, const char* key, const FrameBundle::OptPath& p) {
    if (p) obj[key] = RelativeString(p, base_dir);
  };
  auto put_pair = [&](OrderedJson& obj, const char* key,
                      const FrameBundle::StagePair& pair) {
    OrderedJson sub = OrderedJson::object();
    put(sub, "stage2", pair.stage2);
    put(sub, "stage4", pair.stage4);
    if (!sub.empty()) obj[key] = std::move(sub);
  };
  for (const FrameBundle& f : frames) {
    OrderedJson rec;
    rec["id"] = f.id;
    put(rec, "rgb", f.rgb);
    put(rec, "ext11", f.ext11);
    OrderedJson seg = OrderedJson::object();
    put_pair(seg, "primary", f.segformer_primary);
    put_pair(seg, "metastatic", f.segformer_metastatic);
    if (!seg.empty()) rec["segformer"] = std::move(seg);
    put_pair(rec, "unet", f.unet);
    OrderedJson inst = OrderedJson::object();
    put(inst, "png", f.instances_png);
    put(inst, "json", f.instances_json);
    if (!inst.empty()) rec["instances"] = std::move(inst);
    put(rec, "classmap", f.classmap);
    OrderedJson gt = OrderedJson::object();
    put(gt, "tissue", f.gt_tissue);
    OrderedJson gt_inst = OrderedJson::object();
    put(gt_inst, "png", f.gt_instances_png);
    put(gt_inst, "json", f.gt_instances_json);
    if (!gt_inst.empty()) gt["instances"] = std::move(gt_inst);
    if (!gt.empty()) rec["gt"] = std::move(gt);
    list.push_back(std::move(rec));
  }
  return list;
}

namespace {

const fs::path& Require(const FrameBundle::OptPath& p, const char* stage,
                        const std::string& what) {
  if (!p) {
    throw ConfigError(std::string("stage '") + stage + "' needs input '" +
                      what + "'");
  }
  return *p;
}

ProbabilityMap ReadSchemePmap(const fs::path& path, const char* scheme) {
  ProbabilityMap map = ReadPmap(path);
  if (map.scheme != scheme) {
    throw ValidationError(path.filename().string() + " has scheme '" +
                          map.scheme + "', expected '" + scheme + "'");
  }
  return map;
}

FrameOutcome RunFrameImpl(const PipelineConfig& config, const FrameBundle& frame,
                          const fs::path& out_dir) {
  const StageToggles& toggles = config.toggles;
  const fs::path dir = out_dir / frame.id;
  fs::create_directories(dir);

  FrameOutcome out;
  out.id = frame.id;
  auto artifact = [&](const std::string& name, const std::string& file) {
    out.artifacts.emplace_back(name, frame.id + "/" + file);
    return dir / file;
  };

  const bool overridden = config.frame_type_override.has_value();
  const bool skip_stage2 = !overridden && !toggles.classifier;
  const bool rescue = RescueActive(config);

  // Stage 1: the 11-class segmentation, its 6-class projection and the
  // primary/metastatic decision.
  std::optional<LabelMap> stage1;
  std::optional<LabelMap> ext_labels;
  if (!overridden || rescue || frame.ext11) {
    const char* why = overridden ? "post_processing" : "stage1";
    ext_labels = Argmax(ReadSchemePmap(Require(frame.ext11, why, "ext11"),
                                       kPumaExt11));
    stage1 = RemapLabels(*ext_labels, ExtToTissueRemap());
    WriteLabelPng(*stage1, artifact("stage1_tissue", "stage1_tissue.png"));
  }
  if (overridden) {
    out.frame_type = *config.frame_type_override;
  } else if (toggles.classifier) {
    ClassifierParams params = config.params.classifier;
    params.epidermis_rule = toggles.classification_rules;
    out.frame_type = ClassifyFrame(*ext_labels, params);
    out.frame_type_from_classifier = true;
  } else {
    out.frame_type = FrameType::kMetastatic;
  }
  const FrameBundle::StagePair& segformer = frame.Segformer(out.frame_type);
  const std::string seg_name =
      std::string("segformer.") + FrameTypeName(out.frame_type);
  const FusionRuleSet rules = StageRules(toggles);

  auto tissue_from_models = [&](const FrameBundle::OptPath& seg_path,
                                const FrameBundle::OptPath& unet_path,
                                const char* stage) {
    ProbabilityMap scores = ReadSchemePmap(
        Require(seg_path, stage, seg_name + "." + stage), kPumaTissue6);
    if (toggles.unet_branch) {
      scores = FuseTissue(
          scores,
          ReadSchemePmap(Require(unet_path, stage, std::string("unet.") + stage),
                         kPumaTissue6),
          rules);
    }
    return TissueLabel(scores);
  };

  // Stage 2: initial tissue segmentation.
  LabelMap stage2 = skip_stage2 ? *stage1
                                : tissue_from_models(segformer.stage2,
                                                     frame.unet.stage2, "stage2");
  WriteLabelPng(stage2, artifact("stage2_tissue", "stage2_tissue.png"));

  std::optional<RgbImage> rgb;
  if (config.export_autocontext && frame.rgb) rgb = ReadRgbPng(*frame.rgb);

  // Stage 3: instance classes by majority vote over the class map.
  InstanceMap instances =
      ReadInstances(Require(frame.instances_png, "stage3", "instances.png"),
                    Require(frame.instances_json, "stage3", "instances.json"));
  const LabelMap class_map =
      Argmax(ReadPmap(Require(frame.classmap, "stage3", "classmap")));
  if (rgb) {
    WriteTensor(AutoContextTensor(ComposeAutoContext(*rgb, stage2), stage2.scheme),
                artifact("stage3_input", "stage3_autocontext.pmap"));
  }
  WriteLabelPng(class_map, artifact("stage3_classmap", "stage3_classmap.png"));
  out.nuclei = MajorityVoteClassify(instances, class_map, config.params.vote);
  if (toggles.post_processing) {
    out.nuclei = BorderCorrect(out.nuclei, class_map, config.params.border);
  }
  WriteInstances(out.nuclei, artifact("nuclei", kNucleiFile),
                 artifact("nuclei_classes", kNucleiClassesFile));

  // Stage 4: tissue refinement, then necrosis rescue.
  out.tissue = stage2;
  if (toggles.stage4) {
    if (rgb) {
      WriteTensor(AutoContextTensor(
                      ComposeAutoContext(*rgb, RasterizeInstanceClasses(out.nuclei)),
                      out.nuclei.scheme),
                  artifact("stage4_input", "stage4_autocontext.pmap"));
    }
    LabelMap stage4 =
        tissue_from_models(segformer.stage4, frame.unet.stage4, "stage4");
    WriteLabelPng(stage4, artifact("stage4_tissue", "stage4_tissue.png"));
    out.tissue = rescue ? NecrosisRescue(*stage1, stage4,
                                         {true, config.params.rescue_class})
                        : std::move(stage4);
  }
  if (out.tissue.height != out.nuclei.height || out.tissue.width != out.nuclei.width) {
    throw ValidationError("tissue and nuclei outputs differ in shape");
  }
  WriteLabelPng(out.tissue, artifact("tissue", kTissueFile));
  return out;
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace

FrameOutcome RunFrame(const PipelineConfig& config, const FrameBundle& frame,
                      const fs::path& out_dir) {
  try {
    return RunFrameImpl(config, frame, out_dir);
  } catch (const Error& e) {
    throw Error(e.kind(), "frame " + frame.id + ": " + e.what());
  }
}

std::string ConfigHash(const PipelineConfig& config) {
  std::string material = ConfigToJson(config).dump();
  material += '\n';
  material += ReadFileBytes(config.manifest);
  return Sha256Hex(material);
}

RunResult RunPipeline(const PipelineConfig& config, const fs::path& out_dir,
                      int jobs) {
  ValidateConfig(config);
  const std::vector<FrameBundle> frames = LoadManifest(config.manifest);
  if (frames.empty()) throw ConfigError("manifest lists no frames");
  fs::create_directories(out_dir);

  RunResult result;
  result.config_hash = ConfigHash(config);
  result.frames.resize(frames.size());
  std::vector<std::exception_ptr> errors(frames.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < frames.size(); i = next++) {
      try {
        result.frames[i] = RunFrame(config, frames[i], out_dir);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads =
      std::max(1, std::min<int>(jobs, static_cast<int>(frames.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Scoring runs in manifest order so the report does not depend on `jobs`.
  std::vector<LabelMap> tissue_pred, tissue_gt;
  std::vector<InstanceMap> nuclei_pred, nuclei_gt;
  OrderedJson frame_docs = OrderedJson::array();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameBundle& f = frames[i];
    const FrameOutcome& o = result.frames[i];
    try {
      if (f.gt_tissue) {
        tissue_gt.push_back(ReadLabelPng(*f.gt_tissue, kPumaTissue6));
        tissue_pred.push_back(o.tissue);
      }
      if (f.gt_instances_png || f.gt_instances_json) {
        nuclei_gt.push_back(
            ReadInstances(Require(f.gt_instances_png, "evaluation", "gt.instances.png"),
                          Require(f.gt_instances_json, "evaluation", "gt.instances.json")));
        nuclei_pred.push_back(o.nuclei);
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "frame " + f.id + ": " + e.what());
    }
    OrderedJson doc;
    doc["id"] = o.id;
    doc["frame_type"] = FrameTypeName(o.frame_type);
    doc["frame_type_source"] = config.frame_type_override ? "override"
                               : o.frame_type_from_classifier ? "classifier"
                                                              : "default";
    OrderedJson artifacts = OrderedJson::object();
    for (const auto& [name, path] : o.artifacts) artifacts[name] = path;
    doc["artifacts"] = std::move(artifacts);
    frame_docs.push_back(std::move(doc));
  }

  EvalOptions options;
  options.radius = config.params.radius;
  options.iou_threshold = config.params.iou_threshold;
  OrderedJson report;
  report["config_hash"] = result.config_hash;
  report["config"] = ConfigToJson(config);
  report["frames"] = std::move(frame_docs);
  report["metrics"] =
      CombinedMetrics(tissue_pred, tissue_gt, nuclei_pred, nuclei_gt, options);
  report["frames_evaluated"] = {{"tissue", tissue_gt.size()},
                                {"nuclei", nuclei_gt.size()}};
  WriteFileBytes(out_dir / "report.json", report.dump(2) + "\n");
  result.report = std::move(report);
  return result;
}

}  // namespace autoctx
