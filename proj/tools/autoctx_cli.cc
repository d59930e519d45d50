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

// Command-line front end: classify, fuse, nuclei, rescue, eval, pipeline,
// synth.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "autoctx/error.h"
#include "autoctx/evaluation.h"
#include "autoctx/frame_classifier.h"
#include "autoctx/fusion.h"
#include "autoctx/image_io.h"
#include "autoctx/metrics.h"
#include "autoctx/nuclei_fusion.h"
#include "autoctx/pipeline.h"
#include "autoctx/rescue.h"
#include "autoctx/schemes.h"
#include "autoctx/synth.h"

namespace fs = std::filesystem;
using namespace autoctx;

namespace {

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

void PrintReport(const MetricReport& report) {
  std::cout << report.metric << " (" << report.scheme << ")\n";
  for (const auto& c : report.per_class) {
    std::cout << "  " << c.name << ": " << Percent(c.score) << "\n";
  }
  for (const auto& name : report.excluded) {
    std::cout << "  " << name << ": excluded (no support)\n";
  }
  std::cout << "  mean: "
            << (report.aggregate ? Percent(*report.aggregate) : std::string("n/a"))
            << "\n";
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

LabelMap LoadLabels(const std::string& path, const std::string& scheme) {
  if (EndsWith(path, ".pmap")) return Argmax(ReadPmap(path));
  return ReadLabelPng(path, scheme);
}

// CLI11 wants long options to start with "--"; accept the single-dash form.
std::vector<std::string> NormalizeArgs(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) {
    std::string a = argv[i];
    if (a == "-o-classes") a = "--o-classes";
    args.push_back(std::move(a));
  }
  return args;  // CLI11 consumes vectors in reverse order
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auto-context tissue and nuclei fusion engine"};
  app.require_subcommand(1);
  std::vector<std::string> scheme_files;
  app.add_option("--scheme-file", scheme_files,
                 "Register an extra class scheme from JSON")
      ->check(CLI::ExistingFile);

  // classify
  auto* classify = app.add_subcommand("classify", "Primary vs metastatic frame decision");
  std::string cls_pmap, cls_labels;
  std::int64_t epidermis_min = 1;
  auto* opt_pmap = classify->add_option("--pmap", cls_pmap, "11-class PMAP");
  classify->add_option("--labels", cls_labels, "11-class label PNG")->excludes(opt_pmap);
  classify->add_option("--epidermis-min", epidermis_min, "Epidermis pixel threshold");

  // fuse
  auto* fuse = app.add_subcommand("fuse", "Two-model tissue ensemble");
  std::string fuse_seg, fuse_unet, fuse_rules = "default", fuse_out, fuse_labels;
  fuse->add_option("--segformer", fuse_seg)->required();
  fuse->add_option("--unet", fuse_unet)->required();
  fuse->add_option("--rules", fuse_rules, "default | vessel_only | segformer_only | rules.json");
  fuse->add_option("-o,--out", fuse_out)->required();
  fuse->add_option("--labels", fuse_labels, "Also write the argmax label PNG");

  // nuclei
  auto* nuclei = app.add_subcommand("nuclei", "Majority-vote classification and border correction");
  std::string nuc_inst, nuc_inst_cls, nuc_classmap, nuc_out, nuc_out_cls;
  std::string nuc_fallback = "keep_original";
  int nuc_margin = 16;
  nuclei->add_option("--instances", nuc_inst)->required();
  nuclei->add_option("--inst-classes", nuc_inst_cls)->required();
  nuclei->add_option("--classmap", nuc_classmap, "Class map PNG or PMAP")->required();
  nuclei->add_option("--margin", nuc_margin, "Border band width in pixels");
  nuclei->add_option("--fallback", nuc_fallback, "keep_original | lowest_foreground");
  nuclei->add_option("-o,--out", nuc_out)->required();
  nuclei->add_option("--o-classes", nuc_out_cls)->required();

  // rescue
  auto* rescue = app.add_subcommand("rescue", "Necrosis rescue from stage-1 labels");
  std::string res_s1, res_s4, res_out, res_class = "necrosis", res_scheme = kPumaTissue6;
  rescue->add_option("--stage1", res_s1)->required();
  rescue->add_option("--stage4", res_s4)->required();
  rescue->add_option("-o,--out", res_out)->required();
  rescue->add_option("--class", res_class);
  rescue->add_option("--scheme", res_scheme);

  // eval
  auto* eval = app.add_subcommand("eval", "Score prediction directories against ground truth");
  std::string ev_metric, ev_pred, ev_gt, ev_report;
  EvalOptions ev_opts;
  eval->add_option("metric", ev_metric, "dice | f1 | pq | micropq | all")
      ->required()
      ->check(CLI::IsMember({"dice", "f1", "pq", "micropq", "all"}));
  eval->add_option("--pred", ev_pred)->required();
  eval->add_option("--gt", ev_gt)->required();
  eval->add_option("--radius", ev_opts.radius);
  eval->add_option("--iou", ev_opts.iou_threshold);
  eval->add_option("--scheme", ev_opts.tissue_scheme, "Tissue scheme of tissue.png");
  eval->add_option("--report", ev_report, "Write the report JSON here");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run all stages over a manifest");
  std::string pl_config, pl_out;
  int pl_jobs = 1;
  int pl_ablation = 0;
  pipeline->add_option("--config", pl_config)->required();
  pipeline->add_option("--out", pl_out)->required();
  pipeline->add_option("--jobs", pl_jobs)->check(CLI::PositiveNumber);
  pipeline->add_option("--ablation", pl_ablation, "Override toggles with experiment 1..7");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic fixture directory");
  std::uint64_t sy_seed = 0;
  SynthSpec sy_spec;
  std::string sy_defects, sy_out;
  synth->add_option("--seed", sy_seed)->required();
  synth->add_option("--frames", sy_spec.frames);
  synth->add_option("--size", sy_spec.size);
  synth->add_option("--nuclei", sy_spec.nuclei_per_frame);
  synth->add_option("--track", sy_spec.track);
  synth->add_option("--defects", sy_defects, "Comma list: border,necrosis,class_noise");
  synth->add_option("-o,--out", sy_out)->required();

  try {
    app.parse(NormalizeArgs(argc, argv));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& f : scheme_files) LoadSchemeFile(f);

    if (*classify) {
      if (cls_pmap.empty() && cls_labels.empty()) {
        throw UsageError("classify needs --pmap or --labels");
      }
      const LabelMap ext = cls_pmap.empty() ? ReadLabelPng(cls_labels, kPumaExt11)
                                            : Argmax(ReadPmap(cls_pmap));
      ClassifierParams params;
      params.epidermis_min_pixels = epidermis_min;
      std::cout << FrameTypeName(ClassifyFrame(ext, params)) << "\n";
    } else if (*fuse) {
      const ProbabilityMap fused =
          FuseTissue(ReadPmap(fuse_seg), ReadPmap(fuse_unet), ResolveRuleSet(fuse_rules));
      WritePmap(fused, fuse_out);
      if (!fuse_labels.empty()) WriteLabelPng(TissueLabel(fused), fuse_labels);
    } else if (*nuclei) {
      const InstanceMap inst = ReadInstances(nuc_inst, nuc_inst_cls);
      const LabelMap class_map = LoadLabels(nuc_classmap, inst.scheme);
      InstanceMap out =
          MajorityVoteClassify(inst, class_map, {ParseVoteFallback(nuc_fallback)});
      out = BorderCorrect(out, class_map, {nuc_margin});
      WriteInstances(out, nuc_out, nuc_out_cls);
      std::cout << out.classes.size() << " instances\n";
    } else if (*rescue) {
      const LabelMap s1 = ReadLabelPng(res_s1, res_scheme);
      const LabelMap s4 = ReadLabelPng(res_s4, res_scheme);
      RescueParams params;
      params.target_class = GetScheme(res_scheme).IndexOf(res_class);
      WriteLabelPng(NecrosisRescue(s1, s4, params), res_out);
    } else if (*eval) {
      nlohmann::ordered_json doc;
      if (ev_metric == "all") {
        doc = EvalReport(ev_pred, ev_gt, ev_opts);
        std::cout << doc.dump(2) << "\n";
      } else {
        const MetricReport report =
            EvaluateDirs(ParseMetricKind(ev_metric), ev_pred, ev_gt, ev_opts);
        PrintReport(report);
        doc = ReportToJson(report);
      }
      if (!ev_report.empty()) WriteFileBytes(ev_report, doc.dump(2) + "\n");
    } else if (*pipeline) {
      PipelineConfig config = LoadConfig(pl_config);
      if (pl_ablation != 0) config.toggles = AblationToggles(pl_ablation);
      const RunResult result = RunPipeline(config, pl_out, pl_jobs);
      std::cout << "config " << result.config_hash << "\n"
                << result.frames.size() << " frames\n";
      const auto& metrics = result.report.at("metrics");
      if (metrics.contains("micro_dice") && !metrics["micro_dice"]["aggregate"].is_null()) {
        std::cout << "micro dice: " << Percent(metrics["micro_dice"]["aggregate"]) << "\n";
      }
      if (metrics.contains("detection_f1") &&
          !metrics["detection_f1"]["aggregate"].is_null()) {
        std::cout << "macro F1: " << Percent(metrics["detection_f1"]["aggregate"]) << "\n";
      }
      if (metrics.contains("mean")) {
        std::cout << "mean: " << Percent(metrics["mean"]) << "\n";
      }
    } else if (*synth) {
      sy_spec.defects = ParseDefects(sy_defects);
      std::cout << SynthFixtures(sy_seed, sy_spec, sy_out).string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
