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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <string>
#include <vector>

#include "autoctx/components.h"
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

namespace py = pybind11;
using namespace autoctx;

namespace {

template <typename T>
using CArray = py::array_t<T, py::array::c_style | py::array::forcecast>;

ProbabilityMap ToPmap(const CArray<float>& a, const std::string& scheme) {
  if (a.ndim() != 3) throw ValidationError("expected an H x W x C array");
  ProbabilityMap m{static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                   static_cast<int>(a.shape(2)), scheme,
                   std::vector<float>(a.data(), a.data() + a.size())};
  ValidateProbabilityMap(m);
  return m;
}

py::array_t<float> FromPmap(const ProbabilityMap& m) {
  py::array_t<float> out({m.height, m.width, m.channels});
  std::memcpy(out.mutable_data(), m.data.data(), m.data.size() * sizeof(float));
  return out;
}

LabelMap ToLabels(const CArray<std::uint16_t>& a, const std::string& scheme) {
  if (a.ndim() != 2) throw ValidationError("expected an H x W array");
  LabelMap m{static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), scheme,
             std::vector<std::uint16_t>(a.data(), a.data() + a.size())};
  ValidateLabelMap(m);
  return m;
}

py::array_t<std::uint16_t> FromLabels(const LabelMap& m) {
  py::array_t<std::uint16_t> out({m.height, m.width});
  std::memcpy(out.mutable_data(), m.data.data(), m.data.size() * sizeof(std::uint16_t));
  return out;
}

using ClassTable = std::map<std::uint32_t, int>;

InstanceMap ToInstances(const CArray<std::uint32_t>& ids, const ClassTable& classes,
                        const std::string& scheme) {
  if (ids.ndim() != 2) throw ValidationError("expected an H x W id array");
  InstanceMap m{static_cast<int>(ids.shape(0)), static_cast<int>(ids.shape(1)), scheme,
                std::vector<std::uint32_t>(ids.data(), ids.data() + ids.size()),
                classes};
  ValidateInstanceMap(m);
  return m;
}

py::array_t<std::uint32_t> FromIds(const InstanceMap& m) {
  py::array_t<std::uint32_t> out({m.height, m.width});
  std::memcpy(out.mutable_data(), m.ids.data(), m.ids.size() * sizeof(std::uint32_t));
  return out;
}

using InstanceTuple = std::tuple<CArray<std::uint32_t>, ClassTable>;

std::vector<InstanceMap> ToInstanceList(const std::vector<InstanceTuple>& items,
                                        const std::string& scheme) {
  std::vector<InstanceMap> out;
  for (const auto& [ids, classes] : items) out.push_back(ToInstances(ids, classes, scheme));
  return out;
}

std::string Dump(const MetricReport& r) { return ReportToJson(r).dump(); }

}  // namespace

PYBIND11_MODULE(_autoctx, m) {
  m.doc() = "Auto-context tissue/nuclei fusion engine and segmentation metrics.";

  static py::exception<Error> error_type(m, "AutoctxError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type,
                    (std::string(ErrorKindName(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("scheme_ids", &SchemeIds);
  m.def("get_scheme", [](const std::string& id) {
    std::vector<std::tuple<int, std::string, std::string>> out;
    for (const auto& c : GetScheme(id).classes()) {
      out.emplace_back(c.index, c.name, ClassGroupName(c.group));
    }
    return out;
  });
  m.def("register_scheme_json",
        [](const std::string& text) { return RegisterScheme(ParseSchemeJson(text)).id(); });

  m.def("read_pmap", [](const std::filesystem::path& path) {
    ProbabilityMap map = ReadPmap(path);
    return py::make_tuple(FromPmap(map), map.scheme);
  });
  m.def("write_pmap", [](const CArray<float>& a, const std::string& scheme,
                         const std::filesystem::path& path) {
    WritePmap(ToPmap(a, scheme), path);
  });
  m.def("read_label_png", [](const std::filesystem::path& path, const std::string& scheme) {
    return FromLabels(ReadLabelPng(path, scheme));
  });
  m.def("write_label_png", [](const CArray<std::uint16_t>& a, const std::string& scheme,
                              const std::filesystem::path& path) {
    WriteLabelPng(ToLabels(a, scheme), path);
  });
  m.def("read_instances", [](const std::filesystem::path& png, const std::filesystem::path& json) {
    InstanceMap inst = ReadInstances(png, json);
    return py::make_tuple(FromIds(inst), inst.classes, inst.scheme);
  });
  m.def("write_instances",
        [](const CArray<std::uint32_t>& ids, const ClassTable& classes, const std::string& scheme,
           const std::filesystem::path& png, const std::filesystem::path& json) {
          WriteInstances(ToInstances(ids, classes, scheme), png, json);
        });

  m.def("argmax", [](const CArray<float>& a, const std::string& scheme) {
    return FromLabels(Argmax(ToPmap(a, scheme)));
  });
  m.def("fuse_tissue",
        [](const CArray<float>& seg, const CArray<float>& unet, const std::string& rules,
           const std::string& scheme) {
          return FromPmap(FuseTissue(ToPmap(seg, scheme), ToPmap(unet, scheme),
                                     ResolveRuleSet(rules)));
        },
        py::arg("segformer"), py::arg("unet"), py::arg("rules") = "default",
        py::arg("scheme") = kPumaTissue6);
  m.def("compose_autocontext",
        [](const CArray<float>& rgb, const CArray<std::uint16_t>& context,
           const std::string& scheme) {
          if (rgb.ndim() != 3 || rgb.shape(2) != 3) {
            throw ValidationError("expected an H x W x 3 RGB array");
          }
          RgbImage img{static_cast<int>(rgb.shape(0)), static_cast<int>(rgb.shape(1)),
                       std::vector<float>(rgb.data(), rgb.data() + rgb.size())};
          AutoContextInput in = ComposeAutoContext(img, ToLabels(context, scheme));
          py::array_t<float> out({in.height, in.width, AutoContextInput::kChannels});
          std::memcpy(out.mutable_data(), in.data.data(), in.data.size() * sizeof(float));
          return out;
        });
  m.def("classify_frame",
        [](const CArray<std::uint16_t>& ext, std::int64_t epidermis_min_pixels,
           bool epidermis_rule) {
          return std::string(FrameTypeName(
              ClassifyFrame(ToLabels(ext, kPumaExt11),
                            {epidermis_min_pixels, epidermis_rule})));
        },
        py::arg("ext_labels"), py::arg("epidermis_min_pixels") = 1,
        py::arg("epidermis_rule") = true);
  m.def("majority_vote",
        [](const CArray<std::uint32_t>& ids, const ClassTable& classes,
           const CArray<std::uint16_t>& class_map, const std::string& scheme,
           const std::string& fallback) {
          return MajorityVoteClassify(ToInstances(ids, classes, scheme),
                                      ToLabels(class_map, scheme),
                                      {ParseVoteFallback(fallback)})
              .classes;
        },
        py::arg("ids"), py::arg("classes"), py::arg("class_map"), py::arg("scheme"),
        py::arg("fallback") = "keep_original");
  m.def("border_correct",
        [](const CArray<std::uint32_t>& ids, const ClassTable& classes,
           const CArray<std::uint16_t>& class_map, const std::string& scheme, int margin) {
          InstanceMap out = BorderCorrect(ToInstances(ids, classes, scheme),
                                          ToLabels(class_map, scheme), {margin});
          return py::make_tuple(FromIds(out), out.classes);
        },
        py::arg("ids"), py::arg("classes"), py::arg("class_map"), py::arg("scheme"),
        py::arg("margin") = 16);
  m.def("necrosis_rescue",
        [](const CArray<std::uint16_t>& stage1, const CArray<std::uint16_t>& stage4,
           const std::string& scheme, int target_class) {
          return FromLabels(NecrosisRescue(ToLabels(stage1, scheme), ToLabels(stage4, scheme),
                                           {true, target_class}));
        },
        py::arg("stage1"), py::arg("stage4"), py::arg("scheme") = kPumaTissue6,
        py::arg("target_class") = static_cast<int>(tissue::kNecrosis));
  m.def("connected_components", [](const CArray<std::uint8_t>& mask) {
    if (mask.ndim() != 2) throw ValidationError("expected an H x W mask");
    ComponentLabels labels =
        LabelComponents(std::span<const std::uint8_t>(mask.data(), mask.size()),
                        static_cast<int>(mask.shape(0)), static_cast<int>(mask.shape(1)));
    InstanceMap view{labels.height, labels.width, "", std::move(labels.ids), {}};
    return py::make_tuple(FromIds(view), labels.count);
  });
  m.def("centroids", [](const CArray<std::uint32_t>& ids) {
    InstanceMap view{static_cast<int>(ids.shape(0)), static_cast<int>(ids.shape(1)), "",
                     std::vector<std::uint32_t>(ids.data(), ids.data() + ids.size()), {}};
    std::map<std::uint32_t, std::pair<double, double>> out;
    for (const auto& [id, c] : Centroids(view)) out[id] = {c.row, c.col};
    return out;
  });

  m.def("micro_dice",
        [](const std::vector<CArray<std::uint16_t>>& pred,
           const std::vector<CArray<std::uint16_t>>& gt, const std::string& scheme) {
          std::vector<LabelMap> p, g;
          for (const auto& a : pred) p.push_back(ToLabels(a, scheme));
          for (const auto& a : gt) g.push_back(ToLabels(a, scheme));
          return Dump(MicroDice(p, g));
        });
  m.def("detection_f1",
        [](const std::vector<InstanceTuple>& pred, const std::vector<InstanceTuple>& gt,
           const std::string& scheme, double radius) {
          return Dump(DetectionF1(ToInstanceList(pred, scheme), ToInstanceList(gt, scheme),
                                  radius));
        },
        py::arg("pred"), py::arg("gt"), py::arg("scheme"),
        py::arg("radius") = kDefaultMatchRadius);
  m.def("panoptic_quality",
        [](const std::vector<InstanceTuple>& pred, const std::vector<InstanceTuple>& gt,
           const std::string& scheme, double iou) {
          return Dump(PanopticQuality(ToInstanceList(pred, scheme),
                                      ToInstanceList(gt, scheme), iou));
        },
        py::arg("pred"), py::arg("gt"), py::arg("scheme"),
        py::arg("iou_threshold") = kDefaultIouThreshold);
  m.def("micro_pq",
        [](const std::vector<InstanceTuple>& pred, const std::vector<InstanceTuple>& gt,
           const std::string& scheme, double iou) {
          return Dump(MicroPanopticQuality(ToInstanceList(pred, scheme),
                                           ToInstanceList(gt, scheme), iou));
        },
        py::arg("pred"), py::arg("gt"), py::arg("scheme"),
        py::arg("iou_threshold") = kDefaultIouThreshold);
  m.def("mean_track_score", &MeanTrackScore);

  m.def("synth_fixtures",
        [](std::uint64_t seed, const std::filesystem::path& out_dir, int frames, int size,
           int nuclei, int track, const std::string& defects) {
          SynthSpec spec{frames, size, nuclei, track, ParseDefects(defects)};
          return SynthFixtures(seed, spec, out_dir);
        },
        py::arg("seed"), py::arg("out_dir"), py::arg("frames") = 4, py::arg("size") = 128,
        py::arg("nuclei") = 24, py::arg("track") = 2, py::arg("defects") = "");
  m.def("run_pipeline",
        [](const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
           int jobs, int ablation) {
          PipelineConfig config = LoadConfig(config_path);
          if (ablation != 0) config.toggles = AblationToggles(ablation);
          py::gil_scoped_release release;
          return RunPipeline(config, out_dir, jobs).report.dump();
        },
        py::arg("config"), py::arg("out_dir"), py::arg("jobs") = 1, py::arg("ablation") = 0);
  m.def("eval_report",
        [](const std::filesystem::path& pred, const std::filesystem::path& gt,
           const std::string& scheme, double radius, double iou) {
          return EvalReport(pred, gt, {scheme, radius, iou}).dump();
        },
        py::arg("pred_dir"), py::arg("gt_dir"), py::arg("scheme") = kPumaTissue6,
        py::arg("radius") = kDefaultMatchRadius, py::arg("iou_threshold") = kDefaultIouThreshold);
}
