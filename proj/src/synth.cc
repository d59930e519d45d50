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

#include "autoctx/synth.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "autoctx/error.h"
#include "autoctx/frame_classifier.h"
#include "autoctx/image_io.h"
#include "autoctx/pipeline.h"
#include "autoctx/schemes.h"
#include "json.hpp"

namespace autoctx {

namespace fs = std::filesystem;

namespace {

// Draws straight from the engine so fixtures are identical across standard
// libraries (distribution classes are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int Uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

struct Disc {
  int row;
  int col;
  int radius;
};

template <typename Fn>
void ForDisc(const Disc& d, int h, int w, Fn&& fn) {
  for (int r = std::max(0, d.row - d.radius); r <= std::min(h - 1, d.row + d.radius); ++r) {
    for (int c = std::max(0, d.col - d.radius); c <= std::min(w - 1, d.col + d.radius); ++c) {
      const int dr = r - d.row;
      const int dc = c - d.col;
      if (dr * dr + dc * dc <= d.radius * d.radius) fn(r, c);
    }
  }
}

void Paint(LabelMap& map, const Disc& d, int label) {
  ForDisc(d, map.height, map.width, [&](int r, int c) {
    map.At(r, c) = static_cast<std::uint16_t>(label);
  });
}

struct FrameTruth {
  FrameType type;
  LabelMap tissue;
  Disc necrosis;
  InstanceMap nuclei;
};

LabelMap MakeTissue(Rng& rng, int size, FrameType type, Disc* necrosis) {
  LabelMap map{size, size, kPumaTissue6,
               std::vector<std::uint16_t>(static_cast<std::size_t>(size) * size,
                                          tissue::kStroma)};
  // Background block in one corner.
  const int corner = rng.Uniform(0, 3);
  const int bh = rng.Uniform(size / 5, size / 3);
  const int bw = rng.Uniform(size / 5, size / 3);
  const int r0 = corner < 2 ? 0 : size - bh;
  const int c0 = corner % 2 == 0 ? 0 : size - bw;
  for (int r = r0; r < r0 + bh; ++r) {
    for (int c = c0; c < c0 + bw; ++c) map.At(r, c) = tissue::kBackground;
  }
  for (int i = 0; i < 2; ++i) {
    Paint(map,
          {rng.Uniform(size / 6, 5 * size / 6), rng.Uniform(size / 6, 5 * size / 6),
           rng.Uniform(size / 8, size / 5)},
          tissue::kTumor);
  }
  for (int i = 0; i < 2; ++i) {
    Paint(map,
          {rng.Uniform(size / 8, 7 * size / 8), rng.Uniform(size / 8, 7 * size / 8),
           rng.Uniform(2, 4)},
          tissue::kBloodVessel);
  }
  *necrosis = {rng.Uniform(size / 4, 3 * size / 4), rng.Uniform(size / 4, 3 * size / 4),
               std::max(3, rng.Uniform(size / 10, size / 7))};
  Paint(map, *necrosis, tissue::kNecrosis);
  if (type == FrameType::kPrimary) {
    for (int r = 0; r < std::max(2, size / 12); ++r) {
      for (int c = 0; c < size; ++c) map.At(r, c) = tissue::kEpidermis;
    }
  }
  return map;
}

InstanceMap MakeNuclei(Rng& rng, int size, int count, const ClassScheme& scheme) {
  const int margin = SynthBorderMargin(size);
  InstanceMap inst{size, size, scheme.id(),
                   std::vector<std::uint32_t>(static_cast<std::size_t>(size) * size, 0),
                   {}};
  std::vector<Disc> placed;
  auto fits = [&](const Disc& d) {
    for (const Disc& o : placed) {
      const int dr = d.row - o.row;
      const int dc = d.col - o.col;
      const int gap = d.radius + o.radius + 3;
      if (dr * dr + dc * dc < gap * gap) return false;
    }
    return true;
  };
  // One nucleus wholly inside the border band and one wholly inside the
  // interior, so both border handling paths are always exercised.
  placed.push_back({4, rng.Uniform(4, size - 5), 3});
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Disc d{rng.Uniform(margin + 6, size - margin - 7),
           rng.Uniform(margin + 6, size - margin - 7), rng.Uniform(3, 5)};
    if (fits(d)) {
      placed.push_back(d);
      break;
    }
  }
  for (int attempt = 0; attempt < 200 * count &&
                        static_cast<int>(placed.size()) < count;
       ++attempt) {
    const int radius = rng.Uniform(3, 5);
    Disc d{rng.Uniform(radius, size - 1 - radius),
           rng.Uniform(radius, size - 1 - radius), radius};
    if (fits(d)) placed.push_back(d);
  }
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const auto id = static_cast<std::uint32_t>(i + 1);
    ForDisc(placed[i], size, size, [&](int r, int c) {
      inst.ids[static_cast<std::size_t>(r) * size + c] = id;
    });
    inst.classes[id] = rng.Uniform(1, scheme.size() - 1);
  }
  return inst;
}

ProbabilityMap OneHot(const LabelMap& labels, int channels) {
  ProbabilityMap map{labels.height, labels.width, channels, labels.scheme,
                     std::vector<float>(labels.PixelCount() * channels, 0.0f)};
  for (std::size_t p = 0; p < labels.data.size(); ++p) {
    map.data[p * channels + labels.data[p]] = 1.0f;
  }
  return map;
}

// Softly mislabels gt blood vessel as stroma: stroma 0.6, vessel 0.3.
void MissVessels(ProbabilityMap& map, const LabelMap& gt, int offset) {
  for (std::size_t p = 0; p < gt.data.size(); ++p) {
    if (gt.data[p] != tissue::kBloodVessel) continue;
    float* px = map.data.data() + p * map.channels;
    std::fill(px, px + map.channels, 0.0f);
    px[tissue::kStroma + offset] = 0.6f;
    px[tissue::kBloodVessel + offset] = 0.3f;
  }
}

// Right half of the necrosis disc becomes stroma.
void PunchNecrosis(ProbabilityMap& map, const LabelMap& gt, const Disc& necrosis) {
  for (int r = 0; r < gt.height; ++r) {
    for (int c = necrosis.col; c < gt.width; ++c) {
      if (gt.At(r, c) != tissue::kNecrosis) continue;
      float* px = map.data.data() + map.Offset(r, c);
      std::fill(px, px + map.channels, 0.0f);
      px[tissue::kStroma] = 1.0f;
    }
  }
}

LabelMap SwapTumorStroma(LabelMap map) {
  for (auto& v : map.data) {
    if (v == tissue::kTumor) {
      v = tissue::kStroma;
    } else if (v == tissue::kStroma) {
      v = tissue::kTumor;
    }
  }
  return map;
}

LabelMap ToExt(const LabelMap& tissue_map, FrameType type) {
  LabelMap ext{tissue_map.height, tissue_map.width, kPumaExt11, tissue_map.data};
  if (type == FrameType::kMetastatic) {
    for (auto& v : ext.data) {
      if (v != 0) v = static_cast<std::uint16_t>(v + tissue::kExtOffset);
    }
  }
  return ext;
}

RgbImage Render(const LabelMap& tissue_map, const InstanceMap& nuclei) {
  static constexpr float kColors[6][3] = {{0.95f, 0.95f, 0.95f}, {0.85f, 0.45f, 0.60f},
                                          {0.95f, 0.70f, 0.80f}, {0.75f, 0.55f, 0.70f},
                                          {0.90f, 0.85f, 0.80f}, {0.80f, 0.30f, 0.35f}};
  RgbImage img{tissue_map.height, tissue_map.width,
               std::vector<float>(tissue_map.PixelCount() * 3)};
  for (std::size_t p = 0; p < tissue_map.data.size(); ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      float v = kColors[tissue_map.data[p]][ch];
      if (nuclei.ids[p] != 0) v *= 0.4f;
      // Quantize so the PNG roundtrip is exact.
      img.data[p * 3 + ch] = static_cast<float>(static_cast<int>(v * 255.0f + 0.5f)) / 255.0f;
    }
  }
  return img;
}

}  // namespace

int SynthBorderMargin(int size) { return std::min(16, size / 4); }

std::set<Defect> ParseDefects(std::string_view comma_list) {
  std::set<Defect> out;
  std::size_t start = 0;
  while (start <= comma_list.size()) {
    std::size_t end = comma_list.find(',', start);
    if (end == std::string_view::npos) end = comma_list.size();
    const std::string_view name = comma_list.substr(start, end - start);
    if (name == "border") {
      out.insert(Defect::kBorder);
    } else if (name == "necrosis") {
      out.insert(Defect::kNecrosis);
    } else if (name == "class_noise" || name == "class-noise") {
      out.insert(Defect::kClassNoise);
    } else if (!name.empty() && name != "none") {
      throw UsageError("unknown defect '" + std::string(name) + "'");
    }
    start = end + 1;
  }
  return out;
}

fs::path SynthFixtures(std::uint64_t seed, const SynthSpec& spec, const fs::path& out_dir) {
  if (spec.size < 32) throw UsageError("fixture size must be >= 32");
  if (spec.frames < 1) throw UsageError("need at least one frame");
  if (spec.nuclei_per_frame < 2) throw UsageError("need at least two nuclei per frame");
  if (spec.track != 1 && spec.track != 2) throw UsageError("track must be 1 or 2");

  const ClassScheme& nuclei_scheme =
      GetScheme(spec.track == 1 ? kNucleiTrack1 : kNucleiTrack2);
  const bool border = spec.defects.contains(Defect::kBorder);
  const bool necrosis = spec.defects.contains(Defect::kNecrosis);
  const bool noise = spec.defects.contains(Defect::kClassNoise);
  const int margin = SynthBorderMargin(spec.size);

  fs::create_directories(out_dir);
  Rng rng(seed);
  std::vector<FrameBundle> bundles;
  for (int i = 0; i < spec.frames; ++i) {
    char id_buf[16];
    std::snprintf(id_buf, sizeof(id_buf), "f%03d", i);
    const std::string id = id_buf;
    const fs::path fdir = out_dir / "frames" / id;
    const fs::path gdir = out_dir / "gt" / id;
    fs::create_directories(fdir);
    fs::create_directories(gdir);

    const FrameType type = i % 2 == 0 ? FrameType::kPrimary : FrameType::kMetastatic;
    Disc necrosis_disc{};
    const LabelMap gt_tissue = MakeTissue(rng, spec.size, type, &necrosis_disc);
    const InstanceMap gt_nuclei =
        MakeNuclei(rng, spec.size, spec.nuclei_per_frame, nuclei_scheme);

    FrameBundle b;
    b.id = id;
    b.rgb = fdir / "rgb.png";
    WriteRgbPng(Render(gt_tissue, gt_nuclei), *b.rgb);

    ProbabilityMap ext = OneHot(ToExt(gt_tissue, type), GetScheme(kPumaExt11).size());
    if (noise) {
      MissVessels(ext, gt_tissue, type == FrameType::kPrimary ? 0 : tissue::kExtOffset);
    }
    b.ext11 = fdir / "ext11.pmap";
    WritePmap(ext, *b.ext11);

    for (FrameType model : {FrameType::kPrimary, FrameType::kMetastatic}) {
      const bool matched = model == type;
      const LabelMap seen = matched ? gt_tissue : SwapTumorStroma(gt_tissue);
      FrameBundle::StagePair& pair =
          model == FrameType::kPrimary ? b.segformer_primary : b.segformer_metastatic;
      const std::string stem = std::string("segformer_") + FrameTypeName(model);
      for (int stage : {2, 4}) {
        ProbabilityMap seg = OneHot(seen, tissue::kCount);
        if (noise) MissVessels(seg, gt_tissue, 0);
        if (stage == 4 && necrosis) PunchNecrosis(seg, gt_tissue, necrosis_disc);
        const fs::path path = fdir / (stem + "_s" + std::to_string(stage) + ".pmap");
        WritePmap(seg, path);
        (stage == 2 ? pair.stage2 : pair.stage4) = path;
      }
    }
    for (int stage : {2, 4}) {
      ProbabilityMap unet = OneHot(gt_tissue, tissue::kCount);
      if (stage == 4 && necrosis) PunchNecrosis(unet, gt_tissue, necrosis_disc);
      const fs::path path = fdir / ("unet_s" + std::to_string(stage) + ".pmap");
      WritePmap(unet, path);
      (stage == 2 ? b.unet.stage2 : b.unet.stage4) = path;
    }

    // Detector output: right shapes, unreliable classes.
    InstanceMap detected = gt_nuclei;
    for (auto& [nid, cls] : detected.classes) {
      cls = rng.Uniform(1, nuclei_scheme.size() - 1);
    }
    if (border) {
      for (int r = 0; r < spec.size; ++r) {
        for (int c = 0; c < spec.size; ++c) {
          if (r < margin || c < margin || r >= spec.size - margin ||
              c >= spec.size - margin) {
            detected.ids[static_cast<std::size_t>(r) * spec.size + c] = 0;
          }
        }
      }
      std::set<std::uint32_t> alive(detected.ids.begin(), detected.ids.end());
      std::erase_if(detected.classes,
                    [&](const auto& e) { return !alive.contains(e.first); });
    }
    b.instances_png = fdir / "instances.png";
    b.instances_json = fdir / "instances.json";
    WriteInstances(detected, *b.instances_png, *b.instances_json);

    LabelMap nuclei_classes{spec.size, spec.size, nuclei_scheme.id(),
                            std::vector<std::uint16_t>(gt_nuclei.PixelCount(), 0)};
    for (std::size_t p = 0; p < gt_nuclei.ids.size(); ++p) {
      if (gt_nuclei.ids[p] != 0) {
        nuclei_classes.data[p] =
            static_cast<std::uint16_t>(gt_nuclei.classes.at(gt_nuclei.ids[p]));
      }
    }
    b.classmap = fdir / "classmap.pmap";
    WritePmap(OneHot(nuclei_classes, nuclei_scheme.size()), *b.classmap);

    b.gt_tissue = gdir / "tissue.png";
    b.gt_instances_png = gdir / "nuclei.png";
    b.gt_instances_json = gdir / "nuclei.json";
    WriteLabelPng(gt_tissue, *b.gt_tissue);
    WriteInstances(gt_nuclei, *b.gt_instances_png, *b.gt_instances_json);
    bundles.push_back(std::move(b));
  }

  WriteFileBytes(out_dir / "manifest.json",
                 ManifestToJson(bundles, out_dir).dump(2) + "\n");
  nlohmann::ordered_json config;
  config["manifest"] = "manifest.json";
  config["track"] = spec.track;
  config["params"] = {{"border_margin", margin}};
  const fs::path config_path = out_dir / "config.json";
  WriteFileBytes(config_path, config.dump(2) + "\n");
  return config_path;
}

}  // namespace autoctx
