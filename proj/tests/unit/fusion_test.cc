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

#include <bit>
#include <random>

#include "autoctx/error.h"
#include "autoctx/fusion.h"
#include "autoctx/image_io.h"
#include "autoctx/schemes.h"
#include "doctest.h"
#include "test_util.h"

namespace autoctx {
namespace {

ProbabilityMap Pixel(std::initializer_list<float> scores) {
  return ProbabilityMap{1, 1, 6, kPumaTissue6, scores};
}

TEST_CASE("default rules on a single pixel") {
  ProbabilityMap seg = Pixel({0.05f, 0.1f, 0.2f, 0.8f, 0.3f, 0.9f});
  ProbabilityMap unet = Pixel({0.5f, 0.6f, 0.7f, 0.4f, 0.1f, 0.1f});
  ProbabilityMap fused = FuseTissue(seg, unet, FusionRuleSet::Default());
  CHECK(fused.data[0] == 0.05f);
  CHECK(fused.data[tissue::kTumor] == 0.1f);
  CHECK(fused.data[tissue::kStroma] == 0.2f);
  CHECK(fused.data[tissue::kEpidermis] == doctest::Approx(0.6f));
  CHECK(fused.data[tissue::kNecrosis] == 0.5f * (0.3f + 0.1f));
  CHECK(fused.data[tissue::kBloodVessel] == 0.1f);
}

TEST_CASE("fusing a map with itself is the identity") {
  std::mt19937_64 rng(31);
  ProbabilityMap m = testing::RandomMap(rng, 9, 9, 6, kPumaTissue6);
  for (const auto& rules : {FusionRuleSet::Default(), FusionRuleSet::VesselOnly(),
                            FusionRuleSet::SegformerOnly()}) {
    CHECK(FuseTissue(m, m, rules) == m);
  }
}

TEST_CASE("reduced rule sets") {
  ProbabilityMap seg = Pixel({0.0f, 0.1f, 0.2f, 0.8f, 0.3f, 0.9f});
  ProbabilityMap unet = Pixel({0.5f, 0.6f, 0.7f, 0.4f, 0.1f, 0.2f});
  ProbabilityMap v = FuseTissue(seg, unet, FusionRuleSet::VesselOnly());
  CHECK(v.data == std::vector<float>{0.0f, 0.1f, 0.2f, 0.8f, 0.3f, 0.2f});
  CHECK(FuseTissue(seg, unet, FusionRuleSet::SegformerOnly()) == seg);
}

TEST_CASE("rule set resolution") {
  CHECK(ResolveRuleSet("default") == FusionRuleSet::Default());
  CHECK(ResolveRuleSet("vessel_only") == FusionRuleSet::VesselOnly());
  CHECK(ResolveRuleSet("segformer_only") == FusionRuleSet::SegformerOnly());
  CHECK_THROWS_AS(ResolveRuleSet("nonsense"), Error);

  testing::TempDir dir;
  WriteFileBytes(dir / "rules.json", R"({"classes":{
      "tumor":"segformer_only","stroma":"segformer_only","epidermis":"mean",
      "necrosis":"mean","blood_vessel":"unet_only"}})");
  CHECK(ResolveRuleSet((dir / "rules.json").string()) ==
        FusionRuleSet::Default());

  CHECK_THROWS_AS(ParseRuleSetJson(R"({"classes":{"tumor":"mean"}})"), Error);
  CHECK_THROWS_AS(ParseRuleSetJson(R"({"classes":{"tumor":"max"}})"), Error);
  CHECK_THROWS_AS(ParseRuleSetJson("["), Error);
}

TEST_CASE("fusion input checks") {
  ProbabilityMap a{1, 2, 6, kPumaTissue6, std::vector<float>(12, 0.1f)};
  ProbabilityMap b{2, 1, 6, kPumaTissue6, std::vector<float>(12, 0.1f)};
  CHECK_THROWS_AS(FuseTissue(a, b, FusionRuleSet::Default()), Error);
  ProbabilityMap ext{1, 2, 11, kPumaExt11, std::vector<float>(22, 0.1f)};
  CHECK_THROWS_AS(FuseTissue(ext, ext, FusionRuleSet::Default()), Error);
}

TEST_CASE("tissue label") {
  CHECK(TissueLabel(Pixel({0.3f, 0.6f, 0.1f, 0.0f, 0.0f, 0.0f})).data[0] ==
        tissue::kTumor);
  CHECK(TissueLabel(Pixel({0.0f, 0.0f, 0.4f, 0.4f, 0.2f, 0.0f})).data[0] ==
        tissue::kStroma);
  std::mt19937_64 rng(37);
  LabelMap labels = testing::Labels(7, 7, kPumaTissue6);
  for (auto& v : labels.data) v = rng() % 6;
  CHECK(TissueLabel(testing::OneHot(labels, 6)) == labels);
}

TEST_CASE("auto-context channel") {
  RgbImage rgb{1, 3, {0.1f, 0.2f, 0.3f, 0.4f, 0.5f, 0.6f, 0.7f, 0.8f, 0.9f}};
  LabelMap ctx = testing::Labels(1, 3, kPumaTissue6);
  ctx.data = {0, 5, 3};
  AutoContextInput in = ComposeAutoContext(rgb, ctx);
  REQUIRE(in.data.size() == 12);
  CHECK(in.data[0] == 0.1f);
  CHECK(in.data[2] == 0.3f);
  CHECK(in.data[3] == 0.0f);
  CHECK(in.data[7] == 1.0f);
  CHECK(in.data[11] == doctest::Approx(0.6));

  RawTensor t = AutoContextTensor(in, kPumaTissue6);
  CHECK(t.tag == "autocontext:puma_tissue6");
  CHECK(t.channels == 4);
  CHECK(DecodeTensor(EncodeTensor(t)).data == in.data);

  CHECK_THROWS_AS(ComposeAutoContext(rgb, testing::Labels(3, 1, kPumaTissue6)),
                  Error);
}

}  // namespace
}  // namespace autoctx
