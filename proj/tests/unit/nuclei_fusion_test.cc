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

#include <random>

#include "autoctx/components.h"
#include "autoctx/error.h"
#include "autoctx/nuclei_fusion.h"
#include "autoctx/schemes.h"
#include "doctest.h"
#include "test_util.h"

namespace autoctx {
namespace {

constexpr int kTumor = 1;
constexpr int kLymphocyte = 2;
constexpr int kStroma = 7;

TEST_CASE("unanimous vote") {
  InstanceMap inst = testing::Instances(10, 10, kNucleiTrack2);
  testing::PaintRect(inst, 1, kTumor, 2, 2, 6, 7);  // 20 px
  LabelMap cm = testing::Labels(10, 10, kNucleiTrack2, kLymphocyte);
  CHECK(MajorityVoteClassify(inst, cm).classes.at(1) == kLymphocyte);
}

TEST_CASE("vote ignores background pixels") {
  InstanceMap inst = testing::Instances(4, 5, kNucleiTrack2);
  testing::PaintRect(inst, 3, kStroma, 0, 0, 4, 5);  // 20 px
  LabelMap cm = testing::Labels(4, 5, kNucleiTrack2);
  for (int i = 0; i < 7; ++i) cm.data[i] = kTumor;
  for (int i = 7; i < 12; ++i) cm.data[i] = kLymphocyte;
  // remaining 8 px are background and outnumber lymphocyte
  CHECK(MajorityVoteClassify(inst, cm).classes.at(3) == kTumor);
}

TEST_CASE("vote ties go to the lowest class") {
  InstanceMap inst = testing::Instances(1, 4, kNucleiTrack2);
  testing::PaintRect(inst, 1, kStroma, 0, 0, 1, 4);
  LabelMap cm = testing::Labels(1, 4, kNucleiTrack2);
  cm.data = {5, 5, 3, 3};
  CHECK(MajorityVoteClassify(inst, cm).classes.at(1) == 3);
}

TEST_CASE("vote fallbacks") {
  InstanceMap inst = testing::Instances(3, 3, kNucleiTrack1);
  testing::PaintRect(inst, 1, 3, 0, 0, 3, 3);
  LabelMap cm = testing::Labels(3, 3, kNucleiTrack1);
  CHECK(MajorityVoteClassify(inst, cm).classes.at(1) == 3);
  CHECK(MajorityVoteClassify(inst, cm, {VoteFallback::kLowestForeground})
            .classes.at(1) == 1);
  CHECK(ParseVoteFallback("keep_original") == VoteFallback::kKeepOriginal);
  CHECK_THROWS_AS(ParseVoteFallback("drop"), Error);
}

TEST_CASE("vote keeps geometry and ids") {
  std::mt19937_64 rng(41);
  InstanceMap inst = testing::Instances(16, 16, kNucleiTrack2);
  testing::PaintRect(inst, 4, 1, 1, 1, 5, 5);
  testing::PaintRect(inst, 9, 2, 8, 8, 12, 14);
  LabelMap cm = testing::Labels(16, 16, kNucleiTrack2);
  for (auto& v : cm.data) v = rng() % 11;
  InstanceMap out = MajorityVoteClassify(inst, cm);
  CHECK(out.ids == inst.ids);
  CHECK(out.classes.size() == 2);
}

TEST_CASE("vote input checks") {
  InstanceMap inst = testing::Instances(3, 3, kNucleiTrack1);
  CHECK_THROWS_AS(MajorityVoteClassify(inst, testing::Labels(3, 3, kNucleiTrack2)),
                  Error);
  CHECK_THROWS_AS(MajorityVoteClassify(inst, testing::Labels(3, 4, kNucleiTrack1)),
                  Error);
}

TEST_CASE("border margin zero is a no-op") {
  InstanceMap inst = testing::Instances(8, 8, kNucleiTrack2);
  testing::PaintRect(inst, 1, kTumor, 0, 0, 3, 3);
  LabelMap cm = testing::Labels(8, 8, kNucleiTrack2, kStroma);
  CHECK(BorderCorrect(inst, cm, {0}) == inst);
}

TEST_CASE("background class map empties the band") {
  InstanceMap inst = testing::Instances(12, 12, kNucleiTrack2);
  testing::PaintRect(inst, 1, kTumor, 0, 0, 2, 2);     // band only
  testing::PaintRect(inst, 2, kStroma, 1, 4, 6, 8);    // straddles
  testing::PaintRect(inst, 3, kLymphocyte, 5, 5, 7, 7);  // interior
  LabelMap cm = testing::Labels(12, 12, kNucleiTrack2);
  InstanceMap out = BorderCorrect(inst, cm, {3});
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 12; ++c) {
      const bool band = r < 3 || c < 3 || r >= 9 || c >= 9;
      if (band) CHECK(out.At(r, c) == 0);
    }
  }
  CHECK_FALSE(out.classes.contains(1));
  CHECK(out.classes.at(2) == kStroma);
  CHECK(out.classes.at(3) == kLymphocyte);
}

TEST_CASE("isolated band blob becomes one new instance") {
  InstanceMap inst = testing::Instances(20, 20, kNucleiTrack2);
  testing::PaintRect(inst, 7, kTumor, 8, 8, 12, 12);
  LabelMap cm = testing::Labels(20, 20, kNucleiTrack2);
  cm.At(0, 10) = kLymphocyte;
  cm.At(0, 11) = kLymphocyte;
  cm.At(1, 11) = kStroma;
  InstanceMap out = BorderCorrect(inst, cm, {4});
  CHECK(out.classes.size() == 2);
  REQUIRE(out.classes.contains(8));
  CHECK(out.classes.at(8) == kLymphocyte);
  CHECK(InstanceAreas(out).at(8) == 3);
  CHECK(out.At(0, 10) == 8);
  CHECK(out.At(1, 11) == 8);
}

TEST_CASE("band blob touching a survivor merges into it") {
  InstanceMap inst = testing::Instances(20, 20, kNucleiTrack2);
  // instance 5 straddles the band edge at row 4
  testing::PaintRect(inst, 5, kTumor, 2, 8, 8, 12);
  LabelMap cm = testing::Labels(20, 20, kNucleiTrack2);
  testing::PaintRect(cm, kTumor, 2, 8, 8, 12);
  InstanceMap out = BorderCorrect(inst, cm, {4});
  CHECK(out == inst);
}

TEST_CASE("contact ties go to the lower id") {
  InstanceMap inst = testing::Instances(20, 20, kNucleiTrack2);
  testing::PaintRect(inst, 9, kTumor, 4, 4, 6, 6);
  testing::PaintRect(inst, 3, kStroma, 4, 14, 6, 16);
  LabelMap cm = testing::Labels(20, 20, kNucleiTrack2);
  // a band stripe along row 3 touching both instances equally
  for (int c = 4; c < 16; ++c) cm.At(3, c) = kLymphocyte;
  InstanceMap out = BorderCorrect(inst, cm, {4});
  CHECK(out.At(3, 10) == 3);
}

TEST_CASE("border margin checks") {
  InstanceMap inst = testing::Instances(8, 8, kNucleiTrack2);
  LabelMap cm = testing::Labels(8, 8, kNucleiTrack2);
  CHECK_THROWS_AS(BorderCorrect(inst, cm, {-1}), Error);
  CHECK_THROWS_AS(BorderCorrect(inst, cm, {4}), Error);
  CHECK_NOTHROW(BorderCorrect(inst, cm, {3}));
}

TEST_CASE("border correction leaves the interior alone") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    InstanceMap inst = testing::Instances(24, 24, kNucleiTrack2);
    for (std::uint32_t id = 1; id <= 6; ++id) {
      const int r = rng() % 20, c = rng() % 20;
      testing::PaintRect(inst, id, 1 + rng() % 10, r, c, r + 4, c + 4);
    }
    std::erase_if(inst.classes, [&](const auto& e) {
      return std::find(inst.ids.begin(), inst.ids.end(), e.first) ==
             inst.ids.end();
    });
    LabelMap cm = testing::Labels(24, 24, kNucleiTrack2);
    for (auto& v : cm.data) v = rng() % 3 == 0 ? rng() % 11 : 0;
    InstanceMap out = BorderCorrect(inst, cm, {5});
    for (int r = 5; r < 19; ++r) {
      for (int c = 5; c < 19; ++c) CHECK(out.At(r, c) == inst.At(r, c));
    }
    for (std::uint32_t id : out.ids) {
      if (id != 0) CHECK(out.classes.contains(id));
    }
  }
}

TEST_CASE("rasterize instance classes") {
  InstanceMap inst = testing::Instances(2, 2, kNucleiTrack2);
  inst.ids = {0, 1, 2, 2};
  inst.classes = {{1, 4}, {2, 9}};
  CHECK(RasterizeInstanceClasses(inst).data ==
        std::vector<std::uint16_t>{0, 4, 9, 9});
}

}  // namespace
}  // namespace autoctx
