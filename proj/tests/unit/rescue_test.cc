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

#include "autoctx/error.h"
#include "autoctx/rescue.h"
#include "autoctx/schemes.h"
#include "doctest.h"
#include "test_util.h"

namespace autoctx {
namespace {

constexpr auto kNec = static_cast<std::uint16_t>(tissue::kNecrosis);
constexpr auto kStroma = static_cast<std::uint16_t>(tissue::kStroma);

TEST_CASE("overlapping component is copied in whole") {
  LabelMap s1 = testing::Labels(20, 20, kPumaTissue6, kStroma);
  testing::PaintRect(s1, kNec, 5, 5, 15, 15);  // 100 px
  LabelMap s4 = testing::Labels(20, 20, kPumaTissue6, kStroma);
  testing::PaintRect(s4, kNec, 5, 5, 6, 15);  // 10 px inside it
  LabelMap out = NecrosisRescue(s1, s4);
  CHECK(out == s1);
}

TEST_CASE("component without overlap keeps stage 4") {
  LabelMap s1 = testing::Labels(20, 20, kPumaTissue6, kStroma);
  testing::PaintRect(s1, kNec, 0, 0, 5, 5);
  testing::PaintRect(s1, kNec, 10, 10, 15, 15);
  LabelMap s4 = testing::Labels(20, 20, kPumaTissue6, kStroma);
  s4.At(12, 12) = kNec;
  s4.At(19, 19) = tissue::kTumor;
  LabelMap out = NecrosisRescue(s1, s4);
  CHECK(out.At(0, 0) == kStroma);
  CHECK(out.At(10, 10) == kNec);
  CHECK(out.At(14, 14) == kNec);
  CHECK(out.At(19, 19) == tissue::kTumor);
}

TEST_CASE("no stage 1 necrosis returns stage 4") {
  LabelMap s1 = testing::Labels(8, 8, kPumaTissue6, kStroma);
  LabelMap s4 = testing::Labels(8, 8, kPumaTissue6, tissue::kTumor);
  s4.At(3, 3) = kNec;
  CHECK(NecrosisRescue(s1, s4) == s4);
}

TEST_CASE("disabled rescue returns stage 4") {
  LabelMap s1 = testing::Labels(8, 8, kPumaTissue6, kNec);
  LabelMap s4 = testing::Labels(8, 8, kPumaTissue6, kStroma);
  s4.At(0, 0) = kNec;
  CHECK(NecrosisRescue(s1, s4, {false, tissue::kNecrosis}) == s4);
  CHECK(NecrosisRescue(s1, s4) == s1);
}

TEST_CASE("rescue never removes target pixels") {
  LabelMap s1 = testing::Labels(6, 6, kPumaTissue6, kStroma);
  LabelMap s4 = testing::Labels(6, 6, kPumaTissue6, kNec);
  LabelMap out = NecrosisRescue(s1, s4);
  CHECK(out == s4);
}

TEST_CASE("rescue input checks") {
  LabelMap a = testing::Labels(4, 4, kPumaTissue6);
  CHECK_THROWS_AS(NecrosisRescue(a, testing::Labels(4, 5, kPumaTissue6)), Error);
  CHECK_THROWS_AS(NecrosisRescue(a, testing::Labels(4, 4, kPumaExt11)), Error);
  CHECK_THROWS_AS(NecrosisRescue(a, a, {true, 0}), Error);
  CHECK_THROWS_AS(NecrosisRescue(a, a, {true, 6}), Error);
}

}  // namespace
}  // namespace autoctx
