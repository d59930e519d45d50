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

#include <algorithm>
#include <random>

#include "autoctx/error.h"
#include "autoctx/frame_classifier.h"
#include "autoctx/schemes.h"
#include "doctest.h"
#include "test_util.h"

namespace autoctx {
namespace {

constexpr int kPrimaryEpidermis = tissue::kEpidermis;
constexpr int kMetastaticStroma = tissue::kStroma + tissue::kExtOffset;

TEST_CASE("one primary epidermis pixel wins") {
  LabelMap m = testing::Labels(1000, 1000, kPumaExt11, kMetastaticStroma);
  m.data[123456] = kPrimaryEpidermis;
  CHECK(ClassifyFrame(m) == FrameType::kPrimary);
}

TEST_CASE("majority of primary pixels") {
  LabelMap m = testing::Labels(10, 10, kPumaExt11);
  for (int i = 0; i < 60; ++i) m.data[i] = tissue::kTumor;
  for (int i = 60; i < 100; ++i) m.data[i] = kMetastaticStroma;
  CHECK(ClassifyFrame(m) == FrameType::kPrimary);
  for (int i = 0; i < 40; ++i) m.data[i] = tissue::kTumor;
  for (int i = 40; i < 100; ++i) m.data[i] = kMetastaticStroma;
  CHECK(ClassifyFrame(m) == FrameType::kMetastatic);
}

TEST_CASE("ties go to metastatic") {
  CHECK(ClassifyFrame(testing::Labels(8, 8, kPumaExt11)) ==
        FrameType::kMetastatic);
  LabelMap m = testing::Labels(2, 2, kPumaExt11);
  m.data = {1, 2, 7, 8};
  CHECK(ClassifyFrame(m) == FrameType::kMetastatic);
}

TEST_CASE("epidermis threshold and rule switch") {
  LabelMap m = testing::Labels(10, 10, kPumaExt11, kMetastaticStroma);
  m.data[0] = kPrimaryEpidermis;
  m.data[1] = kPrimaryEpidermis;
  CHECK(ClassifyFrame(m, {2, true}) == FrameType::kPrimary);
  CHECK(ClassifyFrame(m, {3, true}) == FrameType::kMetastatic);
  CHECK(ClassifyFrame(m, {1, false}) == FrameType::kMetastatic);
  // metastatic epidermis does not trigger the rule
  m.data[0] = m.data[1] = kPrimaryEpidermis + tissue::kExtOffset;
  CHECK(ClassifyFrame(m) == FrameType::kMetastatic);
}

TEST_CASE("classifier input errors") {
  CHECK_THROWS_AS(ClassifyFrame(testing::Labels(2, 2, kPumaTissue6)), Error);
  CHECK_THROWS_AS(ClassifyFrame(testing::Labels(2, 2, kPumaExt11), {0, true}),
                  Error);
  CHECK(ParseFrameType("primary") == FrameType::kPrimary);
  CHECK(ParseFrameType("metastatic") == FrameType::kMetastatic);
  CHECK_THROWS_AS(ParseFrameType("other"), Error);
}

TEST_CASE("classification ignores pixel order") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    LabelMap m = testing::Labels(12, 9, kPumaExt11);
    for (auto& v : m.data) v = rng() % 11;
    LabelMap shuffled = m;
    std::shuffle(shuffled.data.begin(), shuffled.data.end(), rng);
    CHECK(ClassifyFrame(m) == ClassifyFrame(shuffled));
  }
}

}  // namespace
}  // namespace autoctx
