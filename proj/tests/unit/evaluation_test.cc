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

#include <filesystem>

#include "autoctx/error.h"
#include "autoctx/evaluation.h"
#include "autoctx/image_io.h"
#include "autoctx/pipeline.h"
#include "autoctx/synth.h"
#include "doctest.h"
#include "test_util.h"

namespace autoctx {
namespace {

namespace fs = std::filesystem;

ErrorKind KindOf(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an autoctx::Error");
  return ErrorKind::kIo;
}

TEST_CASE("perfect predictions score one") {
  testing::TempDir dir;
  SynthFixtures(3, {2, 64, 8, 2, {}}, dir.path());
  // ground truth against itself
  auto doc = EvalReport(dir / "gt", dir / "gt");
  CHECK(doc["mean"].get<double>() == 1.0);
  CHECK(doc["micro_dice"]["aggregate"].get<double>() == 1.0);
  CHECK(doc["micro_pq"]["aggregate"].get<double>() == 1.0);

  for (const char* m : {"dice", "f1", "pq", "micropq"}) {
    MetricReport r = EvaluateDirs(ParseMetricKind(m), dir / "gt", dir / "gt");
    CHECK(r.aggregate == 1.0);
  }
  CHECK_THROWS_AS(ParseMetricKind("aji"), Error);
}

TEST_CASE("directory alignment") {
  testing::TempDir dir;
  fs::create_directories(dir / "gt");
  fs::create_directories(dir / "pred");
  CHECK(KindOf([&] { EvalReport(dir / "pred", dir / "gt"); }) ==
        ErrorKind::kUsage);

  fs::create_directories(dir / "gt/a");
  fs::create_directories(dir / "pred/b");
  CHECK(KindOf([&] { AlignedFrameIds(dir / "pred", dir / "gt"); }) ==
        ErrorKind::kUsage);

  fs::create_directories(dir / "pred/a");
  fs::remove_all(dir / "pred/b");
  CHECK(AlignedFrameIds(dir / "pred", dir / "gt") ==
        std::vector<std::string>{"a"});
  // no files at all in the aligned frames
  CHECK(KindOf([&] { EvalReport(dir / "pred", dir / "gt"); }) ==
        ErrorKind::kUsage);

  LabelMap t = testing::Labels(4, 4, kPumaTissue6, 1);
  WriteLabelPng(t, dir / "gt/a/tissue.png");
  CHECK(KindOf([&] { EvalReport(dir / "pred", dir / "gt"); }) ==
        ErrorKind::kUsage);
  WriteLabelPng(t, dir / "pred/a/tissue.png");
  auto doc = EvalReport(dir / "pred", dir / "gt");
  CHECK(doc["micro_dice"]["aggregate"].get<double>() == 1.0);
  CHECK_FALSE(doc.contains("mean"));
}

}  // namespace
}  // namespace autoctx
