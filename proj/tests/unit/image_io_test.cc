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
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "autoctx/error.h"
#include "autoctx/image_io.h"
#include "autoctx/schemes.h"
#include "doctest.h"
#include "test_util.h"

namespace autoctx {
namespace {

using testing::TempDir;

ErrorKind KindOf(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an autoctx::Error");
  return ErrorKind::kIo;
}

TEST_CASE("pmap minimal file decodes") {
  ProbabilityMap m{2, 2, 3, kNucleiTrack1,
                   {0.1f, 0.2f, 0.7f, 0.0f, 1.0f, 0.0f,
                    0.5f, 0.5f, 0.0f, 0.3f, 0.3f, 0.4f}};
  // nuclei_track1 has 4 classes, so 3 channels is rejected on write
  CHECK(KindOf([&] { EncodePmap(m); }) == ErrorKind::kValidation);

  RawTensor raw{2, 2, 3, "rgb", m.data};
  RawTensor back = DecodeTensor(EncodeTensor(raw));
  CHECK(back.height == 2);
  CHECK(back.width == 2);
  CHECK(back.channels == 3);
  CHECK(back.data == raw.data);
}

TEST_CASE("pmap header layout is fixed") {
  ProbabilityMap m{1, 1, 6, kPumaTissue6, std::vector<float>(6, 0.0f)};
  const std::string bytes = EncodePmap(m);
  const std::string header =
      R"({"height":1,"width":1,"channels":6,"dtype":"f32le","scheme":"puma_tissue6"})";
  CHECK(bytes.substr(0, 8) == "PMAPV001");
  std::uint32_t len = 0;
  std::memcpy(&len, bytes.data() + 8, 4);  // little-endian host
  CHECK(len == header.size());
  CHECK(bytes.substr(12, len) == header);
  CHECK(bytes.size() == 8 + 4 + header.size() + 24);
}

TEST_CASE("pmap roundtrip is bit identical and deterministic") {
  TempDir dir;
  std::mt19937_64 rng(3);
  ProbabilityMap m = testing::RandomMap(rng, 5, 7, 6, kPumaTissue6);
  WritePmap(m, dir / "a.pmap");
  WritePmap(m, dir / "b.pmap");
  CHECK(ReadFileBytes(dir / "a.pmap") == ReadFileBytes(dir / "b.pmap"));
  ProbabilityMap back = ReadPmap(dir / "a.pmap");
  REQUIRE(back.data.size() == m.data.size());
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    CHECK(std::bit_cast<std::uint32_t>(back.data[i]) ==
          std::bit_cast<std::uint32_t>(m.data[i]));
  }
  CHECK(back == m);
}

TEST_CASE("pmap errors") {
  TempDir dir;
  ProbabilityMap m{2, 2, 6, kPumaTissue6, std::vector<float>(24, 0.25f)};
  std::string bytes = EncodePmap(m);

  SUBCASE("bad magic") {
    std::string b = bytes;
    b[7] = '2';
    CHECK(KindOf([&] { DecodePmap(b); }) == ErrorKind::kFormat);
  }
  SUBCASE("truncated payload") {
    CHECK(KindOf([&] { DecodePmap(bytes.substr(0, bytes.size() - 4)); }) ==
          ErrorKind::kCorruption);
  }
  SUBCASE("trailing payload") {
    CHECK(KindOf([&] { DecodePmap(bytes + "abcd"); }) == ErrorKind::kCorruption);
  }
  SUBCASE("header length past end") {
    std::string b = bytes.substr(0, 14);
    CHECK(KindOf([&] { DecodePmap(b); }) == ErrorKind::kCorruption);
  }
  SUBCASE("header not json") {
    std::string b = bytes;
    b[12] = '!';
    CHECK(KindOf([&] { DecodePmap(b); }) == ErrorKind::kFormat);
  }
  SUBCASE("value out of range is rejected and nothing is written") {
    ProbabilityMap bad = m;
    bad.data[3] = 1.5f;
    CHECK(KindOf([&] { WritePmap(bad, dir / "bad.pmap"); }) ==
          ErrorKind::kValidation);
    CHECK_FALSE(std::filesystem::exists(dir / "bad.pmap"));
  }
  SUBCASE("nan is rejected") {
    ProbabilityMap bad = m;
    bad.data[0] = std::nanf("");
    CHECK(KindOf([&] { EncodePmap(bad); }) == ErrorKind::kValidation);
  }
  SUBCASE("channel count must match scheme") {
    ProbabilityMap bad{1, 1, 5, kPumaTissue6, std::vector<float>(5, 0.0f)};
    CHECK(KindOf([&] { EncodePmap(bad); }) == ErrorKind::kValidation);
  }
  SUBCASE("unknown scheme") {
    ProbabilityMap bad{1, 1, 5, "nope", std::vector<float>(5, 0.0f)};
    CHECK(KindOf([&] { EncodePmap(bad); }) == ErrorKind::kLookup);
  }
  SUBCASE("missing file") {
    CHECK(KindOf([&] { ReadPmap(dir / "missing.pmap"); }) == ErrorKind::kIo);
  }
}

TEST_CASE("label png roundtrip and validation") {
  TempDir dir;
  LabelMap zeros = testing::Labels(4, 4, kPumaTissue6);
  WriteLabelPng(zeros, dir / "z.png");
  CHECK(ReadLabelPng(dir / "z.png", kPumaTissue6) == zeros);

  LabelMap ext = testing::Labels(3, 5, kPumaExt11);
  for (std::size_t i = 0; i < ext.data.size(); ++i) ext.data[i] = i % 11;
  WriteLabelPng(ext, dir / "e.png");
  CHECK(ReadLabelPng(dir / "e.png", kPumaExt11) == ext);

  // the same file is out of range under the 6-class scheme
  CHECK(KindOf([&] { ReadLabelPng(dir / "e.png", kPumaTissue6); }) ==
        ErrorKind::kValidation);

  LabelMap six = testing::Labels(2, 2, kPumaTissue6);
  six.data[1] = 6;
  CHECK(KindOf([&] { WriteLabelPng(six, dir / "six.png"); }) ==
        ErrorKind::kValidation);

  WriteFileBytes(dir / "junk.png", "not a png at all");
  CHECK(KindOf([&] { ReadLabelPng(dir / "junk.png", kPumaTissue6); }) ==
        ErrorKind::kFormat);
}

TEST_CASE("rgb png is rejected as a label map") {
  TempDir dir;
  RgbImage rgb{2, 3, std::vector<float>(18, 0.5f)};
  WriteRgbPng(rgb, dir / "rgb.png");
  CHECK(KindOf([&] { ReadLabelPng(dir / "rgb.png", kPumaTissue6); }) ==
        ErrorKind::kFormat);
  RgbImage back = ReadRgbPng(dir / "rgb.png");
  CHECK(back.height == 2);
  CHECK(back.width == 3);
  for (float v : back.data) CHECK(v == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("instance files") {
  TempDir dir;
  InstanceMap inst = testing::Instances(1, 3, kNucleiTrack2);
  inst.ids = {0, 1, 2};
  inst.classes = {{1, 1}, {2, 3}};
  WriteInstances(inst, dir / "i.png", dir / "i.json");
  CHECK(ReadInstances(dir / "i.png", dir / "i.json") == inst);
  CHECK(ReadFileBytes(dir / "i.json").find(R"("scheme":"nuclei_track2")") !=
        std::string::npos);

  SUBCASE("missing class entry") {
    WriteFileBytes(dir / "bad.json",
                   R"({"scheme":"nuclei_track2","classes":{"1":1}})");
    CHECK(KindOf([&] { ReadInstances(dir / "i.png", dir / "bad.json"); }) ==
          ErrorKind::kConsistency);
  }
  SUBCASE("class outside scheme") {
    WriteFileBytes(dir / "bad.json",
                   R"({"scheme":"nuclei_track2","classes":{"1":1,"2":11}})");
    CHECK(KindOf([&] { ReadInstances(dir / "i.png", dir / "bad.json"); }) ==
          ErrorKind::kValidation);
  }
  SUBCASE("background id carries no class") {
    WriteFileBytes(dir / "bad.json",
                   R"({"scheme":"nuclei_track2","classes":{"0":1,"1":1,"2":1}})");
    CHECK(KindOf([&] { ReadInstances(dir / "i.png", dir / "bad.json"); }) ==
          ErrorKind::kValidation);
  }
  SUBCASE("malformed sidecar") {
    WriteFileBytes(dir / "bad.json", "{");
    CHECK(KindOf([&] { ReadInstances(dir / "i.png", dir / "bad.json"); }) ==
          ErrorKind::kFormat);
  }
  SUBCASE("empty instance map") {
    InstanceMap empty = testing::Instances(4, 4, kNucleiTrack1);
    WriteInstances(empty, dir / "e.png", dir / "e.json");
    InstanceMap back = ReadInstances(dir / "e.png", dir / "e.json");
    CHECK(back.classes.empty());
    CHECK(back == empty);
  }
  SUBCASE("write refuses inconsistent map") {
    InstanceMap bad = inst;
    bad.classes.erase(2);
    CHECK(KindOf([&] { WriteInstances(bad, dir / "x.png", dir / "x.json"); }) ==
          ErrorKind::kConsistency);
    CHECK_FALSE(std::filesystem::exists(dir / "x.png"));
  }
}

TEST_CASE("argmax") {
  ProbabilityMap m{1, 2, 4, kNucleiTrack1,
                   {0.1f, 0.7f, 0.2f, 0.0f, 0.5f, 0.5f, 0.0f, 0.0f}};
  LabelMap l = Argmax(m);
  CHECK(l.scheme == kNucleiTrack1);
  CHECK(l.data == std::vector<std::uint16_t>{1, 0});
}

TEST_CASE("argmax is scale invariant") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    ProbabilityMap m = testing::RandomMap(rng, 6, 6, 6, kPumaTissue6);
    ProbabilityMap scaled = m;
    for (float& v : scaled.data) v *= 0.25f;
    CHECK(Argmax(m) == Argmax(scaled));
  }
}

}  // namespace
}  // namespace autoctx
