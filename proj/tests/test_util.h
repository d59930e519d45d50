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

// Small builders shared by the unit and acceptance tests.

#ifndef AUTOCTX_TESTS_TEST_UTIL_H_
#define AUTOCTX_TESTS_TEST_UTIL_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "autoctx/types.h"

namespace autoctx::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("autoctx_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline LabelMap Labels(int h, int w, const std::string& scheme,
                       std::uint16_t fill = 0) {
  return LabelMap{h, w, scheme,
                  std::vector<std::uint16_t>(static_cast<std::size_t>(h) * w,
                                             fill)};
}

inline InstanceMap Instances(int h, int w, const std::string& scheme) {
  return InstanceMap{
      h, w, scheme,
      std::vector<std::uint32_t>(static_cast<std::size_t>(h) * w, 0), {}};
}

inline void PaintRect(InstanceMap& inst, std::uint32_t id, int cls, int r0,
                      int c0, int r1, int c1) {
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      inst.ids[static_cast<std::size_t>(r) * inst.width + c] = id;
    }
  }
  inst.classes[id] = cls;
}

inline void PaintRect(LabelMap& map, std::uint16_t label, int r0, int c0,
                      int r1, int c1) {
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) map.At(r, c) = label;
  }
}

inline ProbabilityMap OneHot(const LabelMap& labels, int channels) {
  ProbabilityMap out{labels.height, labels.width, channels, labels.scheme,
                     std::vector<float>(labels.PixelCount() * channels, 0.0f)};
  for (std::size_t i = 0; i < labels.PixelCount(); ++i) {
    out.data[i * channels + labels.data[i]] = 1.0f;
  }
  return out;
}

inline ProbabilityMap RandomMap(std::mt19937_64& rng, int h, int w,
                                int channels, const std::string& scheme) {
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  ProbabilityMap out{h, w, channels, scheme,
                     std::vector<float>(static_cast<std::size_t>(h) * w *
                                        channels)};
  for (float& v : out.data) v = unit(rng);
  return out;
}

}  // namespace autoctx::testing

#endif  // AUTOCTX_TESTS_TEST_UTIL_H_
