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
#include "doctest.h"

namespace autoctx {
namespace {

TEST_CASE("diagonal pixels form one component") {
  std::vector<std::uint8_t> mask = {1, 0, 0, 1};
  ComponentLabels c = LabelComponents(mask, 2, 2);
  CHECK(c.count == 1);
  CHECK(c.ids == std::vector<std::uint32_t>{1, 0, 0, 1});
}

TEST_CASE("empty mask has no components") {
  std::vector<std::uint8_t> mask(16, 0);
  CHECK(LabelComponents(mask, 4, 4).count == 0);
  InstanceMap inst = ConnectedComponents(mask, 4, 4);
  CHECK(inst.classes.empty());
}

TEST_CASE("ids follow raster order of first pixel") {
  // blob A starts at (0,3), blob B at (1,0), blob C at (3,2)
  std::vector<std::uint8_t> mask = {
      0, 0, 0, 1, 1,  //
      1, 0, 0, 1, 0,  //
      1, 0, 0, 0, 0,  //
      0, 0, 1, 0, 0,  //
  };
  ComponentLabels c = LabelComponents(mask, 4, 5);
  CHECK(c.count == 3);
  CHECK(c.ids[3] == 1);
  CHECK(c.ids[5] == 2);
  CHECK(c.ids[10] == 2);
  CHECK(c.ids[17] == 3);
  InstanceMap inst = ConnectedComponents(mask, 4, 5);
  CHECK(inst.classes.size() == 3);
}

TEST_CASE("centroids") {
  InstanceMap inst{4, 8, "", std::vector<std::uint32_t>(32, 0), {}};
  inst.ids[3 * 8 + 7] = 1;
  CHECK(Centroids(inst).at(1).row == 3.0);
  CHECK(Centroids(inst).at(1).col == 7.0);

  InstanceMap block{2, 2, "", {4, 4, 4, 4}, {}};
  CHECK(Centroids(block).at(4).row == 0.5);
  CHECK(Centroids(block).at(4).col == 0.5);
  CHECK(Centroids(block).at(4).area == 4);

  InstanceMap ell{2, 2, "", {9, 0, 9, 9}, {}};
  CHECK(Centroids(ell).at(9).row == doctest::Approx(2.0 / 3.0));
  CHECK(Centroids(ell).at(9).col == doctest::Approx(1.0 / 3.0));
  CHECK(InstanceAreas(ell).at(9) == 3);
}

TEST_CASE("component pixels are 8-connected to each other only") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int h = 1 + rng() % 16, w = 1 + rng() % 16;
    std::vector<std::uint8_t> mask(h * w);
    for (auto& v : mask) v = rng() % 3 == 0;
    ComponentLabels c = LabelComponents(mask, h, w);
    for (int r = 0; r < h; ++r) {
      for (int col = 0; col < w; ++col) {
        const std::uint32_t id = c.ids[r * w + col];
        CHECK((id == 0) == (mask[r * w + col] == 0));
        if (id == 0) continue;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = col + dc;
            if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
            const std::uint32_t other = c.ids[rr * w + cc];
            if (other != 0) CHECK(other == id);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace autoctx
