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

#include "autoctx/nuclei_fusion.h"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "autoctx/components.h"
#include "autoctx/error.h"
#include "autoctx/image_io.h"
#include "autoctx/schemes.h"

namespace autoctx {

namespace {

void CheckPair(const InstanceMap& inst, const LabelMap& class_map) {
  ValidateInstanceMap(inst);
  ValidateLabelMap(class_map);
  if (inst.height != class_map.height || inst.width != class_map.width) {
    throw ValidationError("instance map and class map differ in shape");
  }
  if (inst.scheme != class_map.scheme) {
    throw ValidationError("instance scheme '" + inst.scheme +
                          "' does not match class map scheme '" +
                          class_map.scheme + "'");
  }
}

// Index of the largest count, lowest index on ties; -1 when all are zero.
int ArgmaxCount(const std::vector<std::int64_t>& counts, int first) {
  int best = -1;
  std::int64_t best_count = 0;
  for (int c = first; c < static_cast<int>(counts.size()); ++c) {
    if (counts[c] > best_count) {
      best = c;
      best_count = counts[c];
    }
  }
  return best;
}

}  // namespace

VoteFallback ParseVoteFallback(std::string_view name) {
  if (name == "keep_original") return VoteFallback::kKeepOriginal;
  if (name == "lowest_foreground") return VoteFallback::kLowestForeground;
  throw ValidationError("unknown vote fallback '" + std::string(name) + "'");
}

InstanceMap MajorityVoteClassify(const InstanceMap& inst,
                                 const LabelMap& class_map,
                                 const VoteParams& params) {
  CheckPair(inst, class_map);
  const int classes = GetScheme(class_map.scheme).size();

  std::map<std::uint32_t, std::vector<std::int64_t>> votes;
  for (std::size_t p = 0; p < inst.ids.size(); ++p) {
    const std::uint32_t id = inst.ids[p];
    if (id == 0) continue;
    auto [it, inserted] = votes.try_emplace(id);
    if (inserted) it->second.assign(classes, 0);
    ++it->second[class_map.data[p]];
  }

  InstanceMap out = inst;
  for (const auto& [id, counts] : votes) {
    const int winner = ArgmaxCount(counts, 1);
    if (winner > 0) {
      out.classes[id] = winner;
    } else if (params.fallback == VoteFallback::kLowestForeground) {
      out.classes[id] = 1;
    }
  }
  return out;
}

InstanceMap BorderCorrect(const InstanceMap& inst, const LabelMap& class_map,
                          const BorderParams& params) {
  CheckPair(inst, class_map);
  const int h = inst.height;
  const int w = inst.width;
  if (params.margin < 0 || 2 * params.margin >= std::min(h, w)) {
    throw ValidationError("border margin " + std::to_string(params.margin) +
                          " must be >= 0 and < min(H,W)/2");
  }
  if (params.margin == 0) return inst;

  const int m = params.margin;
  auto in_band = [&](int r, int c) {
    return r < m || c < m || r >= h - m || c >= w - m;
  };

  InstanceMap out = inst;
  std::vector<std::uint8_t> band_mask(out.PixelCount(), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!in_band(r, c)) continue;
      const std::size_t p = static_cast<std::size_t>(r) * w + c;
      out.ids[p] = 0;
      band_mask[p] = class_map.data[p] != 0 ? 1 : 0;
    }
  }
  // Drop class entries of instances that lived only in the band.
  const auto survivors = InstanceAreas(out);
  std::erase_if(out.classes, [&](const auto& entry) {
    return !survivors.contains(entry.first);
  });

  std::uint32_t next_id = 0;
  for (const auto& [id, cls] : inst.classes) next_id = std::max(next_id, id);
  for (std::uint32_t id : inst.ids) next_id = std::max(next_id, id);

  const ComponentLabels comps = LabelComponents(band_mask, h, w);
  const int classes = GetScheme(class_map.scheme).size();
  struct Tally {
    std::map<std::uint32_t, std::int64_t> contact;  // instance id -> pixels
    std::vector<std::int64_t> class_counts;
  };
  std::vector<Tally> tallies(comps.count + 1);
  for (auto& t : tallies) t.class_counts.assign(classes, 0);

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t p = static_cast<std::size_t>(r) * w + c;
      const std::uint32_t comp = comps.ids[p];
      if (comp == 0) continue;
      Tally& tally = tallies[comp];
      ++tally.class_counts[class_map.data[p]];
      // Each component pixel counts once per distinct neighboring instance.
      std::uint32_t seen[8];
      int n_seen = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int nr = r + dr;
          const int nc = c + dc;
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          const std::uint32_t neighbor =
              out.ids[static_cast<std::size_t>(nr) * w + nc];
          if (neighbor == 0) continue;
          if (std::find(seen, seen + n_seen, neighbor) != seen + n_seen) {
            continue;
          }
          seen[n_seen++] = neighbor;
          ++tally.contact[neighbor];
        }
      }
    }
  }

  std::vector<std::uint32_t> assigned(comps.count + 1, 0);
  for (std::uint32_t comp = 1; comp <= comps.count; ++comp) {
    const Tally& tally = tallies[comp];
    std::uint32_t best = 0;
    std::int64_t best_contact = 0;
    for (const auto& [id, contact] : tally.contact) {
      if (contact > best_contact) {
        best = id;
        best_contact = contact;
      }
    }
    if (best != 0) {
      assigned[comp] = best;
      continue;
    }
    if (next_id >= 65535) {
      throw ValidationError("border correction ran out of 16-bit instance ids");
    }
    assigned[comp] = ++next_id;
    out.classes[next_id] = ArgmaxCount(tally.class_counts, 1);
  }
  for (std::size_t p = 0; p < out.ids.size(); ++p) {
    if (comps.ids[p] != 0) out.ids[p] = assigned[comps.ids[p]];
  }
  return out;
}

LabelMap RasterizeInstanceClasses(const InstanceMap& inst) {
  ValidateInstanceMap(inst);
  LabelMap out{inst.height, inst.width, inst.scheme,
               std::vector<std::uint16_t>(inst.PixelCount(), 0)};
  for (std::size_t p = 0; p < inst.ids.size(); ++p) {
    if (inst.ids[p] != 0) {
      out.data[p] = static_cast<std::uint16_t>(inst.classes.at(inst.ids[p]));
    }
  }
  return out;
}

}  // namespace autoctx
