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

#ifndef AUTOCTX_SCHEMES_H_
#define AUTOCTX_SCHEMES_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "autoctx/types.h"

namespace autoctx {

enum class ClassGroup { kBackground, kPrimary, kMetastatic, kForeground };

const char* ClassGroupName(ClassGroup group);
ClassGroup ParseClassGroup(std::string_view name);

struct ClassInfo {
  int index = 0;
  std::string name;
  ClassGroup group = ClassGroup::kForeground;

  bool operator==(const ClassInfo&) const = default;
};

// Named, ordered class list. Index 0 is always the background class.
class ClassScheme {
 public:
  ClassScheme(std::string id, std::vector<ClassInfo> classes);

  const std::string& id() const { return id_; }
  const std::vector<ClassInfo>& classes() const { return classes_; }
  int size() const { return static_cast<int>(classes_.size()); }
  const ClassInfo& at(int index) const { return classes_.at(index); }

  // Throws LookupError for an unknown name.
  int IndexOf(std::string_view name) const;

  bool operator==(const ClassScheme&) const = default;

 private:
  std::string id_;
  std::vector<ClassInfo> classes_;
};

// Built-in scheme ids.
inline constexpr char kPumaTissue6[] = "puma_tissue6";
inline constexpr char kPumaExt11[] = "puma_ext11";
inline constexpr char kNucleiTrack1[] = "nuclei_track1";
inline constexpr char kNucleiTrack2[] = "nuclei_track2";
inline constexpr char kMonusacNuclei[] = "monusac_nuclei";
inline constexpr char kPanoptilsTissue[] = "panoptils_tissue";
inline constexpr char kPanoptilsNuclei[] = "panoptils_nuclei";

// Class indices of puma_tissue6. puma_ext11 uses i for primary and i + 5 for
// metastatic variants of the same foreground class.
namespace tissue {
inline constexpr int kBackground = 0;
inline constexpr int kTumor = 1;
inline constexpr int kStroma = 2;
inline constexpr int kEpidermis = 3;
inline constexpr int kNecrosis = 4;
inline constexpr int kBloodVessel = 5;
inline constexpr int kCount = 6;
inline constexpr int kExtOffset = 5;
}  // namespace tissue

// Registry lookups are safe from any thread. Throws LookupError.
const ClassScheme& GetScheme(std::string_view scheme_id);
bool HasScheme(std::string_view scheme_id);
std::vector<std::string> SchemeIds();

// Registering an id that already exists is allowed only with an identical
// class list; anything else is a ValidationError.
const ClassScheme& RegisterScheme(ClassScheme scheme);

// `{"scheme_id": ..., "classes": [{"index":..,"name":..,"group":..}]}`
ClassScheme ParseSchemeJson(std::string_view text);
const ClassScheme& LoadSchemeFile(const std::filesystem::path& path);

struct RemapTable {
  std::string source;
  std::string target;
  std::vector<int> mapping;  // source index -> target index
  std::set<int> drop_set;    // source indices that reject the whole image
};

RemapTable IdentityRemap(std::string_view scheme_id);
// puma_ext11 -> puma_tissue6, folding primary/metastatic variants together.
RemapTable ExtToTissueRemap();
// PanopTILs tissue labels -> puma_tissue6. Normal epithelium rejects.
RemapTable PanoptilsToTissueRemap();

// Returns std::nullopt when any pixel falls in the drop set.
std::optional<LabelMap> RemapLabels(const LabelMap& map,
                                    const RemapTable& table);

// Pixel count per class index.
std::vector<std::int64_t> ClassHistogram(const LabelMap& map);

// Non-background pixel counts per group. Every non-background group of the
// scheme appears in the result, even with a zero count.
std::map<ClassGroup, std::int64_t> GroupCounts(const LabelMap& map);

}  // namespace autoctx

#endif  // AUTOCTX_SCHEMES_H_
