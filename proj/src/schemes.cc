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

#include "autoctx/schemes.h"

#include <algorithm>
#include <fstream>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "autoctx/error.h"
#include "json.hpp"

namespace autoctx {

namespace {

using Json = nlohmann::json;

ClassScheme MakeScheme(std::string id,
                       std::initializer_list<std::pair<const char*, ClassGroup>>
                           entries) {
  std::vector<ClassInfo> classes;
  int index = 0;
  for (const auto& [name, group] : entries) {
    classes.push_back({index++, name, group});
  }
  return ClassScheme(std::move(id), std::move(classes));
}

ClassScheme MakeFlatScheme(std::string id,
                           std::initializer_list<const char*> foreground) {
  std::vector<ClassInfo> classes{{0, "background", ClassGroup::kBackground}};
  int index = 1;
  for (const char* name : foreground) {
    classes.push_back({index++, name, ClassGroup::kForeground});
  }
  return ClassScheme(std::move(id), std::move(classes));
}

const char* const kTissueNames[] = {"tumor", "stroma", "epidermis", "necrosis",
                                    "blood_vessel"};

std::vector<ClassScheme> BuiltinSchemes() {
  std::vector<ClassScheme> out;
  out.push_back(MakeFlatScheme(kPumaTissue6, {"tumor", "stroma", "epidermis",
                                              "necrosis", "blood_vessel"}));

  std::vector<ClassInfo> ext{{0, "background", ClassGroup::kBackground}};
  for (int i = 0; i < 5; ++i) {
    ext.push_back({1 + i, std::string("primary_") + kTissueNames[i],
                   ClassGroup::kPrimary});
  }
  for (int i = 0; i < 5; ++i) {
    ext.push_back({6 + i, std::string("metastatic_") + kTissueNames[i],
                   ClassGroup::kMetastatic});
  }
  out.emplace_back(kPumaExt11, std::move(ext));

  out.push_back(MakeFlatScheme(kNucleiTrack1, {"tumor", "lymphocyte", "other"}));
  out.push_back(MakeFlatScheme(
      kNucleiTrack2,
      {"tumor", "lymphocyte", "plasma_cell", "histiocyte", "melanophage",
       "neutrophil", "stroma", "endothelium", "epithelium", "apoptosis"}));
  out.push_back(MakeFlatScheme(
      kMonusacNuclei, {"epithelial", "lymphocyte", "macrophage", "neutrophil"}));

  constexpr auto kBg = ClassGroup::kBackground;
  constexpr auto kFg = ClassGroup::kForeground;
  out.push_back(MakeScheme(kPanoptilsTissue, {{"exclude", kBg},
                                              {"cancerous_epithelium", kFg},
                                              {"stroma", kFg},
                                              {"tils", kFg},
                                              {"normal_epithelium", kFg},
                                              {"junk_debris", kFg},
                                              {"blood_vessel", kFg},
                                              {"other", kBg},
                                              {"white_space", kBg}}));
  out.push_back(MakeScheme(kPanoptilsNuclei, {{"background", kBg},
                                              {"exclude", kBg},
                                              {"cancer", kFg},
                                              {"stromal", kFg},
                                              {"large_stromal", kFg},
                                              {"lymphocyte", kFg},
                                              {"plasma_large_til", kFg},
                                              {"normal_epithelial", kFg},
                                              {"other", kFg},
                                              {"unknown", kFg}}));
  return out;
}

class Registry {
 public:
  Registry() {
    for (auto& scheme : BuiltinSchemes()) {
      std::string id = scheme.id();
      schemes_.emplace(std::move(id),
                       std::make_unique<ClassScheme>(std::move(scheme)));
    }
  }

  const ClassScheme* Find(std::string_view id) const {
    std::shared_lock lock(mu_);
    auto it = schemes_.find(std::string(id));
    return it == schemes_.end() ? nullptr : it->second.get();
  }

  const ClassScheme& Add(ClassScheme scheme) {
    std::unique_lock lock(mu_);
    auto it = schemes_.find(scheme.id());
    if (it != schemes_.end()) {
      if (!(*it->second == scheme)) {
        throw ValidationError("scheme '" + scheme.id() +
                              "' already registered with different classes");
      }
      return *it->second;
    }
    std::string id = scheme.id();
    auto [pos, inserted] = schemes_.emplace(
        std::move(id), std::make_unique<ClassScheme>(std::move(scheme)));
    return *pos->second;
  }

  std::vector<std::string> Ids() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> ids;
    for (const auto& [id, scheme] : schemes_) ids.push_back(id);
    return ids;
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<ClassScheme>, std::less<>> schemes_;
};

Registry& GlobalRegistry() {
  static Registry registry;
  return registry;
}

}  // namespace

const char* ClassGroupName(ClassGroup group) {
  switch (group) {
    case ClassGroup::kBackground:
      return "background";
    case ClassGroup::kPrimary:
      return "primary";
    case ClassGroup::kMetastatic:
      return "metastatic";
    case ClassGroup::kForeground:
      return "foreground";
  }
  return "?";
}

ClassGroup ParseClassGroup(std::string_view name) {
  if (name == "background") return ClassGroup::kBackground;
  if (name == "primary") return ClassGroup::kPrimary;
  if (name == "metastatic") return ClassGroup::kMetastatic;
  if (name == "foreground") return ClassGroup::kForeground;
  throw ValidationError("unknown class group '" + std::string(name) + "'");
}

ClassScheme::ClassScheme(std::string id, std::vector<ClassInfo> classes)
    : id_(std::move(id)), classes_(std::move(classes)) {
  if (id_.empty()) throw ValidationError("scheme id must not be empty");
  if (classes_.empty()) {
    throw ValidationError("scheme '" + id_ + "' has no classes");
  }
  std::set<std::string, std::less<>> names;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].index != static_cast<int>(i)) {
      throw ValidationError("scheme '" + id_ +
                            "': class indices must be 0..K-1 in order");
    }
    if (!names.insert(classes_[i].name).second) {
      throw ValidationError("scheme '" + id_ + "': duplicate class name '" +
                            classes_[i].name + "'");
    }
  }
  if (classes_[0].group != ClassGroup::kBackground) {
    throw ValidationError("scheme '" + id_ + "': index 0 must be background");
  }
}

int ClassScheme::IndexOf(std::string_view name) const {
  for (const auto& info : classes_) {
    if (info.name == name) return info.index;
  }
  throw LookupError("scheme '" + id_ + "' has no class '" + std::string(name) +
                    "'");
}

const ClassScheme& GetScheme(std::string_view scheme_id) {
  const ClassScheme* scheme = GlobalRegistry().Find(scheme_id);
  if (scheme == nullptr) {
    throw LookupError("unknown scheme '" + std::string(scheme_id) + "'");
  }
  return *scheme;
}

bool HasScheme(std::string_view scheme_id) {
  return GlobalRegistry().Find(scheme_id) != nullptr;
}

std::vector<std::string> SchemeIds() { return GlobalRegistry().Ids(); }

const ClassScheme& RegisterScheme(ClassScheme scheme) {
  return GlobalRegistry().Add(std::move(scheme));
}

ClassScheme ParseSchemeJson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("scheme JSON: ") + e.what());
  }
  try {
    std::vector<ClassInfo> classes;
    for (const auto& entry : doc.at("classes")) {
      classes.push_back({entry.at("index").get<int>(),
                         entry.at("name").get<std::string>(),
                         ParseClassGroup(entry.at("group").get<std::string>())});
    }
    std::sort(classes.begin(), classes.end(),
              [](const ClassInfo& a, const ClassInfo& b) {
                return a.index < b.index;
              });
    return ClassScheme(doc.at("scheme_id").get<std::string>(),
                       std::move(classes));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("scheme JSON: ") + e.what());
  }
}

const ClassScheme& LoadSchemeFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scheme file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return RegisterScheme(ParseSchemeJson(buffer.str()));
}

RemapTable IdentityRemap(std::string_view scheme_id) {
  const ClassScheme& scheme = GetScheme(scheme_id);
  RemapTable table{scheme.id(), scheme.id(), {}, {}};
  for (int i = 0; i < scheme.size(); ++i) table.mapping.push_back(i);
  return table;
}

RemapTable ExtToTissueRemap() {
  RemapTable table{kPumaExt11, kPumaTissue6, {0}, {}};
  for (int i = 1; i <= 10; ++i) {
    table.mapping.push_back(i > tissue::kExtOffset ? i - tissue::kExtOffset
                                                   : i);
  }
  return table;
}

RemapTable PanoptilsToTissueRemap() {
  const ClassScheme& src = GetScheme(kPanoptilsTissue);
  RemapTable table{kPanoptilsTissue, kPumaTissue6,
                   std::vector<int>(src.size(), tissue::kBackground), {}};
  table.mapping[src.IndexOf("cancerous_epithelium")] = tissue::kTumor;
  table.mapping[src.IndexOf("stroma")] = tissue::kStroma;
  table.mapping[src.IndexOf("tils")] = tissue::kStroma;
  table.mapping[src.IndexOf("junk_debris")] = tissue::kNecrosis;
  table.mapping[src.IndexOf("blood_vessel")] = tissue::kBloodVessel;
  table.drop_set.insert(src.IndexOf("normal_epithelium"));
  return table;
}

std::optional<LabelMap> RemapLabels(const LabelMap& map,
                                    const RemapTable& table) {
  if (map.scheme != table.source) {
    throw ValidationError("remap expects scheme '" + table.source +
                          "', got '" + map.scheme + "'");
  }
  const ClassScheme& source = GetScheme(table.source);
  const ClassScheme& target = GetScheme(table.target);
  if (static_cast<int>(table.mapping.size()) != source.size()) {
    throw ValidationError("remap table must cover every source class");
  }
  for (int to : table.mapping) {
    if (to < 0 || to >= target.size()) {
      throw ValidationError("remap target index out of range");
    }
  }
  LabelMap out{map.height, map.width, table.target, {}};
  out.data.reserve(map.data.size());
  for (std::uint16_t label : map.data) {
    if (label >= table.mapping.size()) {
      throw ValidationError("label outside source scheme");
    }
    if (table.drop_set.contains(label)) return std::nullopt;
    out.data.push_back(static_cast<std::uint16_t>(table.mapping[label]));
  }
  return out;
}

std::vector<std::int64_t> ClassHistogram(const LabelMap& map) {
  const ClassScheme& scheme = GetScheme(map.scheme);
  std::vector<std::int64_t> counts(scheme.size(), 0);
  for (std::uint16_t label : map.data) {
    if (label >= counts.size()) {
      throw ValidationError("label outside scheme '" + map.scheme + "'");
    }
    ++counts[label];
  }
  return counts;
}

std::map<ClassGroup, std::int64_t> GroupCounts(const LabelMap& map) {
  const ClassScheme& scheme = GetScheme(map.scheme);
  std::vector<std::int64_t> hist = ClassHistogram(map);
  std::map<ClassGroup, std::int64_t> counts;
  for (const auto& info : scheme.classes()) {
    if (info.group == ClassGroup::kBackground) continue;
    counts[info.group] += hist[info.index];
  }
  return counts;
}

}  // namespace autoctx
