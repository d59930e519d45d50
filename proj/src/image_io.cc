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

#include "autoctx/image_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "autoctx/error.h"
#include "autoctx/schemes.h"
#include "json.hpp"
#include "png_codec.h"

namespace autoctx {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

constexpr std::uint32_t kMaxPngValue = 65535;

void PutU32Le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t GetU32Le(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i]))
         << (8 * i);
  }
  return v;
}

void PutF32Le(std::string& out, float f) {
  PutU32Le(out, std::bit_cast<std::uint32_t>(f));
}

float GetF32Le(std::string_view bytes, std::size_t at) {
  return std::bit_cast<float>(GetU32Le(bytes, at));
}

void CheckUnitRange(std::span<const float> values, const char* what) {
  for (float v : values) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      std::ostringstream msg;
      msg << what << " value " << v << " outside [0,1]";
      throw ValidationError(msg.str());
    }
  }
}

void CheckDims(int height, int width, const char* what) {
  if (height <= 0 || width <= 0) {
    throw ValidationError(std::string(what) + " must have positive size");
  }
}

void ValidateRawTensor(const RawTensor& t) {
  CheckDims(t.height, t.width, "tensor");
  if (t.channels <= 0) throw ValidationError("tensor needs >= 1 channel");
  const std::size_t expected =
      static_cast<std::size_t>(t.height) * t.width * t.channels;
  if (t.data.size() != expected) {
    throw ValidationError("tensor data length does not match H*W*C");
  }
  CheckUnitRange(t.data, "tensor");
}

}  // namespace

void ValidateProbabilityMap(const ProbabilityMap& map) {
  CheckDims(map.height, map.width, "probability map");
  const ClassScheme& scheme = GetScheme(map.scheme);
  if (map.channels != scheme.size()) {
    throw ValidationError("probability map has " +
                          std::to_string(map.channels) + " channels but '" +
                          map.scheme + "' has " +
                          std::to_string(scheme.size()) + " classes");
  }
  if (map.data.size() != map.PixelCount() * map.channels) {
    throw ValidationError("probability map data length does not match H*W*C");
  }
  CheckUnitRange(map.data, "probability");
}

void ValidateLabelMap(const LabelMap& map) {
  CheckDims(map.height, map.width, "label map");
  const ClassScheme& scheme = GetScheme(map.scheme);
  if (map.data.size() != map.PixelCount()) {
    throw ValidationError("label map data length does not match H*W");
  }
  for (std::uint16_t label : map.data) {
    if (label >= scheme.size()) {
      throw ValidationError("label " + std::to_string(label) +
                            " outside scheme '" + map.scheme + "'");
    }
  }
}

void ValidateInstanceMap(const InstanceMap& inst) {
  CheckDims(inst.height, inst.width, "instance map");
  const ClassScheme& scheme = GetScheme(inst.scheme);
  if (inst.ids.size() != inst.PixelCount()) {
    throw ValidationError("instance map data length does not match H*W");
  }
  if (inst.classes.contains(0)) {
    throw ValidationError("instance id 0 is background and takes no class");
  }
  for (const auto& [id, cls] : inst.classes) {
    if (cls <= 0 || cls >= scheme.size()) {
      throw ValidationError("instance " + std::to_string(id) + " has class " +
                            std::to_string(cls) + " outside the foreground of '" +
                            inst.scheme + "'");
    }
  }
  for (std::uint32_t id : inst.ids) {
    if (id != 0 && !inst.classes.contains(id)) {
      throw ConsistencyError("instance id " + std::to_string(id) +
                             " has no class entry");
    }
  }
}

void ValidateRgbImage(const RgbImage& image) {
  CheckDims(image.height, image.width, "RGB image");
  if (image.data.size() != static_cast<std::size_t>(image.height) * image.width * 3) {
    throw ValidationError("RGB data length does not match H*W*3");
  }
  CheckUnitRange(image.data, "RGB");
}

std::string EncodeTensor(const RawTensor& tensor) {
  ValidateRawTensor(tensor);
  OrderedJson header;
  header["height"] = tensor.height;
  header["width"] = tensor.width;
  header["channels"] = tensor.channels;
  header["dtype"] = "f32le";
  header["scheme"] = tensor.tag;
  const std::string header_text = header.dump();

  std::string out;
  out.reserve(kPmapMagicSize + 4 + header_text.size() + tensor.data.size() * 4);
  out.append(kPmapMagic, kPmapMagicSize);
  PutU32Le(out, static_cast<std::uint32_t>(header_text.size()));
  out += header_text;
  for (float v : tensor.data) PutF32Le(out, v);
  return out;
}

RawTensor DecodeTensor(std::string_view bytes) {
  if (bytes.size() < kPmapMagicSize ||
      bytes.substr(0, kPmapMagicSize) != std::string_view(kPmapMagic, kPmapMagicSize)) {
    throw FormatError("missing PMAPV001 magic");
  }
  if (bytes.size() < kPmapMagicSize + 4) {
    throw CorruptionError("PMAP truncated before header length");
  }
  const std::uint32_t header_len = GetU32Le(bytes, kPmapMagicSize);
  const std::size_t payload_at = kPmapMagicSize + 4 + std::size_t{header_len};
  if (payload_at > bytes.size()) {
    throw CorruptionError("PMAP header length exceeds file size");
  }
  Json header;
  try {
    header = Json::parse(bytes.substr(kPmapMagicSize + 4, header_len));
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("PMAP header is not JSON: ") + e.what());
  }
  RawTensor out;
  try {
    if (header.at("dtype").get<std::string>() != "f32le") {
      throw FormatError("PMAP dtype must be f32le");
    }
    out.height = header.at("height").get<int>();
    out.width = header.at("width").get<int>();
    out.channels = header.at("channels").get<int>();
    out.tag = header.at("scheme").get<std::string>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("PMAP header: ") + e.what());
  }
  if (out.height <= 0 || out.width <= 0 || out.channels <= 0) {
    throw CorruptionError("PMAP header declares an empty shape");
  }
  const std::size_t count =
      static_cast<std::size_t>(out.height) * out.width * out.channels;
  if (bytes.size() - payload_at != count * 4) {
    throw CorruptionError("PMAP payload holds " +
                          std::to_string(bytes.size() - payload_at) +
                          " bytes, header declares " + std::to_string(count * 4));
  }
  out.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.data[i] = GetF32Le(bytes, payload_at + 4 * i);
  }
  CheckUnitRange(out.data, "PMAP");
  return out;
}

std::string EncodePmap(const ProbabilityMap& map) {
  ValidateProbabilityMap(map);
  return EncodeTensor({map.height, map.width, map.channels, map.scheme, map.data});
}

ProbabilityMap DecodePmap(std::string_view bytes) {
  RawTensor raw = DecodeTensor(bytes);
  ProbabilityMap map{raw.height, raw.width, raw.channels, std::move(raw.tag),
                     std::move(raw.data)};
  ValidateProbabilityMap(map);
  return map;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

ProbabilityMap ReadPmap(const std::filesystem::path& path) {
  return DecodePmap(ReadFileBytes(path));
}

void WritePmap(const ProbabilityMap& map, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodePmap(map));
}

RawTensor ReadTensor(const std::filesystem::path& path) {
  return DecodeTensor(ReadFileBytes(path));
}

void WriteTensor(const RawTensor& tensor, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeTensor(tensor));
}

namespace {

internal::PngPixels ReadGray16(const std::filesystem::path& path) {
  internal::PngPixels png = internal::ReadPng(path);
  if (png.channels != 1 || png.bit_depth != 16) {
    throw FormatError(path.string() + " must be a 16-bit grayscale PNG");
  }
  return png;
}

}  // namespace

LabelMap ReadLabelPng(const std::filesystem::path& path,
                      std::string_view scheme_id) {
  internal::PngPixels png = ReadGray16(path);
  LabelMap map{png.height, png.width, std::string(scheme_id),
               std::move(png.samples)};
  ValidateLabelMap(map);
  return map;
}

void WriteLabelPng(const LabelMap& map, const std::filesystem::path& path) {
  ValidateLabelMap(map);
  internal::WritePng(path, map.width, map.height, 1, 16, map.data);
}

std::string EncodeInstanceSidecar(const InstanceMap& inst) {
  OrderedJson doc;
  doc["scheme"] = inst.scheme;
  OrderedJson classes = OrderedJson::object();
  for (const auto& [id, cls] : inst.classes) {
    classes[std::to_string(id)] = cls;
  }
  doc["classes"] = std::move(classes);
  return doc.dump() + "\n";
}

InstanceMap ReadInstances(const std::filesystem::path& png_path,
                          const std::filesystem::path& json_path) {
  internal::PngPixels png = ReadGray16(png_path);
  InstanceMap inst;
  inst.height = png.height;
  inst.width = png.width;
  inst.ids.assign(png.samples.begin(), png.samples.end());

  Json doc;
  try {
    doc = Json::parse(ReadFileBytes(json_path));
    inst.scheme = doc.at("scheme").get<std::string>();
    for (const auto& [key, value] : doc.at("classes").items()) {
      std::size_t consumed = 0;
      unsigned long id = std::stoul(key, &consumed);
      if (consumed != key.size() || id > kMaxPngValue) {
        throw FormatError("bad instance id key '" + key + "'");
      }
      inst.classes[static_cast<std::uint32_t>(id)] = value.get<int>();
    }
  } catch (const Json::exception& e) {
    throw FormatError(json_path.string() + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw FormatError(json_path.string() + ": non-numeric instance id");
  }
  ValidateInstanceMap(inst);
  return inst;
}

void WriteInstances(const InstanceMap& inst,
                    const std::filesystem::path& png_path,
                    const std::filesystem::path& json_path) {
  ValidateInstanceMap(inst);
  std::vector<std::uint16_t> samples(inst.ids.size());
  for (std::size_t i = 0; i < inst.ids.size(); ++i) {
    if (inst.ids[i] > kMaxPngValue) {
      throw ValidationError("instance id exceeds 16-bit PNG range");
    }
    samples[i] = static_cast<std::uint16_t>(inst.ids[i]);
  }
  internal::WritePng(png_path, inst.width, inst.height, 1, 16, samples);
  WriteFileBytes(json_path, EncodeInstanceSidecar(inst));
}

RgbImage ReadRgbPng(const std::filesystem::path& path) {
  internal::PngPixels png = internal::ReadPng(path);
  if (png.bit_depth != 8 || (png.channels != 3 && png.channels != 4)) {
    throw FormatError(path.string() + " must be an 8-bit RGB PNG");
  }
  RgbImage image{png.height, png.width, {}};
  const std::size_t pixels = static_cast<std::size_t>(png.height) * png.width;
  image.data.resize(pixels * 3);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      image.data[p * 3 + ch] = png.samples[p * png.channels + ch] / 255.0f;
    }
  }
  return image;
}

void WriteRgbPng(const RgbImage& image, const std::filesystem::path& path) {
  ValidateRgbImage(image);
  std::vector<std::uint16_t> samples(image.data.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = static_cast<std::uint16_t>(std::lround(image.data[i] * 255.0f));
  }
  internal::WritePng(path, image.width, image.height, 3, 8, samples);
}

LabelMap Argmax(const ProbabilityMap& map) {
  ValidateProbabilityMap(map);
  LabelMap out{map.height, map.width, map.scheme, {}};
  out.data.resize(map.PixelCount());
  for (std::size_t p = 0; p < out.data.size(); ++p) {
    std::span<const float> scores = map.Pixel(p);
    // max_element returns the first maximum, which is the documented tie-break.
    out.data[p] = static_cast<std::uint16_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
  }
  return out;
}

}  // namespace autoctx
