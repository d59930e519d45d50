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

#include "png_codec.h"

#include <png.h>

#include <bit>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "autoctx/error.h"

namespace autoctx::internal {

namespace {

constexpr bool kLittleEndian = std::endian::native == std::endian::little;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ErrorSlot {
  char message[256] = {};
};

void OnPngError(png_structp png, png_const_charp msg) {
  auto* slot = static_cast<ErrorSlot*>(png_get_error_ptr(png));
  if (slot != nullptr) {
    std::snprintf(slot->message, sizeof(slot->message), "%s", msg);
  }
  png_longjmp(png, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

// Everything touched between setjmp and a possible longjmp is reached
// through pointers fixed before setjmp, so no local is left indeterminate.
bool DecodeInto(std::FILE* fp, PngPixels* out, std::vector<png_byte>* buffer,
                ErrorSlot* slot) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, slot,
                                           OnPngError, OnPngWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  out->width = static_cast<int>(png_get_image_width(png, info));
  out->height = static_cast<int>(png_get_image_height(png, info));
  out->bit_depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  switch (color) {
    case PNG_COLOR_TYPE_GRAY:
      out->channels = 1;
      break;
    case PNG_COLOR_TYPE_RGB:
      out->channels = 3;
      break;
    case PNG_COLOR_TYPE_RGB_ALPHA:
      out->channels = 4;
      break;
    default:
      out->channels = 0;  // palette and gray+alpha are rejected by callers
      break;
  }
  if (out->channels == 0 || (out->bit_depth != 8 && out->bit_depth != 16)) {
    std::snprintf(slot->message, sizeof(slot->message),
                  "unsupported PNG color type %d / bit depth %d", color,
                  out->bit_depth);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (out->bit_depth == 16 && kLittleEndian) png_set_swap(png);
  png_read_update_info(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer->resize(rowbytes * static_cast<std::size_t>(out->height));
  std::vector<png_bytep> rows(out->height);
  for (int r = 0; r < out->height; ++r) {
    rows[r] = buffer->data() + rowbytes * r;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool EncodeFrom(std::FILE* fp, int width, int height, int channels,
                int bit_depth, std::vector<png_bytep>* rows, ErrorSlot* slot) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, slot,
                                            OnPngError, OnPngWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16 && kLittleEndian) png_set_swap(png);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

PngPixels ReadPng(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());
  png_byte signature[8];
  if (std::fread(signature, 1, 8, fp.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw FormatError(path.string() + " is not a PNG file");
  }
  std::rewind(fp.get());

  PngPixels out;
  std::vector<png_byte> buffer;
  ErrorSlot slot;
  if (!DecodeInto(fp.get(), &out, &buffer, &slot)) {
    throw FormatError(path.string() + ": " + slot.message);
  }
  const std::size_t count =
      static_cast<std::size_t>(out.width) * out.height * out.channels;
  out.samples.resize(count);
  if (out.bit_depth == 8) {
    for (std::size_t i = 0; i < count; ++i) out.samples[i] = buffer[i];
  } else {
    std::memcpy(out.samples.data(), buffer.data(), count * 2);
  }
  return out;
}

void WritePng(const std::filesystem::path& path, int width, int height,
              int channels, int bit_depth,
              std::span<const std::uint16_t> samples) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("cannot write an empty PNG");
  }
  const std::size_t row_samples = static_cast<std::size_t>(width) * channels;
  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  std::vector<png_byte> buffer(row_samples * height * bytes_per_sample);
  if (bit_depth == 16) {
    std::memcpy(buffer.data(), samples.data(), buffer.size());
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      buffer[i] = static_cast<png_byte>(samples[i]);
    }
  }
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) {
    rows[r] = buffer.data() + row_samples * bytes_per_sample * r;
  }

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path.string());
  ErrorSlot slot;
  if (!EncodeFrom(fp.get(), width, height, channels, bit_depth, &rows,
                  &slot)) {
    throw IoError(path.string() + ": " + slot.message);
  }
  if (std::fflush(fp.get()) != 0) {
    throw IoError("failed to flush " + path.string());
  }
}

}  // namespace autoctx::internal
