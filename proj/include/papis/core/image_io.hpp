// Copyright 2026 The PaPIS Authors. All Rights Reserved.
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

#pragma once

#include <png.h>
#include <tiffio.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "papis/core/error.hpp"
#include "papis/core/plane.hpp"

namespace papis {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return f;
}

// Builds an ImagePatch from interleaved integer samples, keeping at most the
// first three color channels (gray+alpha keeps gray, RGBA keeps RGB).
template <typename Sample>
ImagePatch from_interleaved(const std::vector<Sample>& buf, std::size_t h, std::size_t w,
                            std::size_t samples_per_pixel, double max_value, int bits) {
  const std::size_t keep = samples_per_pixel >= 3 ? 3 : 1;
  ImagePatch img(h, w, keep);
  const double scale = 1.0 / max_value;
  for (std::size_t c = 0; c < keep; ++c) {
    auto dst = img.channel(c).values();
    for (std::size_t i = 0; i < h * w; ++i) {
      dst[i] = static_cast<float>(static_cast<double>(buf[i * samples_per_pixel + c]) * scale);
    }
  }
  img.set_source_bits(bits);
  return img;
}

[[noreturn]] inline void png_error_fn(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}
inline void png_warning_fn(png_structp, png_const_charp) {}

inline ImagePatch read_png(const std::filesystem::path& path) {
  auto file = open_file(path, "rb");
  std::string err;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) throw IoError("png: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png: out of memory");
  }
  // Everything that libpng may longjmp out of lives in this frame; no
  // destructors are skipped because the buffers are declared before setjmp.
  std::vector<std::uint8_t> bytes;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("png '" + path.string() + "': " + err);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // native little-endian uint16
  png_read_update_info(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  const std::size_t spp = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  bytes.resize(rowbytes * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = bytes.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (out_depth == 8) {
    return from_interleaved(bytes, h, w, spp, 255.0, 8);
  }
  if (out_depth == 16) {
    std::vector<std::uint16_t> samples(bytes.size() / 2);
    std::memcpy(samples.data(), bytes.data(), samples.size() * 2);
    return from_interleaved(samples, h, w, spp, 65535.0, 16);
  }
  throw FormatError("png '" + path.string() + "': unsupported bit depth " +
                    std::to_string(out_depth));
}

struct TiffCloser {
  void operator()(TIFF* t) const noexcept {
    if (t) TIFFClose(t);
  }
};

inline ImagePatch read_tiff(const std::filesystem::path& path) {
  TIFFSetWarningHandler(nullptr);
  TIFFSetErrorHandler(nullptr);
  std::unique_ptr<TIFF, TiffCloser> tif(TIFFOpen(path.c_str(), "r"));
  if (!tif) throw FormatError("tiff '" + path.string() + "': cannot parse");
  std::uint32_t w = 0, h = 0;
  std::uint16_t bits = 0, spp = 1, planar = PLANARCONFIG_CONTIG, fmt = SAMPLEFORMAT_UINT;
  TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
  TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bits);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &fmt);
  if (w == 0 || h == 0) throw FormatError("tiff '" + path.string() + "': empty image");
  if (bits != 8 && bits != 16) {
    throw FormatError("tiff '" + path.string() + "': unsupported bit depth " +
                      std::to_string(bits));
  }
  if (fmt != SAMPLEFORMAT_UINT) {
    throw FormatError("tiff '" + path.string() + "': only unsigned integer samples supported");
  }
  if (spp != 1 && spp != 2 && spp != 3 && spp != 4) {
    throw FormatError("tiff '" + path.string() + "': unsupported samples per pixel");
  }
  const std::size_t bps = bits / 8;
  const std::size_t n = static_cast<std::size_t>(w) * h * spp;
  std::vector<std::uint8_t> bytes(n * bps);
  const tmsize_t line = TIFFScanlineSize(tif.get());
  std::vector<std::uint8_t> scan(static_cast<std::size_t>(line));
  if (planar == PLANARCONFIG_CONTIG) {
    for (std::uint32_t y = 0; y < h; ++y) {
      if (TIFFReadScanline(tif.get(), scan.data(), y, 0) < 0) {
        throw FormatError("tiff '" + path.string() + "': truncated scanline");
      }
      std::memcpy(bytes.data() + static_cast<std::size_t>(y) * w * spp * bps, scan.data(),
                  static_cast<std::size_t>(w) * spp * bps);
    }
  } else {
    for (std::uint16_t s = 0; s < spp; ++s) {
      for (std::uint32_t y = 0; y < h; ++y) {
        if (TIFFReadScanline(tif.get(), scan.data(), y, s) < 0) {
          throw FormatError("tiff '" + path.string() + "': truncated scanline");
        }
        for (std::uint32_t x = 0; x < w; ++x) {
          std::memcpy(bytes.data() + ((static_cast<std::size_t>(y) * w + x) * spp + s) * bps,
                      scan.data() + static_cast<std::size_t>(x) * bps, bps);
        }
      }
    }
  }
  if (bits == 8) return from_interleaved(bytes, h, w, spp, 255.0, 8);
  std::vector<std::uint16_t> samples(n);
  std::memcpy(samples.data(), bytes.data(), n * 2);
  return from_interleaved(samples, h, w, spp, 65535.0, 16);
}

inline void write_png_raw(const std::filesystem::path& path, std::size_t h, std::size_t w,
                          int channels, int bit_depth, const std::vector<std::uint8_t>& bytes) {
  auto file = open_file(path, "wb");
  std::string err;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) throw IoError("png: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png: out of memory");
  }
  std::vector<png_const_bytep> rows(h);
  const std::size_t rowbytes = w * static_cast<std::size_t>(channels) * (bit_depth / 8);
  for (std::size_t y = 0; y < h; ++y) rows[y] = bytes.data() + y * rowbytes;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png write '" + path.string() + "': " + err);
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), bit_depth,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("png write '" + path.string() + "' failed");
}

}  // namespace detail

// Reads an 8/16-bit grayscale or RGB PNG/TIFF, dividing by the format maximum.
inline ImagePatch load_image(const std::filesystem::path& path) {
  std::array<unsigned char, 8> magic{};
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    in.read(reinterpret_cast<char*>(magic.data()), magic.size());
    if (in.gcount() < 4) throw FormatError("'" + path.string() + "': file too short");
  }
  static constexpr std::array<unsigned char, 8> png_sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (magic == png_sig) return detail::read_png(path);
  const bool tiff_le = magic[0] == 'I' && magic[1] == 'I' && magic[2] == 42 && magic[3] == 0;
  const bool tiff_be = magic[0] == 'M' && magic[1] == 'M' && magic[2] == 0 && magic[3] == 42;
  if (tiff_le || tiff_be) return detail::read_tiff(path);
  throw FormatError("'" + path.string() + "': not a PNG or TIFF file");
}

// Writes a patch as PNG at `bits` depth (8 or 16); samples are rounded to the
// nearest code value.
inline void save_png(const ImagePatch& img, const std::filesystem::path& path, int bits = 8) {
  if (bits != 8 && bits != 16) throw ArgumentError("png bit depth must be 8 or 16");
  const std::size_t h = img.height(), w = img.width(), c = img.channels();
  const double maxv = bits == 8 ? 255.0 : 65535.0;
  std::vector<std::uint8_t> bytes(h * w * c * (bits / 8));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t k = 0; k < c; ++k) {
        const double v = std::clamp(static_cast<double>(img(y, x, k)), 0.0, 1.0);
        const auto code = static_cast<std::uint32_t>(std::lround(v * maxv));
        const std::size_t idx = (y * w + x) * c + k;
        if (bits == 8) {
          bytes[idx] = static_cast<std::uint8_t>(code);
        } else {
          const auto s = static_cast<std::uint16_t>(code);
          std::memcpy(bytes.data() + idx * 2, &s, 2);
        }
      }
    }
  }
  detail::write_png_raw(path, h, w, static_cast<int>(c), bits, bytes);
}

// Writes a single-channel 16-bit PNG from a map, mapping [lo, hi] affinely
// onto [0, 65535]. A degenerate range writes zeros.
inline void save_map_png16(const FeatureMap& map, const std::filesystem::path& path, double lo,
                           double hi) {
  const double span = hi - lo;
  std::vector<std::uint8_t> bytes(map.size() * 2);
  auto src = map.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    double t = span > 0.0 ? (src[i] - lo) / span : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const auto s = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    std::memcpy(bytes.data() + i * 2, &s, 2);
  }
  detail::write_png_raw(path, map.height(), map.width(), 1, 16, bytes);
}

inline void save_rgb8_png(const std::filesystem::path& path, std::size_t h, std::size_t w,
                          const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != h * w * 3) throw ArgumentError("rgb buffer size mismatch");
  detail::write_png_raw(path, h, w, 3, 8, rgb);
}

}  // namespace papis
