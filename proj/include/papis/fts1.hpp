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

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "papis/core/error.hpp"
#include "papis/core/plane.hpp"

namespace papis {

// Multi-layer, multi-channel feature maps. Layer i holds n_i channels that
// share one spatial size; sizes may differ between layers.
struct FeatureStack {
  std::vector<std::vector<FeatureMap>> layers;
  std::string source_tag;

  std::size_t layer_count() const noexcept { return layers.size(); }
  std::size_t channel_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.size();
    return n;
  }
  // Channels per layer, the shape weight tables are indexed by.
  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    s.reserve(layers.size());
    for (const auto& l : layers) s.push_back(l.size());
    return s;
  }

  void validate() const {
    if (layers.empty()) throw ArgumentError("feature stack has no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& layer = layers[i];
      if (layer.empty()) {
        throw ArgumentError("feature layer " + std::to_string(i) + " has no channels");
      }
      for (const auto& m : layer) {
        if (m.empty() || !m.same_shape(layer.front())) {
          throw ArgumentError("feature layer " + std::to_string(i) +
                              " has inconsistent channel dimensions");
        }
      }
    }
  }
};

// FTS1 feature tensor files: "FTS1", u32 layer count, then per layer a
// (channels, height, width) u32 header followed by channel-major row-major
// float32 samples. All integers and floats are little-endian.
namespace fts1 {

inline constexpr char kMagic[4] = {'F', 'T', 'S', '1'};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

inline void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

class Reader {
 public:
  Reader(const std::string& bytes, std::string name) : bytes_(bytes), name_(std::move(name)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    }
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("fts1 '" + name_ + "': truncated payload");
  }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string encode(const FeatureStack& stack) {
  stack.validate();
  std::string out(kMagic, 4);
  detail::put_u32(out, static_cast<std::uint32_t>(stack.layers.size()));
  for (const auto& layer : stack.layers) {
    detail::put_u32(out, static_cast<std::uint32_t>(layer.size()));
    detail::put_u32(out, static_cast<std::uint32_t>(layer.front().height()));
    detail::put_u32(out, static_cast<std::uint32_t>(layer.front().width()));
    for (const auto& map : layer) {
      for (double v : map.values()) detail::put_f32(out, static_cast<float>(v));
    }
  }
  return out;
}

// Decodes without normalizing; values are the stored float32 samples.
inline FeatureStack decode(const std::string& bytes, const std::string& name = "<memory>") {
  detail::Reader in(bytes, name);
  in.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("fts1 '" + name + "': bad magic");
  }
  in.u32();
  const std::uint32_t layer_count = in.u32();
  if (layer_count == 0) throw FormatError("fts1 '" + name + "': zero layers");
  FeatureStack stack;
  stack.source_tag = "fts1:" + name;
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    const std::uint32_t channels = in.u32();
    const std::uint32_t h = in.u32();
    const std::uint32_t w = in.u32();
    if (channels == 0 || h == 0 || w == 0) {
      throw FormatError("fts1 '" + name + "': empty layer " + std::to_string(i));
    }
    const std::uint64_t count = std::uint64_t{channels} * h * w;
    if (count > in.remaining() / 4) throw FormatError("fts1 '" + name + "': truncated payload");
    std::vector<FeatureMap> layer;
    layer.reserve(channels);
    for (std::uint32_t c = 0; c < channels; ++c) {
      FeatureMap map(h, w);
      for (double& v : map.values()) {
        const float f = in.f32();
        if (!std::isfinite(f)) throw FormatError("fts1 '" + name + "': non-finite sample");
        v = static_cast<double>(f);
      }
      layer.push_back(std::move(map));
    }
    stack.layers.push_back(std::move(layer));
  }
  if (in.remaining() != 0) throw FormatError("fts1 '" + name + "': trailing bytes");
  return stack;
}

inline void save(const FeatureStack& stack, const std::filesystem::path& path) {
  const std::string bytes = encode(stack);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline FeatureStack load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("fts1 '" + path.string() + "': cannot open");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes, path.string());
}

}  // namespace fts1
}  // namespace papis
