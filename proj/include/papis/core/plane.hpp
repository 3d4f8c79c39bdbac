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

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "papis/core/error.hpp"

namespace papis {

// Dense row-major 2-D array. The element type is float for image samples and
// double for feature maps and everything derived from them.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {}
  Plane(std::size_t height, std::size_t width, std::vector<T> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != height_ * width_) {
      throw ArgumentError("plane data size " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(height_) + "x" +
                          std::to_string(width_));
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t y, std::size_t x) noexcept { return data_[y * width_ + x]; }
  const T& operator()(std::size_t y, std::size_t x) const noexcept {
    return data_[y * width_ + x];
  }

  std::span<T> row(std::size_t y) noexcept { return {data_.data() + y * width_, width_}; }
  std::span<const T> row(std::size_t y) const noexcept {
    return {data_.data() + y * width_, width_};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  bool same_shape(const Plane& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  template <typename U>
  Plane<U> cast() const {
    Plane<U> out(height_, width_);
    std::transform(data_.begin(), data_.end(), out.data(),
                   [](T v) { return static_cast<U>(v); });
    return out;
  }

  Plane crop(std::size_t y0, std::size_t x0, std::size_t h, std::size_t w) const {
    if (y0 + h > height_ || x0 + w > width_) {
      throw ArgumentError("crop window exceeds plane bounds");
    }
    Plane out(h, w);
    for (std::size_t y = 0; y < h; ++y) {
      auto src = row(y0 + y).subspan(x0, w);
      std::copy(src.begin(), src.end(), out.row(y).begin());
    }
    return out;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

using FeatureMap = Plane<double>;

// H x W x C intensities in [0,1], stored planar (one float plane per channel).
class ImagePatch {
 public:
  ImagePatch() = default;
  ImagePatch(std::size_t height, std::size_t width, std::size_t channels, float fill = 0.0f)
      : planes_(channels, Plane<float>(height, width, fill)) {
    validate_shape();
  }
  explicit ImagePatch(std::vector<Plane<float>> planes) : planes_(std::move(planes)) {
    validate_shape();
  }

  std::size_t height() const noexcept { return planes_.empty() ? 0 : planes_[0].height(); }
  std::size_t width() const noexcept { return planes_.empty() ? 0 : planes_[0].width(); }
  std::size_t channels() const noexcept { return planes_.size(); }

  Plane<float>& channel(std::size_t c) { return planes_.at(c); }
  const Plane<float>& channel(std::size_t c) const { return planes_.at(c); }

  float& operator()(std::size_t y, std::size_t x, std::size_t c) noexcept {
    return planes_[c](y, x);
  }
  float operator()(std::size_t y, std::size_t x, std::size_t c) const noexcept {
    return planes_[c](y, x);
  }

  bool same_shape(const ImagePatch& other) const noexcept {
    return height() == other.height() && width() == other.width() &&
           channels() == other.channels();
  }

  // Bit depth of the file the patch came from; writers use it to pick the
  // output depth so that 8-bit sources round-trip losslessly.
  int source_bits() const noexcept { return source_bits_; }
  void set_source_bits(int bits) noexcept { source_bits_ = bits; }

  ImagePatch crop(std::size_t y0, std::size_t x0, std::size_t h, std::size_t w) const {
    std::vector<Plane<float>> out;
    out.reserve(planes_.size());
    for (const auto& p : planes_) out.push_back(p.crop(y0, x0, h, w));
    ImagePatch patch(std::move(out));
    patch.set_source_bits(source_bits_);
    return patch;
  }

  // Clamps every sample into [0,1].
  void clamp_unit() noexcept {
    for (auto& p : planes_) {
      for (float& v : p.values()) v = std::clamp(v, 0.0f, 1.0f);
    }
  }

  friend bool operator==(const ImagePatch& a, const ImagePatch& b) {
    return a.planes_ == b.planes_;
  }

 private:
  void validate_shape() const {
    if (planes_.size() != 1 && planes_.size() != 3) {
      throw ArgumentError("image must have 1 or 3 channels, got " +
                          std::to_string(planes_.size()));
    }
    if (planes_[0].height() == 0 || planes_[0].width() == 0) {
      throw ArgumentError("image dimensions must be positive");
    }
    for (const auto& p : planes_) {
      if (!p.same_shape(planes_[0])) throw ArgumentError("channel planes differ in shape");
    }
  }

  std::vector<Plane<float>> planes_;
  int source_bits_ = 8;
};

inline void require_same_shape(const ImagePatch& a, const ImagePatch& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("image dimensions differ: " + std::to_string(a.height()) + "x" +
                         std::to_string(a.width()) + "x" + std::to_string(a.channels()) +
                         " vs " + std::to_string(b.height()) + "x" +
                         std::to_string(b.width()) + "x" + std::to_string(b.channels()));
  }
}

}  // namespace papis
