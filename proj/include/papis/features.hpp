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
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "papis/core/error.hpp"
#include "papis/core/filter.hpp"
#include "papis/core/plane.hpp"
#include "papis/fts1.hpp"

namespace papis {

enum class Response { kSmooth, kGradientMagnitude, kLaplacian };

struct FilterBankLayer {
  std::size_t stride = 1;
  double sigma = 1.0;
  std::vector<Response> responses;
  friend bool operator==(const FilterBankLayer&, const FilterBankLayer&) = default;
};

// Deterministic multi-scale filter bank used as the built-in feature extractor.
struct FilterBankSpec {
  std::vector<FilterBankLayer> layers;

  // Four layers at strides 1, 2, 4, 8 with sigma equal to the stride and all
  // three responses per layer.
  static FilterBankSpec standard() {
    FilterBankSpec spec;
    for (std::size_t i = 0; i < 4; ++i) {
      const std::size_t stride = std::size_t{1} << i;
      spec.layers.push_back({stride, static_cast<double>(stride),
                             {Response::kSmooth, Response::kGradientMagnitude,
                              Response::kLaplacian}});
    }
    return spec;
  }
  friend bool operator==(const FilterBankSpec&, const FilterBankSpec&) = default;
};

// Features precomputed elsewhere (e.g. a deep encoder) stored as FTS1.
struct ExternalFileSpec {
  std::filesystem::path path;
  friend bool operator==(const ExternalFileSpec&, const ExternalFileSpec&) = default;
};

using ExtractorSpec = std::variant<FilterBankSpec, ExternalFileSpec>;

inline std::string describe(const ExtractorSpec& spec) {
  if (const auto* ext = std::get_if<ExternalFileSpec>(&spec)) return "fts1:" + ext->path.string();
  return "filterbank";
}

namespace detail {

inline FeatureMap subsample(const FeatureMap& map, std::size_t stride) {
  if (stride == 1) return map;
  const std::size_t h = (map.height() + stride - 1) / stride;
  const std::size_t w = (map.width() + stride - 1) / stride;
  FeatureMap out(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) out(y, x) = map(y * stride, x * stride);
  }
  return out;
}

// Central-difference gradient magnitude with reflect boundaries.
inline FeatureMap gradient_magnitude(const FeatureMap& s) {
  const std::size_t h = s.height(), w = s.width();
  FeatureMap out(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    auto up = s.row(reflect_index(yy - 1, h));
    auto dn = s.row(reflect_index(yy + 1, h));
    auto mid = s.row(y);
    for (std::size_t x = 0; x < w; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      const double gx = 0.5 * (mid[reflect_index(xx + 1, w)] - mid[reflect_index(xx - 1, w)]);
      const double gy = 0.5 * (dn[x] - up[x]);
      out(y, x) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

// Five-point Laplacian with reflect boundaries; applied to a Gaussian-smoothed
// map this is the Laplacian-of-Gaussian response.
inline FeatureMap laplacian(const FeatureMap& s) {
  const std::size_t h = s.height(), w = s.width();
  FeatureMap out(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    auto up = s.row(reflect_index(yy - 1, h));
    auto dn = s.row(reflect_index(yy + 1, h));
    auto mid = s.row(y);
    for (std::size_t x = 0; x < w; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      out(y, x) = mid[reflect_index(xx + 1, w)] + mid[reflect_index(xx - 1, w)] + up[x] +
                  dn[x] - 4.0 * mid[x];
    }
  }
  return out;
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// True when (h, w) is a floor- or ceil-rounded power-of-two downsampling of
// (img_h, img_w).
inline bool is_dyadic_downsampling(std::size_t h, std::size_t w, std::size_t img_h,
                                   std::size_t img_w) {
  for (std::size_t s = 1; s <= std::max(img_h, img_w); s *= 2) {
    const bool ceil_ok = ceil_div(img_h, s) == h && ceil_div(img_w, s) == w;
    const bool floor_ok = img_h / s == h && img_w / s == w;
    if (ceil_ok || floor_ok) return true;
  }
  return false;
}

inline FeatureStack extract_filter_bank(const ImagePatch& img, const FilterBankSpec& spec) {
  if (spec.layers.empty()) throw ArgumentError("filter bank has no layers");
  const FeatureMap luma = to_grayscale(img);
  FeatureStack stack;
  stack.source_tag = "filterbank";
  stack.layers.reserve(spec.layers.size());
  for (const auto& def : spec.layers) {
    if (def.stride == 0) throw ArgumentError("filter bank stride must be positive");
    if (def.responses.empty()) throw ArgumentError("filter bank layer has no responses");
    const FeatureMap smooth = subsample(gaussian_blur(luma, def.sigma), def.stride);
    std::vector<FeatureMap> layer;
    layer.reserve(def.responses.size());
    for (Response r : def.responses) {
      switch (r) {
        case Response::kSmooth:
          layer.push_back(normalize_channel(smooth));
          break;
        case Response::kGradientMagnitude:
          layer.push_back(normalize_channel(gradient_magnitude(smooth)));
          break;
        case Response::kLaplacian:
          layer.push_back(normalize_channel(laplacian(smooth)));
          break;
      }
    }
    stack.layers.push_back(std::move(layer));
  }
  return stack;
}

}  // namespace detail

// Normalizes every channel of a stack in place (min-max per channel).
inline void normalize_stack(FeatureStack& stack) {
  for (auto& layer : stack.layers) {
    for (auto& map : layer) map = normalize_channel(map);
  }
}

inline FeatureStack load_external_features(const ImagePatch& img, const ExternalFileSpec& spec) {
  FeatureStack stack = fts1::load(spec.path);
  stack.validate();
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& m = stack.layers[i].front();
    if (!detail::is_dyadic_downsampling(m.height(), m.width(), img.height(), img.width())) {
      throw ConsistencyError("fts1 '" + spec.path.string() + "' layer " + std::to_string(i) +
                             " is " + std::to_string(m.height()) + "x" +
                             std::to_string(m.width()) +
                             ", not a power-of-two downsampling of the " +
                             std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                             " image");
    }
  }
  normalize_stack(stack);
  return stack;
}

inline FeatureStack extract_features(const ImagePatch& img, const ExtractorSpec& spec) {
  return std::visit(
      [&](const auto& s) -> FeatureStack {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FilterBankSpec>) {
          return detail::extract_filter_bank(img, s);
        } else {
          return load_external_features(img, s);
        }
      },
      spec);
}

// Mean of a layer's channels.
inline FeatureMap channel_mean(const std::vector<FeatureMap>& layer) {
  FeatureMap acc(layer.front().height(), layer.front().width());
  for (const auto& m : layer) {
    auto src = m.values();
    auto dst = acc.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  const double inv = 1.0 / static_cast<double>(layer.size());
  for (double& v : acc.values()) v *= inv;
  return acc;
}

// Unified visualization: per-layer channel mean, upsampled to (out_h, out_w),
// averaged over layers.
inline FeatureMap reconstruct(const FeatureStack& stack, std::size_t out_h, std::size_t out_w) {
  stack.validate();
  FeatureMap rec(out_h, out_w);
  for (const auto& layer : stack.layers) {
    const FeatureMap up = bilinear_resize(channel_mean(layer), out_h, out_w);
    auto src = up.values();
    auto dst = rec.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  const double inv = 1.0 / static_cast<double>(stack.layers.size());
  for (double& v : rec.values()) v = std::clamp(v * inv, 0.0, 1.0);
  return rec;
}

}  // namespace papis
