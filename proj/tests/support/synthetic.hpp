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

// Deterministic synthetic fixtures shared by the unit and acceptance suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "papis/core/plane.hpp"
#include "papis/core/filter.hpp"
#include "papis/core/rng.hpp"

namespace papis::testing {

inline FeatureMap random_map(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  FeatureMap m(h, w);
  for (double& v : m.values()) v = rng.uniform_open();
  return m;
}

inline ImagePatch random_image(std::size_t h, std::size_t w, std::size_t channels,
                               std::uint64_t seed) {
  Rng rng(seed);
  ImagePatch img(h, w, channels);
  for (std::size_t c = 0; c < channels; ++c) {
    for (float& v : img.channel(c).values()) v = static_cast<float>(rng.uniform_open());
  }
  return img;
}

inline ImagePatch constant_image(std::size_t h, std::size_t w, std::size_t channels, float v) {
  return ImagePatch(h, w, channels, v);
}

// H&E-like RGB patch: pink stroma with smooth low-frequency variation and
// fibrous texture, plus dark purple elliptical nuclei.
inline ImagePatch tissue_image(std::size_t h, std::size_t w, std::uint64_t seed,
                               double nuclei_per_10k_px = 6.0) {
  Rng rng(seed);
  ImagePatch img(h, w, 3);
  const double fx = 0.5 + rng.uniform_open(), fy = 0.5 + rng.uniform_open();
  const double px = 6.283 * rng.uniform_open(), py = 6.283 * rng.uniform_open();
  const double tf = 0.15 + 0.1 * rng.uniform_open();
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double u = static_cast<double>(x) / static_cast<double>(w);
      const double v = static_cast<double>(y) / static_cast<double>(h);
      const double shade = 0.06 * std::sin(6.283 * fx * u + px) * std::cos(6.283 * fy * v + py);
      const double fiber = 0.04 * std::sin(tf * (static_cast<double>(x) + 0.6 * y) +
                                           2.0 * std::sin(0.05 * static_cast<double>(y)));
      img(y, x, 0) = static_cast<float>(0.88 + shade + fiber);
      img(y, x, 1) = static_cast<float>(0.62 + shade + 1.2 * fiber);
      img(y, x, 2) = static_cast<float>(0.78 + shade + 0.8 * fiber);
    }
  }
  const auto nuclei = static_cast<std::size_t>(nuclei_per_10k_px * static_cast<double>(h * w) /
                                               10000.0);
  for (std::size_t n = 0; n < nuclei; ++n) {
    const double cx = rng.uniform_open() * static_cast<double>(w);
    const double cy = rng.uniform_open() * static_cast<double>(h);
    const double ra = 3.0 + 5.0 * rng.uniform_open();
    const double rb = ra * (0.6 + 0.4 * rng.uniform_open());
    const double th = 3.14159 * rng.uniform_open();
    const double dark = 0.8 + 0.2 * rng.uniform_open();
    const double c = std::cos(th), s = std::sin(th);
    const auto x0 = static_cast<std::ptrdiff_t>(cx - ra - 2), x1 = static_cast<std::ptrdiff_t>(cx + ra + 2);
    const auto y0 = static_cast<std::ptrdiff_t>(cy - ra - 2), y1 = static_cast<std::ptrdiff_t>(cy + ra + 2);
    for (std::ptrdiff_t y = std::max<std::ptrdiff_t>(0, y0);
         y <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(h) - 1, y1); ++y) {
      for (std::ptrdiff_t x = std::max<std::ptrdiff_t>(0, x0);
           x <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(w) - 1, x1); ++x) {
        const double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
        const double a = (c * dx + s * dy) / ra, b = (-s * dx + c * dy) / rb;
        const double r2 = a * a + b * b;
        if (r2 > 1.6) continue;
        // soft edge
        const double t = dark * std::clamp((1.6 - r2) / 0.6, 0.0, 1.0);
        const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
        img(uy, ux, 0) = static_cast<float>(img(uy, ux, 0) * (1 - t) + 0.32 * t);
        img(uy, ux, 1) = static_cast<float>(img(uy, ux, 1) * (1 - t) + 0.18 * t);
        img(uy, ux, 2) = static_cast<float>(img(uy, ux, 2) * (1 - t) + 0.52 * t);
      }
    }
  }
  img.clamp_unit();
  return img;
}

// Adds N(0, sigma^2) noise to every sample and clamps to [0,1]. The same
// seed gives the same underlying standard-normal field for every sigma.
inline ImagePatch add_gaussian_noise(const ImagePatch& img, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  ImagePatch out = img;
  for (std::size_t c = 0; c < out.channels(); ++c) {
    for (float& v : out.channel(c).values()) {
      v = static_cast<float>(static_cast<double>(v) + sigma * rng.normal());
    }
  }
  out.clamp_unit();
  return out;
}

// Nearly flat pink field: slow shading plus faint per-pixel texture shared
// by all channels. Coordinates are offset so a region can continue a larger
// canvas seamlessly.
inline ImagePatch low_texture_image(std::size_t h, std::size_t w, std::uint64_t seed,
                                    std::size_t y0 = 0, std::size_t x0 = 0,
                                    double amplitude = 0.005) {
  Rng rng(seed);
  ImagePatch img(h, w, 3);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double t = amplitude * (rng.uniform_open() - 0.5);
      const double shade = 0.05 * std::sin(static_cast<double>(x + x0) * 0.01) *
                           std::cos(static_cast<double>(y + y0) * 0.013);
      img(y, x, 0) = static_cast<float>(0.80 + shade + t);
      img(y, x, 1) = static_cast<float>(0.60 + shade + t);
      img(y, x, 2) = static_cast<float>(0.75 + shade + t);
    }
  }
  return img;
}

inline ImagePatch blur_image(const ImagePatch& img, double sigma) {
  std::vector<Plane<float>> planes;
  for (std::size_t c = 0; c < img.channels(); ++c) {
    planes.push_back(gaussian_blur(img.channel(c), sigma));
  }
  return ImagePatch(std::move(planes));
}

inline void paste(ImagePatch& dst, const ImagePatch& src, std::size_t y0, std::size_t x0) {
  for (std::size_t c = 0; c < dst.channels(); ++c) {
    for (std::size_t y = 0; y < src.height(); ++y) {
      for (std::size_t x = 0; x < src.width(); ++x) dst(y0 + y, x0 + x, c) = src(y, x, c);
    }
  }
}

// Aligned slide pair split into quadrants. a: tissue everywhere except a
// low-texture top-right quadrant. b equals a except the bottom-right
// quadrant (additive noise) and the top-right quadrant (Gaussian blur).
struct QuadrantWsi {
  ImagePatch a, b;
  std::size_t half = 0;

  enum class Region { kClean, kNoise, kBlur };
  Region region_of(std::size_t y, std::size_t x) const {
    if (y >= half && x >= half) return Region::kNoise;
    if (y < half && x >= half) return Region::kBlur;
    return Region::kClean;
  }
};

inline QuadrantWsi quadrant_wsi(std::size_t n, std::uint64_t seed, double noise_sigma = 0.1,
                                double blur_sigma = 2.0) {
  QuadrantWsi q;
  q.half = n / 2;
  q.a = tissue_image(n, n, seed);
  const ImagePatch flat = low_texture_image(q.half, q.half, seed + 1, 0, q.half);
  paste(q.a, flat, 0, q.half);
  q.b = q.a;
  paste(q.b, blur_image(flat, blur_sigma), 0, q.half);
  const ImagePatch corner = q.a.crop(q.half, q.half, n - q.half, n - q.half);
  paste(q.b, add_gaussian_noise(corner, noise_sigma, seed + 2), q.half, q.half);
  return q;
}

}  // namespace papis::testing
