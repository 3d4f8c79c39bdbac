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
#include <array>
#include <cmath>
#include <limits>

#include "papis/core/error.hpp"
#include "papis/core/filter.hpp"
#include "papis/core/plane.hpp"

namespace papis {

// Peak signal-to-noise ratio for data range [0,1]; +inf for identical inputs.
inline double psnr(const ImagePatch& x, const ImagePatch& y) {
  require_same_shape(x, y);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < x.channels(); ++c) {
    auto a = x.channel(c).values();
    auto b = y.channel(c).values();
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = static_cast<double>(a[k]) - static_cast<double>(b[k]);
      sum += d * d;
    }
    n += a.size();
  }
  const double mse = sum / static_cast<double>(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

struct SsimParams {
  static constexpr std::size_t kWindow = 11;
  static constexpr double kSigma = 1.5;
  static constexpr double kK1 = 0.01;
  static constexpr double kK2 = 0.03;
  static constexpr double kC1 = (kK1 * 1.0) * (kK1 * 1.0);
  static constexpr double kC2 = (kK2 * 1.0) * (kK2 * 1.0);
};

// Mean SSIM and mean contrast-structure term over the valid window positions.
struct SsimValue {
  double ssim = 0.0;
  double cs = 0.0;
};

inline SsimValue ssim_maps(const FeatureMap& x, const FeatureMap& y) {
  if (!x.same_shape(y)) throw DimensionError("ssim inputs differ in shape");
  if (std::min(x.height(), x.width()) < SsimParams::kWindow) {
    throw ArgumentError("ssim needs inputs of at least 11x11");
  }
  const GaussianKernel window(SsimParams::kSigma, SsimParams::kWindow / 2);
  FeatureMap xx(x.height(), x.width()), yy(x.height(), x.width()), xy(x.height(), x.width());
  {
    auto a = x.values();
    auto b = y.values();
    auto pxx = xx.values();
    auto pyy = yy.values();
    auto pxy = xy.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
      pxx[k] = a[k] * a[k];
      pyy[k] = b[k] * b[k];
      pxy[k] = a[k] * b[k];
    }
  }
  const auto mu_x = correlate_valid(x, window.taps());
  const auto mu_y = correlate_valid(y, window.taps());
  const auto e_xx = correlate_valid(xx, window.taps());
  const auto e_yy = correlate_valid(yy, window.taps());
  const auto e_xy = correlate_valid(xy, window.taps());

  constexpr double c1 = SsimParams::kC1;
  constexpr double c2 = SsimParams::kC2;
  double ssim_sum = 0.0;
  double cs_sum = 0.0;
  auto mx = mu_x.values();
  auto my = mu_y.values();
  auto sxx = e_xx.values();
  auto syy = e_yy.values();
  auto sxy = e_xy.values();
  for (std::size_t k = 0; k < mx.size(); ++k) {
    const double var_x = sxx[k] - mx[k] * mx[k];
    const double var_y = syy[k] - my[k] * my[k];
    const double cov = sxy[k] - mx[k] * my[k];
    const double cs = (2.0 * cov + c2) / (var_x + var_y + c2);
    const double lum = (2.0 * mx[k] * my[k] + c1) / (mx[k] * mx[k] + my[k] * my[k] + c1);
    ssim_sum += lum * cs;
    cs_sum += cs;
  }
  const auto n = static_cast<double>(mx.size());
  return {ssim_sum / n, cs_sum / n};
}

// Single-scale SSIM on luma: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03, data range 1.
inline double ssim(const ImagePatch& x, const ImagePatch& y) {
  require_same_shape(x, y);
  return ssim_maps(to_grayscale(x), to_grayscale(y)).ssim;
}

inline constexpr std::array<double, 5> kMsSsimWeights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
inline constexpr std::size_t kMsSsimMinSize = 176;

// 2x2 mean pooling; an odd trailing row or column is dropped.
inline FeatureMap average_pool2(const FeatureMap& m) {
  const std::size_t h = m.height() / 2, w = m.width() / 2;
  FeatureMap out(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    auto r0 = m.row(2 * y);
    auto r1 = m.row(2 * y + 1);
    for (std::size_t x = 0; x < w; ++x) {
      out(y, x) = 0.25 * (r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]);
    }
  }
  return out;
}

// Five-scale MS-SSIM on luma. Per-scale terms are clamped at zero before
// exponentiation so that the product stays real.
inline double ms_ssim(const ImagePatch& x, const ImagePatch& y) {
  require_same_shape(x, y);
  if (std::min(x.height(), x.width()) < kMsSsimMinSize) {
    throw ArgumentError("ms-ssim needs inputs of at least 176x176");
  }
  FeatureMap a = to_grayscale(x);
  FeatureMap b = to_grayscale(y);
  double result = 1.0;
  for (std::size_t scale = 0; scale < kMsSsimWeights.size(); ++scale) {
    const SsimValue v = ssim_maps(a, b);
    const bool last = scale + 1 == kMsSsimWeights.size();
    const double term = std::max(last ? v.ssim : v.cs, 0.0);
    result *= std::pow(term, kMsSsimWeights[scale]);
    if (!last) {
      a = average_pool2(a);
      b = average_pool2(b);
    }
  }
  return result;
}

}  // namespace papis
