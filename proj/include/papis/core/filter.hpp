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
#include <span>
#include <vector>

#include "papis/core/error.hpp"
#include "papis/core/plane.hpp"

namespace papis {

// Sampled, normalized 1-D Gaussian truncated at radius ceil(3 * sigma).
class GaussianKernel {
 public:
  explicit GaussianKernel(double sigma) : GaussianKernel(sigma, radius_for(sigma)) {}

  GaussianKernel(double sigma, std::size_t radius) : sigma_(sigma), radius_(radius) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ArgumentError("gaussian sigma must be positive and finite");
    }
    taps_.resize(2 * radius_ + 1);
    const double denom = 2.0 * sigma * sigma;
    double sum = 0.0;
    for (std::size_t i = 0; i < taps_.size(); ++i) {
      const double d = static_cast<double>(i) - static_cast<double>(radius_);
      taps_[i] = std::exp(-d * d / denom);
      sum += taps_[i];
    }
    for (double& t : taps_) t /= sum;
    // Enforce exact mirror symmetry after the division.
    for (std::size_t k = 1; k <= radius_; ++k) taps_[radius_ + k] = taps_[radius_ - k];
  }

  static std::size_t radius_for(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ArgumentError("gaussian sigma must be positive and finite");
    }
    return static_cast<std::size_t>(std::ceil(3.0 * sigma));
  }

  double sigma() const noexcept { return sigma_; }
  std::size_t radius() const noexcept { return radius_; }
  std::span<const double> taps() const noexcept { return taps_; }

 private:
  double sigma_;
  std::size_t radius_;
  std::vector<double> taps_;
};

// Mirror index without repeating the edge sample (... 2 1 | 0 1 2 ... n-1 | n-2 ...).
// Repeated folding keeps any offset in range even when it exceeds the size.
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) noexcept {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

namespace detail {

// out[x] = sum_k taps[k] * padded[x + k], taps symmetric around the center.
inline void correlate_symmetric(std::span<const double> padded, std::span<const double> taps,
                                std::span<double> out) {
  const std::size_t r = taps.size() / 2;
  const std::size_t n = out.size();
  const double* p = padded.data() + r;
  double* o = out.data();
  const double w0 = taps[r];
  for (std::size_t x = 0; x < n; ++x) o[x] = w0 * p[x];
  for (std::size_t k = 1; k <= r; ++k) {
    const double w = taps[r + k];
    const double* lo = p - k;
    const double* hi = p + k;
    for (std::size_t x = 0; x < n; ++x) o[x] += w * (lo[x] + hi[x]);
  }
}

}  // namespace detail

// Separable convolution with an arbitrary symmetric kernel, reflect padding,
// output the same size as the input. Accumulates in double.
template <typename T>
Plane<T> convolve_separable(const Plane<T>& in, std::span<const double> taps) {
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  const std::size_t r = taps.size() / 2;
  Plane<double> tmp(h, w);
  std::vector<double> padded(w + 2 * r);
  for (std::size_t y = 0; y < h; ++y) {
    auto src = in.row(y);
    for (std::size_t i = 0; i < padded.size(); ++i) {
      padded[i] = static_cast<double>(
          src[reflect_index(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(r), w)]);
    }
    detail::correlate_symmetric(padded, taps, tmp.row(y));
  }

  Plane<T> out(h, w);
  std::vector<double> acc(w);
  const double w0 = taps[r];
  for (std::size_t y = 0; y < h; ++y) {
    auto center = tmp.row(y);
    for (std::size_t x = 0; x < w; ++x) acc[x] = w0 * center[x];
    for (std::size_t k = 1; k <= r; ++k) {
      const double wk = taps[r + k];
      const auto yy = static_cast<std::ptrdiff_t>(y);
      auto up = tmp.row(reflect_index(yy - static_cast<std::ptrdiff_t>(k), h));
      auto dn = tmp.row(reflect_index(yy + static_cast<std::ptrdiff_t>(k), h));
      for (std::size_t x = 0; x < w; ++x) acc[x] += wk * (up[x] + dn[x]);
    }
    auto dst = out.row(y);
    for (std::size_t x = 0; x < w; ++x) dst[x] = static_cast<T>(acc[x]);
  }
  return out;
}

template <typename T>
Plane<T> gaussian_blur(const Plane<T>& map, double sigma) {
  const GaussianKernel kernel(sigma);
  return convolve_separable(map, kernel.taps());
}

// Separable "valid" correlation: no padding, output shrinks by taps.size()-1
// along each axis. Used by the SSIM family.
template <typename T>
Plane<double> correlate_valid(const Plane<T>& in, std::span<const double> taps) {
  const std::size_t k = taps.size();
  if (in.height() < k || in.width() < k) {
    throw ArgumentError("input smaller than filter window");
  }
  const std::size_t oh = in.height() - k + 1;
  const std::size_t ow = in.width() - k + 1;
  const std::size_t r = k / 2;
  Plane<double> tmp(in.height(), ow);
  std::vector<double> row(in.width());
  for (std::size_t y = 0; y < in.height(); ++y) {
    auto src = in.row(y);
    std::copy(src.begin(), src.end(), row.begin());
    // padded view where index r corresponds to the first output's center
    detail::correlate_symmetric(row, taps, tmp.row(y));
  }
  Plane<double> out(oh, ow);
  const double w0 = taps[r];
  for (std::size_t y = 0; y < oh; ++y) {
    auto dst = out.row(y);
    auto center = tmp.row(y + r);
    for (std::size_t x = 0; x < ow; ++x) dst[x] = w0 * center[x];
    for (std::size_t j = 1; j <= r; ++j) {
      const double wj = taps[r + j];
      auto up = tmp.row(y + r - j);
      auto dn = tmp.row(y + r + j);
      for (std::size_t x = 0; x < ow; ++x) dst[x] += wj * (up[x] + dn[x]);
    }
  }
  return out;
}

// Channel-wise min-max normalization; a flat map becomes all zeros.
template <typename T>
Plane<T> normalize_channel(const Plane<T>& map) {
  Plane<T> out(map.height(), map.width());
  if (map.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(map.values().begin(), map.values().end());
  const T lo = *lo_it;
  const T hi = *hi_it;
  if (!(hi > lo)) return out;
  const double range = static_cast<double>(hi) - static_cast<double>(lo);
  auto src = map.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = (static_cast<double>(src[i]) - static_cast<double>(lo)) / range;
    dst[i] = static_cast<T>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

// Align-corners bilinear interpolation.
template <typename T>
Plane<T> bilinear_resize(const Plane<T>& map, std::size_t out_h, std::size_t out_w) {
  if (out_h == 0 || out_w == 0) throw ArgumentError("resize target must be at least 1x1");
  if (map.empty()) throw ArgumentError("cannot resize an empty map");
  if (out_h == map.height() && out_w == map.width()) return map;

  const auto source_coord = [](std::size_t dst, std::size_t n_in, std::size_t n_out) {
    if (n_out == 1 || n_in == 1) return 0.0;
    return static_cast<double>(dst) * static_cast<double>(n_in - 1) /
           static_cast<double>(n_out - 1);
  };
  struct Tap {
    std::size_t i0, i1;
    double f;
  };
  const auto taps_for = [&](std::size_t n_in, std::size_t n_out) {
    std::vector<Tap> taps(n_out);
    for (std::size_t d = 0; d < n_out; ++d) {
      const double s = source_coord(d, n_in, n_out);
      auto i0 = static_cast<std::size_t>(std::floor(s));
      if (i0 > n_in - 1) i0 = n_in - 1;
      const std::size_t i1 = std::min(i0 + 1, n_in - 1);
      taps[d] = {i0, i1, s - static_cast<double>(i0)};
    }
    return taps;
  };
  const auto ty = taps_for(map.height(), out_h);
  const auto tx = taps_for(map.width(), out_w);

  Plane<T> out(out_h, out_w);
  for (std::size_t y = 0; y < out_h; ++y) {
    auto r0 = map.row(ty[y].i0);
    auto r1 = map.row(ty[y].i1);
    const double fy = ty[y].f;
    auto dst = out.row(y);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double fx = tx[x].f;
      const double top = static_cast<double>(r0[tx[x].i0]) * (1.0 - fx) +
                         static_cast<double>(r0[tx[x].i1]) * fx;
      const double bot = static_cast<double>(r1[tx[x].i0]) * (1.0 - fx) +
                         static_cast<double>(r1[tx[x].i1]) * fx;
      dst[x] = static_cast<T>(top * (1.0 - fy) + bot * fy);
    }
  }
  return out;
}

// BT.601 luma for RGB, passthrough for single-channel images.
inline FeatureMap to_grayscale(const ImagePatch& img) {
  if (img.channels() == 1) return img.channel(0).cast<double>();
  if (img.channels() != 3) throw ArgumentError("to_grayscale expects 1 or 3 channels");
  FeatureMap out(img.height(), img.width());
  auto r = img.channel(0).values();
  auto g = img.channel(1).values();
  auto b = img.channel(2).values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = 0.299 * static_cast<double>(r[i]) + 0.587 * static_cast<double>(g[i]) +
             0.114 * static_cast<double>(b[i]);
  }
  return out;
}

}  // namespace papis
