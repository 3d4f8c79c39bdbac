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
#include <string>
#include <vector>

#include "papis/core/error.hpp"
#include "papis/core/filter.hpp"
#include "papis/core/plane.hpp"

namespace papis {

inline constexpr double kDefaultRetinexEpsilon = 1e-4;

inline std::vector<double> default_retinex_sigmas() { return {2.0, 8.0, 32.0}; }

// Multi-scale Retinex split of one map: for every sigma an illumination map
// (Gaussian-smoothed intensity) and a reflectance map (log ratio of intensity
// to illumination).
struct RetinexPair {
  std::vector<FeatureMap> illuminations;
  std::vector<FeatureMap> reflectances;
  std::vector<double> sigmas;
  double epsilon = kDefaultRetinexEpsilon;

  std::size_t scale_count() const noexcept { return sigmas.size(); }
};

inline void validate_retinex_params(const std::vector<double>& sigmas, double epsilon) {
  if (sigmas.empty()) throw ArgumentError("retinex needs at least one sigma");
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ArgumentError("retinex sigma must be positive");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ArgumentError("retinex epsilon must lie in (0, 1)");
  }
}

inline RetinexPair msr_decompose(const FeatureMap& map, const std::vector<double>& sigmas,
                                 double epsilon = kDefaultRetinexEpsilon) {
  validate_retinex_params(sigmas, epsilon);
  FeatureMap floored(map.height(), map.width());
  {
    auto src = map.values();
    auto dst = floored.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::clamp(src[k], epsilon, 1.0);
  }
  FeatureMap log_intensity(map.height(), map.width());
  {
    auto src = floored.values();
    auto dst = log_intensity.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::log(src[k]);
  }

  RetinexPair out;
  out.sigmas = sigmas;
  out.epsilon = epsilon;
  out.illuminations.reserve(sigmas.size());
  out.reflectances.reserve(sigmas.size());
  for (double sigma : sigmas) {
    FeatureMap illum = gaussian_blur(floored, sigma);
    FeatureMap refl(map.height(), map.width());
    auto l = illum.values();
    auto li = log_intensity.values();
    auto r = refl.values();
    for (std::size_t k = 0; k < l.size(); ++k) {
      l[k] = std::clamp(l[k], epsilon, 1.0);
      r[k] = li[k] - std::log(l[k]);
    }
    out.illuminations.push_back(std::move(illum));
    out.reflectances.push_back(std::move(refl));
  }
  return out;
}

}  // namespace papis
