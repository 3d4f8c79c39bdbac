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

#include <array>
#include <string>
#include <string_view>

#include "papis/core/error.hpp"
#include "papis/core/plane.hpp"
#include "papis/features.hpp"
#include "papis/metrics/baseline.hpp"
#include "papis/metrics/papis.hpp"

namespace papis {

enum class Metric { kPsnr, kSsim, kMsSsim, kPapis };

inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::kPsnr, Metric::kSsim,
                                                     Metric::kMsSsim, Metric::kPapis};

inline std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kPsnr: return "psnr";
    case Metric::kSsim: return "ssim";
    case Metric::kMsSsim: return "ms_ssim";
    case Metric::kPapis: return "papis";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  if (name == "ms-ssim" || name == "msssim") return Metric::kMsSsim;
  throw ArgumentError("unknown metric '" + std::string(name) + "'");
}

// Smallest square side each metric accepts.
inline std::size_t metric_min_size(Metric m) {
  switch (m) {
    case Metric::kPsnr: return 1;
    case Metric::kSsim: return SsimParams::kWindow;
    case Metric::kMsSsim: return kMsSsimMinSize;
    case Metric::kPapis: return 32;
  }
  return 1;
}

inline double compute_metric(Metric m, const ImagePatch& a, const ImagePatch& b,
                             const ExtractorSpec& ext_a, const ExtractorSpec& ext_b,
                             const MetricConfig& cfg) {
  switch (m) {
    case Metric::kPsnr: return psnr(a, b);
    case Metric::kSsim: return ssim(a, b);
    case Metric::kMsSsim: return ms_ssim(a, b);
    case Metric::kPapis: return papis_score(a, b, ext_a, ext_b, cfg);
  }
  return 0.0;
}

}  // namespace papis
