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
#include <vector>

#include "papis/analysis/report.hpp"
#include "papis/core/error.hpp"

namespace papis {

// One image pair placed in the PaPIS-vs-other-metric plane.
struct ScorePoint {
  double papis = 0.0;
  double other = 0.0;
};

struct Thresholds {
  double papis = 0.0;
  double other = 0.0;
};

// Quadrant label; a score equal to its threshold counts as high.
inline Category categorize_point(const ScorePoint& p, const Thresholds& t) {
  const bool papis_high = p.papis >= t.papis;
  const bool other_high = p.other >= t.other;
  if (papis_high) return other_high ? Category::kAH : Category::kPD;
  return other_high ? Category::kTD : Category::kAL;
}

inline std::vector<Category> categorize(const std::vector<ScorePoint>& points,
                                        const Thresholds& t) {
  if (!std::isfinite(t.papis) || !std::isfinite(t.other)) {
    throw ArgumentError("category thresholds must be finite");
  }
  std::vector<Category> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(categorize_point(p, t));
  return out;
}

// Lower median (element (n-1)/2 of the sorted values).
inline double lower_median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

// Per-axis lower medians.
inline Thresholds default_thresholds(const std::vector<ScorePoint>& points) {
  if (points.size() < 2) throw ArgumentError("default thresholds need at least 2 points");
  std::vector<double> a, b;
  a.reserve(points.size());
  b.reserve(points.size());
  for (const auto& p : points) {
    a.push_back(p.papis);
    b.push_back(p.other);
  }
  return {lower_median(std::move(a)), lower_median(std::move(b))};
}

}  // namespace papis
