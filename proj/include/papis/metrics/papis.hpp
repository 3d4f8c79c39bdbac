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
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "papis/core/error.hpp"
#include "papis/core/plane.hpp"
#include "papis/core/rng.hpp"
#include "papis/features.hpp"
#include "papis/retinex.hpp"

namespace papis {

enum class WeightMode { kUniform, kSeededRandom };

// kSimilarity: score = D_high - lambda * D_low (higher is better throughout).
// kLiteral:    score = lambda * D_low + D_high, the formula as published.
enum class ScoreConvention { kSimilarity, kLiteral };

// alpha[i][j] weighs the mean term and beta[i][j] the deviation term of
// layer i, channel j.
struct WeightTable {
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> beta;

  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (const auto& row : alpha) s.push_back(row.size());
    return s;
  }

  double total() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      for (std::size_t j = 0; j < alpha[i].size(); ++j) sum += alpha[i][j] + beta[i][j];
    }
    return sum;
  }

  void validate() const {
    if (alpha.size() != beta.size()) throw ArgumentError("alpha/beta layer counts differ");
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i].size() != beta[i].size()) {
        throw ArgumentError("alpha/beta channel counts differ in layer " + std::to_string(i));
      }
      for (std::size_t j = 0; j < alpha[i].size(); ++j) {
        if (!(alpha[i][j] >= 0.0) || !(beta[i][j] >= 0.0)) {
          throw ArgumentError("weights must be non-negative");
        }
      }
    }
    if (std::abs(total() - 1.0) > 1e-9) throw ArgumentError("weights must sum to 1");
  }
};

inline std::string to_string(WeightMode m) {
  return m == WeightMode::kUniform ? "uniform" : "seeded-random";
}
inline std::string to_string(ScoreConvention c) {
  return c == ScoreConvention::kSimilarity ? "similarity" : "literal";
}

struct MetricConfig {
  double lambda = 0.1;
  double c1 = 1e-6;
  double c2 = 1e-6;
  std::vector<double> sigmas = default_retinex_sigmas();
  double epsilon = kDefaultRetinexEpsilon;
  WeightMode weight_mode = WeightMode::kUniform;
  std::uint64_t seed = 0;
  ScoreConvention convention = ScoreConvention::kSimilarity;
  // When set, used verbatim instead of generating a table from weight_mode.
  std::optional<WeightTable> weights;

  void validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("lambda must be >= 0");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw ArgumentError("c1 and c2 must be positive");
    validate_retinex_params(sigmas, epsilon);
    if (weights) weights->validate();
  }
};

// Uniform: every entry 1/(2N). Seeded-random: 2N draws from (0,1) in the
// order alpha[0][0..], alpha[1][0..], ..., beta[0][0..], ... normalized to
// sum to 1.
inline WeightTable make_weights(const std::vector<std::size_t>& shape, WeightMode mode,
                                std::uint64_t seed) {
  std::size_t n = 0;
  for (std::size_t c : shape) n += c;
  if (n == 0) throw ArgumentError("weight table needs at least one channel");
  WeightTable t;
  for (std::size_t c : shape) {
    t.alpha.emplace_back(c, 0.0);
    t.beta.emplace_back(c, 0.0);
  }
  if (mode == WeightMode::kUniform) {
    const double w = 1.0 / (2.0 * static_cast<double>(n));
    for (auto& row : t.alpha) std::fill(row.begin(), row.end(), w);
    for (auto& row : t.beta) std::fill(row.begin(), row.end(), w);
    return t;
  }
  Rng rng(seed);
  double sum = 0.0;
  for (auto* table : {&t.alpha, &t.beta}) {
    for (auto& row : *table) {
      for (double& v : row) {
        v = rng.uniform_open();
        sum += v;
      }
    }
  }
  for (auto* table : {&t.alpha, &t.beta}) {
    for (auto& row : *table) {
      for (double& v : row) v /= sum;
    }
  }
  return t;
}

inline WeightTable resolve_weights(const MetricConfig& cfg, const std::vector<std::size_t>& shape) {
  if (cfg.weights) {
    if (cfg.weights->shape() != shape) {
      throw ArgumentError("weight table shape does not match the feature stack");
    }
    return *cfg.weights;
  }
  return make_weights(shape, cfg.weight_mode, cfg.seed);
}

// Retinex decomposition of every channel of a feature stack.
struct RetinexStack {
  std::vector<std::vector<RetinexPair>> layers;

  std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (const auto& l : layers) s.push_back(l.size());
    return s;
  }
};

inline RetinexStack decompose_stack(const FeatureStack& stack, const std::vector<double>& sigmas,
                                    double epsilon) {
  stack.validate();
  RetinexStack out;
  out.layers.reserve(stack.layers.size());
  for (const auto& layer : stack.layers) {
    std::vector<RetinexPair> pairs;
    pairs.reserve(layer.size());
    for (const auto& map : layer) pairs.push_back(msr_decompose(map, sigmas, epsilon));
    out.layers.push_back(std::move(pairs));
  }
  return out;
}

// Population mean and standard deviation of one map.
struct ChannelStats {
  double mu = 0.0;
  double sd = 0.0;
};

inline ChannelStats channel_stats(const FeatureMap& map) {
  const auto v = map.values();
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mu = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return {mu, std::sqrt(ss / static_cast<double>(v.size()))};
}

// Reflectance averaged over Retinex scales.
inline FeatureMap pooled_reflectance(const RetinexPair& p) {
  FeatureMap acc(p.reflectances.front().height(), p.reflectances.front().width());
  for (const auto& r : p.reflectances) {
    auto src = r.values();
    auto dst = acc.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  const double inv = 1.0 / static_cast<double>(p.reflectances.size());
  for (double& v : acc.values()) v *= inv;
  return acc;
}

namespace detail {

inline void require_congruent(const RetinexStack& a, const RetinexStack& b) {
  if (a.layers.size() != b.layers.size()) throw ArgumentError("retinex stacks differ in layers");
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].size() != b.layers[i].size()) {
      throw ArgumentError("retinex stacks differ in channels at layer " + std::to_string(i));
    }
    for (std::size_t j = 0; j < a.layers[i].size(); ++j) {
      const auto& pa = a.layers[i][j];
      const auto& pb = b.layers[i][j];
      if (pa.scale_count() == 0 || pa.scale_count() != pb.scale_count() ||
          pa.illuminations.size() != pa.scale_count() ||
          pb.illuminations.size() != pb.scale_count() ||
          pa.reflectances.size() != pa.scale_count() ||
          pb.reflectances.size() != pb.scale_count()) {
        throw ArgumentError("retinex stacks differ in scales");
      }
      for (std::size_t s = 0; s < pa.scale_count(); ++s) {
        if (!pa.illuminations[s].same_shape(pb.illuminations[s]) ||
            !pa.reflectances[s].same_shape(pb.reflectances[s])) {
          throw ArgumentError("retinex maps differ in size");
        }
      }
    }
  }
}

inline double similarity_ratio(double a, double b, double c) {
  return (2.0 * a * b + c) / (a * a + b * b + c);
}

}  // namespace detail

// High-frequency similarity: weighted agreement of reflectance mean and
// standard deviation per (layer, channel).
inline double d_high(const RetinexStack& rx, const RetinexStack& ry, const MetricConfig& cfg) {
  detail::require_congruent(rx, ry);
  const WeightTable w = resolve_weights(cfg, rx.shape());
  double score = 0.0;
  for (std::size_t i = 0; i < rx.layers.size(); ++i) {
    for (std::size_t j = 0; j < rx.layers[i].size(); ++j) {
      const ChannelStats sx = channel_stats(pooled_reflectance(rx.layers[i][j]));
      const ChannelStats sy = channel_stats(pooled_reflectance(ry.layers[i][j]));
      score += w.alpha[i][j] * detail::similarity_ratio(sx.mu, sy.mu, cfg.c1) +
               w.beta[i][j] * detail::similarity_ratio(sx.sd, sy.sd, cfg.c2);
    }
  }
  return score;
}

// Low-frequency distance: per-map pixel MSE of illuminations, averaged over
// every (layer, channel, scale).
inline double d_low(const RetinexStack& lx, const RetinexStack& ly) {
  detail::require_congruent(lx, ly);
  double total = 0.0;
  std::size_t maps = 0;
  for (std::size_t i = 0; i < lx.layers.size(); ++i) {
    for (std::size_t j = 0; j < lx.layers[i].size(); ++j) {
      const auto& a = lx.layers[i][j].illuminations;
      const auto& b = ly.layers[i][j].illuminations;
      for (std::size_t s = 0; s < a.size(); ++s) {
        auto va = a[s].values();
        auto vb = b[s].values();
        double sum = 0.0;
        for (std::size_t k = 0; k < va.size(); ++k) {
          const double d = va[k] - vb[k];
          sum += d * d;
        }
        total += sum / static_cast<double>(va.size());
        ++maps;
      }
    }
  }
  return total / static_cast<double>(maps);
}

struct PapisBreakdown {
  double d_high = 0.0;
  double d_low = 0.0;
  double score = 0.0;
};

inline double combine_papis(double high, double low, const MetricConfig& cfg) {
  return cfg.convention == ScoreConvention::kSimilarity ? high - cfg.lambda * low
                                                        : cfg.lambda * low + high;
}

inline PapisBreakdown papis_from_retinex(const RetinexStack& rx, const RetinexStack& ry,
                                         const MetricConfig& cfg) {
  PapisBreakdown out;
  out.d_high = d_high(rx, ry, cfg);
  out.d_low = d_low(rx, ry);
  out.score = combine_papis(out.d_high, out.d_low, cfg);
  return out;
}

inline PapisBreakdown papis_from_features(const FeatureStack& fx, const FeatureStack& fy,
                                          const MetricConfig& cfg) {
  cfg.validate();
  return papis_from_retinex(decompose_stack(fx, cfg.sigmas, cfg.epsilon),
                            decompose_stack(fy, cfg.sigmas, cfg.epsilon), cfg);
}

inline PapisBreakdown papis_breakdown(const ImagePatch& x, const ImagePatch& y,
                                      const ExtractorSpec& extractor_x,
                                      const ExtractorSpec& extractor_y, const MetricConfig& cfg) {
  require_same_shape(x, y);
  cfg.validate();
  if (extractor_x == extractor_y && x == y) {
    // Both sides would be bitwise identical; decompose once.
    const RetinexStack r =
        decompose_stack(extract_features(x, extractor_x), cfg.sigmas, cfg.epsilon);
    return papis_from_retinex(r, r, cfg);
  }
  return papis_from_features(extract_features(x, extractor_x), extract_features(y, extractor_y),
                             cfg);
}

// The same extractor is applied to both images. With an external feature
// file both images therefore share one stack; use the two-extractor overload
// to give each image its own file.
inline double papis_score(const ImagePatch& x, const ImagePatch& y, const ExtractorSpec& extractor,
                          const MetricConfig& cfg) {
  return papis_breakdown(x, y, extractor, extractor, cfg).score;
}

inline double papis_score(const ImagePatch& x, const ImagePatch& y, const ExtractorSpec& extractor_x,
                          const ExtractorSpec& extractor_y, const MetricConfig& cfg) {
  return papis_breakdown(x, y, extractor_x, extractor_y, cfg).score;
}

inline double papis_loss(const ImagePatch& x, const ImagePatch& g, const ExtractorSpec& extractor,
                         const MetricConfig& cfg) {
  return 1.0 - papis_score(x, g, extractor, cfg);
}

struct LossWeights {
  double cycle = 2.0;
  double papis = 1.0;
  double generator = 1.0;
  double discriminator = 1.0;
};

// Weighted CycleGAN objective with the PaPIS term.
inline double total_loss(double cycle, double papis_term, double gen, double disc,
                         const LossWeights& w) {
  return w.cycle * cycle + w.papis * papis_term + w.generator * gen + w.discriminator * disc;
}

}  // namespace papis
