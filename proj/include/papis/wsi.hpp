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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "papis/core/error.hpp"
#include "papis/core/filter.hpp"
#include "papis/core/image_io.hpp"
#include "papis/core/parallel.hpp"
#include "papis/core/plane.hpp"
#include "papis/core/rng.hpp"

namespace papis {

struct Origin {
  std::size_t x = 0;
  std::size_t y = 0;
  friend bool operator==(const Origin&, const Origin&) = default;
};

// Row-major origins of the non-overlapping patch grid; partial tiles at the
// right and bottom edges are discarded.
inline std::vector<Origin> tile_grid(std::size_t width, std::size_t height, std::size_t patch) {
  if (patch == 0) throw ArgumentError("patch size must be at least 1");
  const std::size_t cols = width / patch, rows = height / patch;
  std::vector<Origin> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.push_back({c * patch, r * patch});
  }
  return out;
}

// A patch counts as tissue when enough pixels are darker than the
// background luminance cutoff.
struct TissueFilter {
  double luminance_max = 0.92;
  double min_foreground_fraction = 0.25;

  void validate() const {
    if (!(luminance_max > 0.0 && luminance_max < 1.0)) {
      throw ArgumentError("luminance_max must lie in (0, 1)");
    }
    if (!(min_foreground_fraction >= 0.0 && min_foreground_fraction <= 1.0)) {
      throw ArgumentError("min_foreground_fraction must lie in [0, 1]");
    }
  }
  friend bool operator==(const TissueFilter&, const TissueFilter&) = default;
};

inline double foreground_fraction(const ImagePatch& patch, double luminance_max) {
  const FeatureMap luma = to_grayscale(patch);
  std::size_t fg = 0;
  for (double v : luma.values()) fg += v < luminance_max ? 1 : 0;
  return static_cast<double>(fg) / static_cast<double>(luma.size());
}

inline bool is_tissue(const ImagePatch& patch, const TissueFilter& filter) {
  return foreground_fraction(patch, filter.luminance_max) >= filter.min_foreground_fraction;
}

// `count` crop origins drawn uniformly over all valid positions. The list is
// meant to be applied to both modalities of a registered pair.
inline std::vector<Origin> synchronized_crops(std::size_t width, std::size_t height,
                                              std::size_t count, std::size_t size,
                                              std::uint64_t seed) {
  if (size == 0) throw ArgumentError("crop size must be at least 1");
  if (width < size || height < size) {
    throw ArgumentError("image " + std::to_string(width) + "x" + std::to_string(height) +
                        " is smaller than crop size " + std::to_string(size));
  }
  if (count == 0) throw ArgumentError("crop count must be at least 1");
  Rng rng(seed);
  std::vector<Origin> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t x = rng.uniform_below(width - size + 1);
    const std::size_t y = rng.uniform_below(height - size + 1);
    out.push_back({x, y});
  }
  return out;
}

enum class Transform { kNone, kHFlip, kVFlip, kHVFlip };

inline std::string transform_name(Transform t) {
  switch (t) {
    case Transform::kNone: return "none";
    case Transform::kHFlip: return "hflip";
    case Transform::kVFlip: return "vflip";
    case Transform::kHVFlip: return "hvflip";
  }
  return "?";
}

inline Transform parse_transform(const std::string& s) {
  if (s == "none") return Transform::kNone;
  if (s == "hflip") return Transform::kHFlip;
  if (s == "vflip") return Transform::kVFlip;
  if (s == "hvflip") return Transform::kHVFlip;
  throw FormatError("unknown transform '" + s + "'");
}

// Optional flip, then bilinear resize to a square of side output_size.
inline ImagePatch apply_transform(const ImagePatch& patch, Transform t, std::size_t output_size) {
  const bool hflip = t == Transform::kHFlip || t == Transform::kHVFlip;
  const bool vflip = t == Transform::kVFlip || t == Transform::kHVFlip;
  const std::size_t h = patch.height(), w = patch.width();
  std::vector<Plane<float>> planes;
  planes.reserve(patch.channels());
  for (std::size_t c = 0; c < patch.channels(); ++c) {
    const auto& src = patch.channel(c);
    Plane<float> flipped(h, w);
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t sy = vflip ? h - 1 - y : y;
      for (std::size_t x = 0; x < w; ++x) flipped(y, x) = src(sy, hflip ? w - 1 - x : x);
    }
    planes.push_back(bilinear_resize(flipped, output_size, output_size));
  }
  ImagePatch out(std::move(planes));
  out.set_source_bits(patch.source_bits());
  return out;
}

struct ManifestEntry {
  std::string patch_id;
  std::string source_image;
  std::size_t origin_x = 0;
  std::size_t origin_y = 0;
  std::size_t size = 0;
  Transform transform = Transform::kNone;
  std::size_t output_size = 0;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

enum class SamplingMode { kGrid, kRandom };

inline std::string mode_name(SamplingMode m) { return m == SamplingMode::kGrid ? "grid" : "random"; }

struct PatchManifest {
  SamplingMode mode = SamplingMode::kGrid;
  std::uint64_t seed = 0;
  TissueFilter filter;
  std::string source_a;
  std::string source_b;
  std::string modality_a = "a";
  std::string modality_b = "b";
  std::vector<ManifestEntry> entries;
  friend bool operator==(const PatchManifest&, const PatchManifest&) = default;
};

inline nlohmann::ordered_json manifest_to_json(const PatchManifest& m) {
  nlohmann::ordered_json j;
  j["format"] = "papis-manifest-1";
  j["mode"] = mode_name(m.mode);
  j["seed"] = m.seed;
  j["filter"] = {{"luminance_max", m.filter.luminance_max},
                 {"min_foreground_fraction", m.filter.min_foreground_fraction}};
  j["sources"] = {{m.modality_a, m.source_a}, {m.modality_b, m.source_b}};
  j["modalities"] = {m.modality_a, m.modality_b};
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"patch_id", e.patch_id},
                       {"source_image", e.source_image},
                       {"origin_x", e.origin_x},
                       {"origin_y", e.origin_y},
                       {"size", e.size},
                       {"transform", transform_name(e.transform)},
                       {"output_size", e.output_size}});
  }
  j["entries"] = std::move(entries);
  return j;
}

inline PatchManifest manifest_from_json(const nlohmann::ordered_json& j) {
  try {
    PatchManifest m;
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "grid" && mode != "random") throw FormatError("unknown manifest mode " + mode);
    m.mode = mode == "grid" ? SamplingMode::kGrid : SamplingMode::kRandom;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.filter.luminance_max = j.at("filter").at("luminance_max").get<double>();
    m.filter.min_foreground_fraction = j.at("filter").at("min_foreground_fraction").get<double>();
    const auto& mods = j.at("modalities");
    m.modality_a = mods.at(0).get<std::string>();
    m.modality_b = mods.at(1).get<std::string>();
    m.source_a = j.at("sources").at(m.modality_a).get<std::string>();
    m.source_b = j.at("sources").at(m.modality_b).get<std::string>();
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.patch_id = e.at("patch_id").get<std::string>();
      entry.source_image = e.at("source_image").get<std::string>();
      entry.origin_x = e.at("origin_x").get<std::size_t>();
      entry.origin_y = e.at("origin_y").get<std::size_t>();
      entry.size = e.at("size").get<std::size_t>();
      entry.transform = parse_transform(e.at("transform").get<std::string>());
      entry.output_size = e.at("output_size").get<std::size_t>();
      m.entries.push_back(std::move(entry));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

inline void write_manifest(const PatchManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << manifest_to_json(m).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline PatchManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return manifest_from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("manifest '" + path.string() + "': " + e.what());
  }
}

struct DatasetParams {
  SamplingMode mode = SamplingMode::kGrid;
  std::size_t patch_size = 1024;
  std::size_t count = 206;        // random mode only
  std::size_t output_size = 0;    // 0 keeps patch_size
  bool augment = false;           // draw a random flip per patch
  std::uint64_t seed = 0;
  TissueFilter filter;
  std::string modality_a = "a";
  std::string modality_b = "b";
  std::size_t threads = 1;
};

// Cuts a registered WSI pair into aligned patches, keeps those whose
// reference (modality a) crop passes the tissue filter, writes
// {out}/{modality}/{patch_id}.png for both modalities and manifest.json.
inline PatchManifest build_dataset(const ImagePatch& wsi_a, const ImagePatch& wsi_b,
                                   const DatasetParams& params, const std::filesystem::path& out,
                                   const std::string& source_a = "a",
                                   const std::string& source_b = "b") {
  require_same_shape(wsi_a, wsi_b);
  params.filter.validate();
  if (params.patch_size == 0) throw ArgumentError("patch size must be at least 1");
  if (params.modality_a == params.modality_b || params.modality_a.empty() ||
      params.modality_b.empty()) {
    throw ArgumentError("modality names must be distinct and non-empty");
  }
  const std::size_t out_size = params.output_size == 0 ? params.patch_size : params.output_size;

  struct Candidate {
    std::string id;
    Origin origin;
    Transform transform = Transform::kNone;
  };
  std::vector<Candidate> candidates;
  if (params.mode == SamplingMode::kGrid) {
    const std::size_t cols = wsi_a.width() / params.patch_size;
    std::size_t k = 0;
    for (const Origin& o : tile_grid(wsi_a.width(), wsi_a.height(), params.patch_size)) {
      char id[32];
      std::snprintf(id, sizeof id, "r%03zu_c%03zu", k / cols, k % cols);
      candidates.push_back({id, o});
      ++k;
    }
  } else {
    std::size_t k = 0;
    for (const Origin& o : synchronized_crops(wsi_a.width(), wsi_a.height(), params.count,
                                              params.patch_size, params.seed)) {
      char id[32];
      std::snprintf(id, sizeof id, "s%05zu", k++);
      candidates.push_back({id, o});
    }
  }
  if (params.augment) {
    // Separate stream so origins do not depend on whether augmentation is on.
    Rng rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    for (auto& c : candidates) c.transform = static_cast<Transform>(rng.uniform_below(4));
  }

  std::filesystem::create_directories(out / params.modality_a);
  std::filesystem::create_directories(out / params.modality_b);

  std::vector<char> accepted(candidates.size(), 0);
  parallel_for(candidates.size(), params.threads, [&](std::size_t k) {
    const auto& c = candidates[k];
    const ImagePatch crop_a =
        wsi_a.crop(c.origin.y, c.origin.x, params.patch_size, params.patch_size);
    if (!is_tissue(crop_a, params.filter)) return;
    const ImagePatch crop_b =
        wsi_b.crop(c.origin.y, c.origin.x, params.patch_size, params.patch_size);
    const std::string file = c.id + ".png";
    save_png(apply_transform(crop_a, c.transform, out_size), out / params.modality_a / file,
             wsi_a.source_bits());
    save_png(apply_transform(crop_b, c.transform, out_size), out / params.modality_b / file,
             wsi_b.source_bits());
    accepted[k] = 1;
  });

  PatchManifest manifest;
  manifest.mode = params.mode;
  manifest.seed = params.seed;
  manifest.filter = params.filter;
  manifest.source_a = source_a;
  manifest.source_b = source_b;
  manifest.modality_a = params.modality_a;
  manifest.modality_b = params.modality_b;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!accepted[k]) continue;
    const auto& c = candidates[k];
    manifest.entries.push_back({c.id, source_a, c.origin.x, c.origin.y, params.patch_size,
                                c.transform, out_size});
  }
  write_manifest(manifest, out / "manifest.json");
  return manifest;
}

}  // namespace papis
