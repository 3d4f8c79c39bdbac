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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "papis/analysis/colormap.hpp"
#include "papis/core/error.hpp"
#include "papis/core/image_io.hpp"
#include "papis/core/parallel.hpp"
#include "papis/core/plane.hpp"
#include "papis/features.hpp"
#include "papis/metrics/registry.hpp"
#include "papis/wsi.hpp"

namespace papis {

// Per-patch scores of an aligned WSI pair; NaN marks non-tissue patches.
struct HeatmapGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t patch_size = 0;
  std::vector<double> scores;
  std::string metric_name;

  double at(std::size_t r, std::size_t c) const { return scores.at(r * cols + c); }

  void validate() const {
    if (scores.size() != rows * cols) throw ArgumentError("heatmap score count mismatch");
  }
};

struct HeatmapOptions {
  ExtractorSpec extractor = FilterBankSpec::standard();
  TissueFilter filter;
  std::size_t threads = 1;
};

inline HeatmapGrid heatmap(const ImagePatch& wsi_a, const ImagePatch& wsi_b,
                           std::size_t patch_size, Metric metric, const MetricConfig& cfg,
                           const HeatmapOptions& options = {}) {
  require_same_shape(wsi_a, wsi_b);
  if (patch_size < metric_min_size(metric)) {
    throw ArgumentError("patch size " + std::to_string(patch_size) + " is below the " +
                        std::to_string(metric_min_size(metric)) + " pixels " +
                        metric_name(metric) + " needs");
  }
  options.filter.validate();
  if (metric == Metric::kPapis) cfg.validate();
  HeatmapGrid grid;
  grid.patch_size = patch_size;
  grid.rows = wsi_a.height() / patch_size;
  grid.cols = wsi_a.width() / patch_size;
  grid.metric_name = metric_name(metric);
  const auto origins = tile_grid(wsi_a.width(), wsi_a.height(), patch_size);
  grid.scores.assign(origins.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(origins.size(), options.threads, [&](std::size_t k) {
    const Origin o = origins[k];
    const ImagePatch a = wsi_a.crop(o.y, o.x, patch_size, patch_size);
    if (!is_tissue(a, options.filter)) return;
    const ImagePatch b = wsi_b.crop(o.y, o.x, patch_size, patch_size);
    grid.scores[k] = compute_metric(metric, a, b, options.extractor, options.extractor, cfg);
  });
  return grid;
}

// Affine map from the finite score range onto LUT indices:
// index = floor((v - min) / (max - min) * 255 + 0.5). A degenerate range
// maps every finite score to index 128; +inf maps to 255 and -inf to 0.
struct ColorScale {
  double min = 0.0;
  double max = 0.0;
  bool degenerate = true;

  static ColorScale fit(const std::vector<double>& scores) {
    ColorScale s;
    bool any = false;
    for (double v : scores) {
      if (!std::isfinite(v)) continue;
      if (!any) {
        s.min = s.max = v;
        any = true;
      } else {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
      }
    }
    s.degenerate = !(s.max > s.min);
    return s;
  }

  std::optional<std::size_t> index(double v) const {
    if (std::isnan(v)) return std::nullopt;
    if (std::isinf(v)) return v > 0 ? 255 : 0;
    if (degenerate) return 128;
    const double t = (v - min) / (max - min) * 255.0 + 0.5;
    return static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, 255.0));
  }

  Rgb8 color(double v) const {
    const auto idx = index(v);
    return idx ? kWarmColdLut[*idx] : kNanColor;
  }
};

namespace detail {

inline nlohmann::ordered_json grid_json(const HeatmapGrid& grid, const ColorScale& scale,
                                        std::size_t cell_scale) {
  nlohmann::ordered_json j;
  j["metric"] = grid.metric_name;
  j["rows"] = grid.rows;
  j["cols"] = grid.cols;
  j["patch_size"] = grid.patch_size;
  j["cell_scale"] = cell_scale;
  j["lut"] = "coolwarm-256";
  j["index_formula"] = "floor((v - min) / (max - min) * 255 + 0.5)";
  if (scale.degenerate) {
    j["min"] = nullptr;
    j["max"] = nullptr;
    if (std::isfinite(scale.min)) {
      j["min"] = scale.min;
      j["max"] = scale.max;
    }
  } else {
    j["min"] = scale.min;
    j["max"] = scale.max;
  }
  j["degenerate_index"] = 128;
  j["nan_rgb"] = {kNanColor[0], kNanColor[1], kNanColor[2]};
  auto scores = nlohmann::ordered_json::array();
  for (double v : grid.scores) {
    if (std::isnan(v)) {
      scores.push_back(nullptr);
    } else if (std::isinf(v)) {
      scores.push_back(v > 0 ? "inf" : "-inf");
    } else {
      scores.push_back(v);
    }
  }
  j["scores"] = std::move(scores);
  return j;
}

inline void paint_grid(const HeatmapGrid& grid, const ColorScale& scale, std::size_t cell,
                       std::size_t x_offset, std::size_t canvas_w, std::vector<std::uint8_t>& rgb) {
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const Rgb8 col = scale.color(grid.at(r, c));
      for (std::size_t dy = 0; dy < cell; ++dy) {
        for (std::size_t dx = 0; dx < cell; ++dx) {
          const std::size_t px = ((r * cell + dy) * canvas_w + x_offset + c * cell + dx) * 3;
          rgb[px] = col[0];
          rgb[px + 1] = col[1];
          rgb[px + 2] = col[2];
        }
      }
    }
  }
}

inline void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

inline std::filesystem::path sidecar_path(const std::filesystem::path& png) {
  auto p = png;
  p.replace_extension(".json");
  return p;
}

// Writes an 8-bit RGB PNG with each patch drawn as a cell_scale x cell_scale
// block, plus a JSON sidecar (same stem) holding the grid and color scale.
inline void render_heatmap(const HeatmapGrid& grid, const std::filesystem::path& path,
                           std::size_t cell_scale = 32) {
  grid.validate();
  if (grid.rows == 0 || grid.cols == 0) throw ArgumentError("cannot render an empty heatmap");
  if (cell_scale == 0) throw ArgumentError("cell scale must be at least 1");
  const ColorScale scale = ColorScale::fit(grid.scores);
  const std::size_t w = grid.cols * cell_scale, h = grid.rows * cell_scale;
  std::vector<std::uint8_t> rgb(w * h * 3, 0);
  detail::paint_grid(grid, scale, cell_scale, 0, w, rgb);
  save_rgb8_png(path, h, w, rgb);
  detail::write_json(detail::grid_json(grid, scale, cell_scale), sidecar_path(path));
}

// Several grids of equal shape rendered left to right with a white gap; each
// panel has its own color scale. The sidecar lists the panels in order.
inline void render_heatmaps_side_by_side(const std::vector<HeatmapGrid>& grids,
                                         const std::filesystem::path& path,
                                         std::size_t cell_scale = 32, std::size_t gap = 8) {
  if (grids.empty()) throw ArgumentError("no heatmaps to render");
  for (const auto& g : grids) {
    g.validate();
    if (g.rows != grids[0].rows || g.cols != grids[0].cols) {
      throw ArgumentError("side-by-side heatmaps must share a grid shape");
    }
  }
  if (grids[0].rows == 0 || grids[0].cols == 0) throw ArgumentError("cannot render an empty heatmap");
  if (cell_scale == 0) throw ArgumentError("cell scale must be at least 1");
  const std::size_t panel_w = grids[0].cols * cell_scale;
  const std::size_t h = grids[0].rows * cell_scale;
  const std::size_t w = panel_w * grids.size() + gap * (grids.size() - 1);
  std::vector<std::uint8_t> rgb(w * h * 3, 255);
  auto panels = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const ColorScale scale = ColorScale::fit(grids[k].scores);
    detail::paint_grid(grids[k], scale, cell_scale, k * (panel_w + gap), w, rgb);
    panels.push_back(detail::grid_json(grids[k], scale, cell_scale));
  }
  save_rgb8_png(path, h, w, rgb);
  nlohmann::ordered_json j;
  j["gap"] = gap;
  j["panels"] = std::move(panels);
  detail::write_json(j, sidecar_path(path));
}

inline nlohmann::ordered_json heatmap_to_json(const HeatmapGrid& grid) {
  return detail::grid_json(grid, ColorScale::fit(grid.scores), 0);
}

}  // namespace papis
