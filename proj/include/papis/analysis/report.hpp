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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "papis/core/error.hpp"

namespace papis {

enum class Category { kAH, kAL, kPD, kTD };

inline std::string category_name(Category c) {
  switch (c) {
    case Category::kAH: return "AH";
    case Category::kAL: return "AL";
    case Category::kPD: return "PD";
    case Category::kTD: return "TD";
  }
  return "?";
}

inline std::optional<Category> parse_category(std::string_view s) {
  if (s == "AH") return Category::kAH;
  if (s == "AL") return Category::kAL;
  if (s == "PD") return Category::kPD;
  if (s == "TD") return Category::kTD;
  return std::nullopt;
}

// All scores for one image pair. PSNR may be +inf; other scores are finite.
struct PairReport {
  std::string pair_id;
  std::map<std::string, double> scores;
  std::optional<Category> category;

  friend bool operator==(const PairReport&, const PairReport&) = default;
};

// Fixed report columns, in output order.
inline const std::vector<std::string>& report_metric_columns() {
  static const std::vector<std::string> cols = {"psnr", "ssim", "ms_ssim", "papis", "lpips",
                                                "dists"};
  return cols;
}

// 9 significant digits; infinities as "inf"/"-inf", NaN as "nan".
inline std::string format_score(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::optional<double> parse_score(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const std::string s(text);
  if (s == "inf" || s == "+inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || std::isnan(v)) return std::nullopt;
  return v;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

// CSV with header pair_id,psnr,ssim,ms_ssim,papis,lpips,dists,category.
// Absent values are empty fields.
inline std::string reports_to_csv(const std::vector<PairReport>& reports) {
  std::string out = "pair_id";
  for (const auto& c : report_metric_columns()) out += "," + c;
  out += ",category\n";
  for (const auto& r : reports) {
    out += r.pair_id;
    for (const auto& c : report_metric_columns()) {
      out += ',';
      if (auto it = r.scores.find(c); it != r.scores.end()) out += format_score(it->second);
    }
    out += ',';
    if (r.category) out += category_name(*r.category);
    out += '\n';
  }
  return out;
}

inline std::vector<PairReport> reports_from_csv(const std::vector<std::string>& lines) {
  std::vector<PairReport> out;
  if (lines.empty()) throw ParseError("missing header", 1);
  const auto header = detail::split_csv_line(lines[0]);
  std::vector<std::string> expected = {"pair_id"};
  for (const auto& c : report_metric_columns()) expected.push_back(c);
  expected.push_back("category");
  if (header != expected) throw ParseError("unexpected report header", 1);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = detail::split_csv_line(lines[n]);
    if (f.size() != expected.size()) throw ParseError("wrong number of fields", n + 1);
    PairReport r;
    r.pair_id = f[0];
    if (r.pair_id.empty()) throw ParseError("empty pair_id", n + 1);
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
      if (f[k].empty()) continue;
      const auto v = parse_score(f[k]);
      if (!v) throw ParseError("bad number '" + f[k] + "'", n + 1);
      r.scores[expected[k]] = *v;
    }
    if (!f.back().empty()) {
      r.category = parse_category(f.back());
      if (!r.category) throw ParseError("bad category '" + f.back() + "'", n + 1);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_report_csv(const std::vector<PairReport>& reports,
                             const std::filesystem::path& path) {
  detail::write_text(path, reports_to_csv(reports));
}

inline std::vector<PairReport> read_report_csv(const std::filesystem::path& path) {
  return reports_from_csv(detail::read_lines(path));
}

namespace detail {

inline std::string json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (std::isnan(v)) return "null";
  return format_score(v);
}

}  // namespace detail

// JSON array of report objects. Fixed columns appear in order (null when
// absent), followed by any further scores in name order, then category.
inline std::string reports_to_json(const std::vector<PairReport>& reports) {
  std::string out = "[";
  for (std::size_t n = 0; n < reports.size(); ++n) {
    const auto& r = reports[n];
    out += n == 0 ? "\n  {" : ",\n  {";
    out += "\"pair_id\": " + nlohmann::json(r.pair_id).dump();
    const auto& cols = report_metric_columns();
    for (const auto& c : cols) {
      out += ", " + nlohmann::json(c).dump() + ": ";
      auto it = r.scores.find(c);
      out += it == r.scores.end() ? "null" : detail::json_number(it->second);
    }
    for (const auto& [name, v] : r.scores) {
      if (std::find(cols.begin(), cols.end(), name) != cols.end()) continue;
      out += ", " + nlohmann::json(name).dump() + ": " + detail::json_number(v);
    }
    out += ", \"category\": ";
    out += r.category ? "\"" + category_name(*r.category) + "\"" : "null";
    out += "}";
  }
  out += reports.empty() ? "]\n" : "\n]\n";
  return out;
}

inline std::vector<PairReport> reports_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  if (!doc.is_array()) throw ParseError("report JSON must be an array", 1);
  std::vector<PairReport> out;
  for (const auto& obj : doc) {
    PairReport r;
    r.pair_id = obj.at("pair_id").get<std::string>();
    for (const auto& [key, value] : obj.items()) {
      if (key == "pair_id" || key == "category" || value.is_null()) continue;
      if (value.is_string()) {
        const auto v = parse_score(value.get<std::string>());
        if (!v) throw ParseError("bad number for '" + key + "'", 1);
        r.scores[key] = *v;
      } else {
        r.scores[key] = value.get<double>();
      }
    }
    if (obj.contains("category") && !obj["category"].is_null()) {
      r.category = parse_category(obj["category"].get<std::string>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Reads external per-pair scores (e.g. LPIPS/DISTS from third-party tools)
// from a `pair_id,metric,score` CSV. Fragments are grouped by pair_id in
// first-appearance order.
inline std::vector<PairReport> ingest_scores(const std::filesystem::path& csv_path) {
  const auto lines = detail::read_lines(csv_path);
  if (lines.empty()) throw ParseError("missing header", 1);
  if (lines[0] != "pair_id,metric,score") throw ParseError("expected header pair_id,metric,score", 1);
  std::vector<PairReport> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = detail::split_csv_line(lines[n]);
    if (f.size() != 3) throw ParseError("expected 3 fields", n + 1);
    if (f[0].empty()) throw ParseError("empty pair_id", n + 1);
    if (f[1].empty()) throw ParseError("empty metric name", n + 1);
    const auto v = parse_score(f[2]);
    if (!v) throw ParseError("bad score '" + f[2] + "'", n + 1);
    auto [it, inserted] = index.try_emplace(f[0], out.size());
    if (inserted) out.push_back(PairReport{f[0], {}, std::nullopt});
    auto& scores = out[it->second].scores;
    if (!scores.emplace(f[1], *v).second) {
      throw ConflictError("line " + std::to_string(n + 1) + ": duplicate score for (" + f[0] +
                          ", " + f[1] + ")");
    }
  }
  return out;
}

// Merges fragments into reports keyed by pair_id. Fragments whose pair_id is
// not present are appended. A metric present on both sides is a conflict.
inline void merge_scores(std::vector<PairReport>& reports,
                         const std::vector<PairReport>& fragments) {
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < reports.size(); ++k) index.emplace(reports[k].pair_id, k);
  for (const auto& frag : fragments) {
    auto it = index.find(frag.pair_id);
    if (it == index.end()) {
      index.emplace(frag.pair_id, reports.size());
      reports.push_back(frag);
      continue;
    }
    auto& scores = reports[it->second].scores;
    for (const auto& [metric, v] : frag.scores) {
      if (!scores.emplace(metric, v).second) {
        throw ConflictError("score '" + metric + "' for pair '" + frag.pair_id +
                            "' already present");
      }
    }
  }
}

}  // namespace papis
