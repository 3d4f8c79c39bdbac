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

// papis: command-line front end for the PaPIS library.
//
// Exit codes: 0 success, 2 invalid arguments, 3 I/O or format failure,
// 4 image dimension mismatch. Failures also print a one-line JSON object
// {"error": kind, "message": text, "exit_code": n} on stderr.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "papis/papis.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitIo = 3;
constexpr int kExitDimension = 4;

int exit_code_for(const papis::Error& e) {
  if (dynamic_cast<const papis::DimensionError*>(&e)) return kExitDimension;
  if (dynamic_cast<const papis::ArgumentError*>(&e)) return kExitArgument;
  return kExitIo;
}

void print_error(const std::string& kind, const std::string& message, int code) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << '\n';
}

[[noreturn]] void flag_error(const std::string& flag, const std::string& what) {
  throw papis::ArgumentError(flag + ": " + what);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw papis::IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw papis::IoError("write failed for '" + path.string() + "'");
}

// Options shared by every subcommand. Values left unset fall back to the
// --config file, then to built-in defaults.
struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out = ".";
  std::optional<std::string> extractor;
  std::optional<double> lambda;
  std::optional<std::string> convention;
  std::optional<std::string> weight_mode;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> epsilon;
  std::vector<double> sigmas;
};

struct RunConfig {
  papis::MetricConfig metric;
  std::string extractor = "filterbank";
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  fs::path out = ".";
  papis::TissueFilter tissue;
};

papis::ScoreConvention parse_convention(const std::string& s, const std::string& where) {
  if (s == "similarity") return papis::ScoreConvention::kSimilarity;
  if (s == "literal") return papis::ScoreConvention::kLiteral;
  flag_error(where, "expected 'similarity' or 'literal', got '" + s + "'");
}

papis::WeightMode parse_weight_mode(const std::string& s, const std::string& where) {
  if (s == "uniform") return papis::WeightMode::kUniform;
  if (s == "seeded-random") return papis::WeightMode::kSeededRandom;
  flag_error(where, "expected 'uniform' or 'seeded-random', got '" + s + "'");
}

void check_extractor(const std::string& s, const std::string& where) {
  if (s == "filterbank") return;
  if (s.rfind("fts1:", 0) == 0 && s.size() > 5) return;
  flag_error(where, "expected 'filterbank' or 'fts1:<path>', got '" + s + "'");
}

template <typename T>
T config_value(const ordered_json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    flag_error(std::string("config key '") + key + "'", "wrong type");
  }
}

void check_metric_ranges(const RunConfig& rc, const char* lambda_flag, const char* c_flag,
                         const char* eps_flag, const char* sigma_flag) {
  const auto& m = rc.metric;
  if (!(m.lambda >= 0.0) || !std::isfinite(m.lambda)) flag_error(lambda_flag, "must be >= 0");
  if (!(m.c1 > 0.0) || !std::isfinite(m.c1)) flag_error(std::string(c_flag) + "1", "must be > 0");
  if (!(m.c2 > 0.0) || !std::isfinite(m.c2)) flag_error(std::string(c_flag) + "2", "must be > 0");
  if (!(m.epsilon > 0.0 && m.epsilon < 1.0)) flag_error(eps_flag, "must lie in (0, 1)");
  if (m.sigmas.empty()) flag_error(sigma_flag, "needs at least one value");
  for (double s : m.sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) flag_error(sigma_flag, "values must be > 0");
  }
}

RunConfig resolve_config(const GlobalFlags& g) {
  RunConfig rc;
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw papis::IoError("cannot open config '" + g.config_path + "'");
    ordered_json j;
    try {
      j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw papis::FormatError("config '" + g.config_path + "': " + e.what());
    }
    if (!j.is_object()) throw papis::FormatError("config must be a JSON object");
    if (j.contains("lambda")) rc.metric.lambda = config_value<double>(j, "lambda");
    if (j.contains("c1")) rc.metric.c1 = config_value<double>(j, "c1");
    if (j.contains("c2")) rc.metric.c2 = config_value<double>(j, "c2");
    if (j.contains("epsilon")) rc.metric.epsilon = config_value<double>(j, "epsilon");
    if (j.contains("sigmas")) rc.metric.sigmas = config_value<std::vector<double>>(j, "sigmas");
    if (j.contains("seed")) rc.seed = config_value<std::uint64_t>(j, "seed");
    if (j.contains("threads")) {
      const auto t = config_value<long long>(j, "threads");
      if (t < 1) flag_error("config key 'threads'", "must be >= 1");
      rc.threads = static_cast<std::size_t>(t);
    }
    if (j.contains("extractor")) {
      rc.extractor = config_value<std::string>(j, "extractor");
      check_extractor(rc.extractor, "config key 'extractor'");
    }
    if (j.contains("convention")) {
      rc.metric.convention =
          parse_convention(config_value<std::string>(j, "convention"), "config key 'convention'");
    }
    if (j.contains("weight_mode")) {
      rc.metric.weight_mode = parse_weight_mode(config_value<std::string>(j, "weight_mode"),
                                                "config key 'weight_mode'");
    }
    if (j.contains("tissue")) {
      const auto& t = j["tissue"];
      if (t.contains("luminance_max")) rc.tissue.luminance_max = config_value<double>(t, "luminance_max");
      if (t.contains("min_foreground_fraction")) {
        rc.tissue.min_foreground_fraction = config_value<double>(t, "min_foreground_fraction");
      }
    }
    check_metric_ranges(rc, "config key 'lambda'", "config key 'c", "config key 'epsilon'",
                        "config key 'sigmas'");
  }
  if (g.lambda) rc.metric.lambda = *g.lambda;
  if (g.c1) rc.metric.c1 = *g.c1;
  if (g.c2) rc.metric.c2 = *g.c2;
  if (g.epsilon) rc.metric.epsilon = *g.epsilon;
  if (!g.sigmas.empty()) rc.metric.sigmas = g.sigmas;
  if (g.seed) rc.seed = *g.seed;
  if (g.threads) {
    if (*g.threads < 1) flag_error("--threads", "must be >= 1");
    rc.threads = static_cast<std::size_t>(*g.threads);
  }
  if (g.extractor) {
    check_extractor(*g.extractor, "--extractor");
    rc.extractor = *g.extractor;
  }
  if (g.convention) rc.metric.convention = parse_convention(*g.convention, "--convention");
  if (g.weight_mode) rc.metric.weight_mode = parse_weight_mode(*g.weight_mode, "--weight-mode");
  rc.metric.seed = rc.seed;
  rc.out = g.out;
  check_metric_ranges(rc, "--lambda", "--c", "--epsilon", "--sigmas");
  return rc;
}

ordered_json config_json(const RunConfig& rc) {
  ordered_json j;
  j["seed"] = rc.seed;
  j["extractor"] = rc.extractor;
  j["lambda"] = rc.metric.lambda;
  j["c1"] = rc.metric.c1;
  j["c2"] = rc.metric.c2;
  j["sigmas"] = rc.metric.sigmas;
  j["epsilon"] = rc.metric.epsilon;
  j["weight_mode"] = papis::to_string(rc.metric.weight_mode);
  j["convention"] = papis::to_string(rc.metric.convention);
  return j;
}

// `fts1:<dir>` looks up <dir>/<image stem>.fts1; `fts1:<file>` uses that file
// for every image.
papis::ExtractorSpec extractor_for(const RunConfig& rc, const fs::path& image) {
  if (rc.extractor == "filterbank") return papis::FilterBankSpec::standard();
  const fs::path target = rc.extractor.substr(5);
  if (fs::is_directory(target)) {
    return papis::ExternalFileSpec{target / (image.stem().string() + ".fts1")};
  }
  return papis::ExternalFileSpec{target};
}

// Metrics a pair of this size supports, in report order.
std::vector<papis::Metric> metrics_for_size(std::size_t h, std::size_t w,
                                            const std::vector<papis::Metric>& wanted) {
  std::vector<papis::Metric> out;
  for (papis::Metric m : wanted) {
    if (std::min(h, w) >= papis::metric_min_size(m)) out.push_back(m);
  }
  return out;
}

papis::PairReport score_pair(const std::string& pair_id, const fs::path& path_a,
                             const fs::path& path_b, const RunConfig& rc,
                             const std::vector<papis::Metric>& wanted) {
  const papis::ImagePatch a = papis::load_image(path_a);
  const papis::ImagePatch b = papis::load_image(path_b);
  papis::require_same_shape(a, b);
  papis::PairReport report;
  report.pair_id = pair_id;
  const auto ext_a = extractor_for(rc, path_a);
  const auto ext_b = extractor_for(rc, path_b);
  for (papis::Metric m : metrics_for_size(a.height(), a.width(), wanted)) {
    report.scores[papis::metric_name(m)] = papis::compute_metric(m, a, b, ext_a, ext_b, rc.metric);
  }
  return report;
}

std::vector<papis::Metric> parse_metric_list(const std::vector<std::string>& names,
                                             const std::string& flag) {
  if (names.empty()) return {papis::kAllMetrics.begin(), papis::kAllMetrics.end()};
  std::vector<papis::Metric> out;
  for (const auto& n : names) {
    try {
      const papis::Metric m = papis::parse_metric(n);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    } catch (const papis::ArgumentError& e) {
      flag_error(flag, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- compare

struct CompareFlags {
  std::string a, b;
  std::vector<std::string> metrics;
  bool write = false;
};

int run_compare(const GlobalFlags& g, const CompareFlags& f) {
  const RunConfig rc = resolve_config(g);
  const auto wanted = parse_metric_list(f.metrics, "--metric");
  const papis::PairReport report =
      score_pair(fs::path(f.a).stem().string(), f.a, f.b, rc, wanted);
  const std::string json = papis::reports_to_json({report});
  std::cout << json;
  if (f.write) {
    fs::create_directories(rc.out);
    write_file(rc.out / "report.json", json);
    write_file(rc.out / "report.csv", papis::reports_to_csv({report}));
    ordered_json run;
    run["command"] = "compare";
    run["config"] = config_json(rc);
    write_file(rc.out / "run.json", run.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- batch

struct BatchFlags {
  std::string input;
  std::string ingest;
  std::string categorize;
  std::vector<double> thresholds;
  std::vector<std::string> modalities = {"a", "b"};
  std::vector<std::string> metrics;
  std::string format = "csv";
};

struct PairJob {
  std::string pair_id;
  fs::path a, b;
};

struct PairFailure {
  std::string pair_id;
  std::string message;
};

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".tif" || ext == ".tiff";
}

std::map<std::string, fs::path> images_by_stem(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) out[e.path().stem().string()] = e.path();
  }
  return out;
}

void collect_jobs(const BatchFlags& f, std::vector<PairJob>& jobs,
                  std::vector<PairFailure>& failures) {
  fs::path input = f.input;
  if (!fs::exists(input)) throw papis::IoError("batch input '" + input.string() + "' not found");
  fs::path manifest_path;
  if (fs::is_regular_file(input)) {
    manifest_path = input;
  } else if (fs::is_regular_file(input / "manifest.json")) {
    manifest_path = input / "manifest.json";
  }
  if (!manifest_path.empty()) {
    const papis::PatchManifest m = papis::read_manifest(manifest_path);
    const fs::path base = manifest_path.parent_path();
    for (const auto& e : m.entries) {
      PairJob job{e.patch_id, base / m.modality_a / (e.patch_id + ".png"),
                  base / m.modality_b / (e.patch_id + ".png")};
      if (!fs::exists(job.a) || !fs::exists(job.b)) {
        failures.push_back({e.patch_id, "missing counterpart file"});
        continue;
      }
      jobs.push_back(std::move(job));
    }
  } else {
    if (f.modalities.size() != 2) flag_error("--modalities", "expects two names");
    const auto left = images_by_stem(input / f.modalities[0]);
    const auto right = images_by_stem(input / f.modalities[1]);
    std::set<std::string> stems;
    for (const auto& [s, p] : left) stems.insert(s);
    for (const auto& [s, p] : right) stems.insert(s);
    for (const auto& s : stems) {
      auto l = left.find(s);
      auto r = right.find(s);
      if (l == left.end() || r == right.end()) {
        failures.push_back({s, std::string("missing counterpart in '") +
                                   (l == left.end() ? f.modalities[0] : f.modalities[1]) + "'"});
        continue;
      }
      jobs.push_back({s, l->second, r->second});
    }
  }
  std::sort(jobs.begin(), jobs.end(),
            [](const PairJob& x, const PairJob& y) { return x.pair_id < y.pair_id; });
  std::sort(failures.begin(), failures.end(),
            [](const PairFailure& x, const PairFailure& y) { return x.pair_id < y.pair_id; });
}

std::string parse_categorize(const std::string& spec) {
  const std::string prefix = "vs=";
  if (spec.rfind(prefix, 0) != 0 || spec.size() == prefix.size()) {
    flag_error("--categorize", "expected vs=<metric>, got '" + spec + "'");
  }
  return spec.substr(prefix.size());
}

void apply_categories(std::vector<papis::PairReport>& reports, const std::string& other,
                      const std::vector<double>& thresholds) {
  std::vector<std::size_t> idx;
  std::vector<papis::ScorePoint> points;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& s = reports[k].scores;
    auto p = s.find("papis");
    auto o = s.find(other);
    if (p == s.end() || o == s.end() || !std::isfinite(p->second) || !std::isfinite(o->second)) {
      continue;
    }
    idx.push_back(k);
    points.push_back({p->second, o->second});
  }
  if (points.empty()) return;
  papis::Thresholds t;
  if (thresholds.size() == 2) {
    t = {thresholds[0], thresholds[1]};
  } else if (thresholds.empty()) {
    if (points.size() < 2) {
      flag_error("--categorize", "median thresholds need at least 2 scored pairs; pass --thresholds");
    }
    t = papis::default_thresholds(points);
  } else {
    flag_error("--thresholds", "expects two values: papis,other");
  }
  const auto labels = papis::categorize(points, t);
  for (std::size_t k = 0; k < idx.size(); ++k) reports[idx[k]].category = labels[k];
}

int run_batch(const GlobalFlags& g, const BatchFlags& f, bool out_given) {
  const RunConfig rc = resolve_config(g);
  const auto wanted = parse_metric_list(f.metrics, "--metric");
  std::string vs;
  if (!f.categorize.empty()) vs = parse_categorize(f.categorize);
  if (f.format != "csv" && f.format != "json") flag_error("--format", "expected csv or json");

  std::vector<PairJob> jobs;
  std::vector<PairFailure> failures;
  collect_jobs(f, jobs, failures);

  std::vector<std::optional<papis::PairReport>> slots(jobs.size());
  std::vector<std::string> errors(jobs.size());
  papis::parallel_for(jobs.size(), rc.threads, [&](std::size_t k) {
    try {
      slots[k] = score_pair(jobs[k].pair_id, jobs[k].a, jobs[k].b, rc, wanted);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  std::vector<papis::PairReport> reports;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (slots[k]) {
      reports.push_back(std::move(*slots[k]));
    } else {
      failures.push_back({jobs[k].pair_id, errors[k]});
    }
  }
  std::sort(failures.begin(), failures.end(),
            [](const PairFailure& x, const PairFailure& y) { return x.pair_id < y.pair_id; });

  if (!f.ingest.empty()) {
    papis::merge_scores(reports, papis::ingest_scores(f.ingest));
    std::sort(reports.begin(), reports.end(),
              [](const auto& x, const auto& y) { return x.pair_id < y.pair_id; });
  }
  if (!vs.empty()) apply_categories(reports, vs, f.thresholds);

  const std::string csv = papis::reports_to_csv(reports);
  const std::string json = papis::reports_to_json(reports);
  ordered_json err = ordered_json::array();
  for (const auto& fail : failures) err.push_back({{"pair_id", fail.pair_id}, {"message", fail.message}});

  if (out_given) {
    fs::create_directories(rc.out);
    write_file(rc.out / "report.csv", csv);
    write_file(rc.out / "report.json", json);
    ordered_json run;
    run["command"] = "batch";
    run["config"] = config_json(rc);
    run["pairs"] = reports.size();
    run["errors"] = err;
    write_file(rc.out / "run.json", run.dump(2) + "\n");
  } else {
    std::cout << (f.format == "csv" ? csv : json);
  }
  if (!failures.empty()) {
    ordered_json j;
    j["error"] = "pairs";
    j["message"] = std::to_string(failures.size()) + " pair(s) failed";
    j["exit_code"] = kExitIo;
    j["errors"] = err;
    std::cerr << j.dump() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- heatmap

struct HeatmapFlags {
  std::string a, b;
  std::size_t patch = 1024;
  std::vector<std::string> metrics;
  std::size_t cell_scale = 32;
  std::optional<double> luminance_max;
  std::optional<double> min_foreground;
};

papis::TissueFilter tissue_from(const RunConfig& rc, std::optional<double> lum,
                                std::optional<double> frac) {
  papis::TissueFilter t = rc.tissue;
  if (lum) t.luminance_max = *lum;
  if (frac) t.min_foreground_fraction = *frac;
  if (!(t.luminance_max > 0.0 && t.luminance_max < 1.0)) flag_error("--luminance-max", "must lie in (0, 1)");
  if (!(t.min_foreground_fraction >= 0.0 && t.min_foreground_fraction <= 1.0)) {
    flag_error("--min-foreground", "must lie in [0, 1]");
  }
  return t;
}

int run_heatmap(const GlobalFlags& g, const HeatmapFlags& f) {
  const RunConfig rc = resolve_config(g);
  if (f.patch == 0) flag_error("--patch", "must be >= 1");
  if (f.cell_scale == 0) flag_error("--cell-scale", "must be >= 1");
  auto wanted = f.metrics.empty() ? std::vector<papis::Metric>{papis::Metric::kPapis}
                                  : parse_metric_list(f.metrics, "--metric");
  for (papis::Metric m : wanted) {
    if (f.patch < papis::metric_min_size(m)) {
      flag_error("--patch", papis::metric_name(m) + " needs at least " +
                                std::to_string(papis::metric_min_size(m)) + " pixels");
    }
    if (m == papis::Metric::kPapis && rc.extractor != "filterbank") {
      flag_error("--extractor", "heatmap supports only the filterbank extractor");
    }
  }
  papis::HeatmapOptions options;
  options.filter = tissue_from(rc, f.luminance_max, f.min_foreground);
  options.threads = rc.threads;
  const papis::ImagePatch a = papis::load_image(f.a);
  const papis::ImagePatch b = papis::load_image(f.b);
  papis::require_same_shape(a, b);
  fs::create_directories(rc.out);
  std::vector<papis::HeatmapGrid> grids;
  ordered_json summary;
  summary["command"] = "heatmap";
  summary["config"] = config_json(rc);
  summary["grids"] = ordered_json::array();
  for (papis::Metric m : wanted) {
    grids.push_back(papis::heatmap(a, b, f.patch, m, rc.metric, options));
    const fs::path png = rc.out / ("heatmap_" + papis::metric_name(m) + ".png");
    papis::render_heatmap(grids.back(), png, f.cell_scale);
    auto gj = papis::heatmap_to_json(grids.back());
    gj["png"] = png.filename().string();
    summary["grids"].push_back(std::move(gj));
  }
  if (grids.size() > 1) {
    papis::render_heatmaps_side_by_side(grids, rc.out / "heatmap_side_by_side.png", f.cell_scale);
  }
  write_file(rc.out / "heatmap.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- decompose

struct InspectFlags {
  std::string image;
  std::optional<std::size_t> layer;
  std::optional<std::size_t> channel;
  std::string save_fts;
};

std::pair<double, double> value_range(const papis::FeatureMap& m) {
  const auto [lo, hi] = std::minmax_element(m.values().begin(), m.values().end());
  return {*lo, *hi};
}

int run_decompose(const GlobalFlags& g, const InspectFlags& f) {
  const RunConfig rc = resolve_config(g);
  const papis::ImagePatch img = papis::load_image(f.image);
  papis::FeatureMap source;
  std::string source_desc = "luma";
  if (f.layer || f.channel) {
    const std::size_t layer = f.layer.value_or(0), channel = f.channel.value_or(0);
    const papis::FeatureStack stack =
        papis::extract_features(img, extractor_for(rc, f.image));
    if (layer >= stack.layers.size()) flag_error("--layer", "out of range");
    if (channel >= stack.layers[layer].size()) flag_error("--channel", "out of range");
    source = stack.layers[layer][channel];
    source_desc = "layer " + std::to_string(layer) + " channel " + std::to_string(channel);
  } else {
    source = papis::to_grayscale(img);
  }
  const papis::RetinexPair pair =
      papis::msr_decompose(source, rc.metric.sigmas, rc.metric.epsilon);
  fs::create_directories(rc.out);
  ordered_json side;
  side["command"] = "decompose";
  side["image"] = fs::path(f.image).filename().string();
  side["source"] = source_desc;
  side["seed"] = rc.seed;
  side["sigmas"] = pair.sigmas;
  side["epsilon"] = pair.epsilon;
  side["encoding"] = "value = lo + code / 65535 * (hi - lo)";
  side["maps"] = ordered_json::array();
  for (std::size_t s = 0; s < pair.scale_count(); ++s) {
    for (const auto& [kind, map] :
         {std::pair<const char*, const papis::FeatureMap*>{"L", &pair.illuminations[s]},
          std::pair<const char*, const papis::FeatureMap*>{"R", &pair.reflectances[s]}}) {
      const auto [lo, hi] = value_range(*map);
      const std::string name = std::string(kind) + "_s" + std::to_string(s) + ".png";
      papis::save_map_png16(*map, rc.out / name, lo, hi);
      side["maps"].push_back(
          {{"file", name}, {"kind", kind}, {"sigma", pair.sigmas[s]}, {"lo", lo}, {"hi", hi}});
    }
  }
  write_file(rc.out / "decompose.json", side.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- features

int run_features(const GlobalFlags& g, const InspectFlags& f) {
  const RunConfig rc = resolve_config(g);
  const papis::ImagePatch img = papis::load_image(f.image);
  const papis::FeatureStack stack = papis::extract_features(img, extractor_for(rc, f.image));
  fs::create_directories(rc.out);
  ordered_json side;
  side["command"] = "features";
  side["image"] = fs::path(f.image).filename().string();
  side["extractor"] = stack.source_tag;
  side["seed"] = rc.seed;
  side["encoding"] = "value = code / 65535";
  side["layers"] = ordered_json::array();
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const std::string name = "layer_" + std::to_string(i) + "_mean.png";
    const papis::FeatureMap mean = papis::channel_mean(stack.layers[i]);
    papis::save_map_png16(mean, rc.out / name, 0.0, 1.0);
    side["layers"].push_back({{"file", name},
                              {"channels", stack.layers[i].size()},
                              {"height", mean.height()},
                              {"width", mean.width()}});
  }
  const papis::FeatureMap rec = papis::reconstruct(stack, img.height(), img.width());
  papis::save_map_png16(rec, rc.out / "reconstruction.png", 0.0, 1.0);
  side["reconstruction"] = "reconstruction.png";
  if (!f.save_fts.empty()) {
    papis::fts1::save(stack, f.save_fts);
    side["fts1"] = fs::path(f.save_fts).filename().string();
  }
  write_file(rc.out / "features.json", side.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- dataset

struct DatasetFlags {
  std::string a, b;
  std::string mode = "grid";
  std::size_t patch = 1024;
  std::size_t count = 206;
  std::size_t output_size = 0;
  bool augment = false;
  std::optional<double> luminance_max;
  std::optional<double> min_foreground;
  std::vector<std::string> modalities = {"a", "b"};
};

int run_dataset(const GlobalFlags& g, const DatasetFlags& f) {
  const RunConfig rc = resolve_config(g);
  papis::DatasetParams p;
  if (f.mode == "grid") {
    p.mode = papis::SamplingMode::kGrid;
  } else if (f.mode == "random") {
    p.mode = papis::SamplingMode::kRandom;
  } else {
    flag_error("--mode", "expected grid or random");
  }
  if (f.patch == 0) flag_error("--patch", "must be >= 1");
  if (p.mode == papis::SamplingMode::kRandom && f.count == 0) flag_error("--count", "must be >= 1");
  if (f.modalities.size() != 2) flag_error("--modalities", "expects two names");
  p.patch_size = f.patch;
  p.count = f.count;
  p.output_size = f.output_size;
  p.augment = f.augment;
  p.seed = rc.seed;
  p.filter = tissue_from(rc, f.luminance_max, f.min_foreground);
  p.modality_a = f.modalities[0];
  p.modality_b = f.modalities[1];
  p.threads = rc.threads;
  const papis::ImagePatch a = papis::load_image(f.a);
  const papis::ImagePatch b = papis::load_image(f.b);
  papis::require_same_shape(a, b);
  if (p.mode == papis::SamplingMode::kRandom &&
      (a.width() < p.patch_size || a.height() < p.patch_size)) {
    flag_error("--patch", "larger than the input images");
  }
  const papis::PatchManifest m =
      papis::build_dataset(a, b, p, rc.out, fs::path(f.a).filename().string(),
                           fs::path(f.b).filename().string());
  ordered_json j;
  j["manifest"] = (rc.out / "manifest.json").string();
  j["patches"] = m.entries.size();
  j["seed"] = rc.seed;
  std::cout << j.dump() << '\n';
  return kExitOk;
}

void add_global_flags(CLI::App& app, GlobalFlags& g) {
  app.add_option("--config", g.config_path, "JSON config file (defaults < config < flags)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--threads", g.threads, "Worker threads (>= 1)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--extractor", g.extractor, "filterbank | fts1:<file-or-dir>");
  app.add_option("--lambda", g.lambda, "Weight of the low-frequency term (>= 0)");
  app.add_option("--convention", g.convention, "similarity | literal");
  app.add_option("--weight-mode", g.weight_mode, "uniform | seeded-random");
  app.add_option("--c1", g.c1, "Mean stability constant (> 0)");
  app.add_option("--c2", g.c2, "Deviation stability constant (> 0)");
  app.add_option("--epsilon", g.epsilon, "Retinex log floor in (0, 1)");
  app.add_option("--sigmas", g.sigmas, "Retinex scales in pixels")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PaPIS: pathology-aware perceptual image similarity"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags global;
  add_global_flags(app, global);

  CompareFlags compare;
  auto* cmd_compare = app.add_subcommand("compare", "Score one image pair");
  cmd_compare->add_option("image_a", compare.a, "Reference image")->required();
  cmd_compare->add_option("image_b", compare.b, "Test image")->required();
  cmd_compare->add_option("--metric", compare.metrics, "Restrict to these metrics");
  cmd_compare->add_flag("--write", compare.write, "Also write report files under --out");

  BatchFlags batch;
  auto* cmd_batch = app.add_subcommand("batch", "Score every pair of a dataset");
  cmd_batch->add_option("input", batch.input, "manifest.json or dataset directory")->required();
  cmd_batch->add_option("--ingest", batch.ingest, "External pair_id,metric,score CSV")
      ->check(CLI::ExistingFile);
  cmd_batch->add_option("--categorize", batch.categorize, "vs=<metric>: add AH/AL/PD/TD labels");
  cmd_batch->add_option("--thresholds", batch.thresholds, "papis,other cut points")->delimiter(',');
  cmd_batch->add_option("--modalities", batch.modalities, "Subdirectory names")->delimiter(',');
  cmd_batch->add_option("--metric", batch.metrics, "Restrict to these metrics");
  cmd_batch->add_option("--format", batch.format, "stdout format: csv | json");

  HeatmapFlags hm;
  auto* cmd_heatmap = app.add_subcommand("heatmap", "Patch-wise similarity heatmaps");
  cmd_heatmap->add_option("image_a", hm.a)->required();
  cmd_heatmap->add_option("image_b", hm.b)->required();
  cmd_heatmap->add_option("--patch", hm.patch, "Patch side in pixels");
  cmd_heatmap->add_option("--metric", hm.metrics, "Metric(s) to map (repeatable)");
  cmd_heatmap->add_option("--cell-scale", hm.cell_scale, "Pixels per heatmap cell");
  cmd_heatmap->add_option("--luminance-max", hm.luminance_max, "Tissue luminance cutoff");
  cmd_heatmap->add_option("--min-foreground", hm.min_foreground, "Tissue fraction cutoff");

  InspectFlags dec;
  auto* cmd_decompose = app.add_subcommand("decompose", "Write Retinex illumination/reflectance maps");
  cmd_decompose->add_option("image", dec.image)->required();
  cmd_decompose->add_option("--layer", dec.layer, "Decompose this feature layer");
  cmd_decompose->add_option("--channel", dec.channel, "Channel within --layer");

  InspectFlags feat;
  auto* cmd_features = app.add_subcommand("features", "Write feature layer means and the reconstruction");
  cmd_features->add_option("image", feat.image)->required();
  cmd_features->add_option("--save-fts", feat.save_fts, "Also save the stack as FTS1");

  DatasetFlags ds;
  auto* cmd_dataset = app.add_subcommand("dataset", "Cut a WSI pair into aligned patches");
  cmd_dataset->add_option("image_a", ds.a)->required();
  cmd_dataset->add_option("image_b", ds.b)->required();
  cmd_dataset->add_option("--mode", ds.mode, "grid | random");
  cmd_dataset->add_option("--patch", ds.patch, "Patch side in pixels");
  cmd_dataset->add_option("--count", ds.count, "Random crops to draw");
  cmd_dataset->add_option("--output-size", ds.output_size, "Resize patches (0 keeps size)");
  cmd_dataset->add_flag("--augment", ds.augment, "Random flip per patch");
  cmd_dataset->add_option("--luminance-max", ds.luminance_max, "Tissue luminance cutoff");
  cmd_dataset->add_option("--min-foreground", ds.min_foreground, "Tissue fraction cutoff");
  cmd_dataset->add_option("--modalities", ds.modalities, "Output subdirectory names")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("argument", e.what(), kExitArgument);
    return kExitArgument;
  }

  try {
    if (*cmd_compare) return run_compare(global, compare);
    if (*cmd_batch) return run_batch(global, batch, app.get_option("--out")->count() > 0);
    if (*cmd_heatmap) return run_heatmap(global, hm);
    if (*cmd_decompose) return run_decompose(global, dec);
    if (*cmd_features) return run_features(global, feat);
    if (*cmd_dataset) return run_dataset(global, ds);
  } catch (const papis::Error& e) {
    const int code = exit_code_for(e);
    print_error(e.kind(), e.what(), code);
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error("io", e.what(), kExitIo);
    return kExitIo;
  } catch (const std::exception& e) {
    print_error("internal", e.what(), kExitIo);
    return kExitIo;
  }
  return kExitArgument;
}
