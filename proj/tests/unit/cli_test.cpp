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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "papis/papis.hpp"
#include "support/cli.hpp"
#include "support/synthetic.hpp"
#include "support/tmpdir.hpp"

namespace papis {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::read_file;
using testing::run_cli;

// Images saved at 16 bits so reloading is close to the in-memory fixture.
void save16(const ImagePatch& img, const fs::path& p) {
  fs::create_directories(p.parent_path());
  save_png(img, p, 16);
}

ImagePatch affine(const ImagePatch& img, float gain, float offset) {
  ImagePatch out = img;
  for (std::size_t c = 0; c < out.channels(); ++c) {
    for (float& v : out.channel(c).values()) v = gain * v + offset;
  }
  return out;
}

// Four pairs under {a,b}/: one per quadrant of the PaPIS-vs-SSIM plane.
fs::path quadrant_dataset(const fs::path& dir) {
  const std::size_t n = 256;
  const ImagePatch t = testing::tissue_image(n, n, 70);
  const ImagePatch flat = testing::low_texture_image(n, n, 72);
  save16(t, dir / "a" / "p_ah.png");
  save16(t, dir / "b" / "p_ah.png");
  save16(t, dir / "a" / "p_al.png");
  save16(testing::add_gaussian_noise(t, 0.3, 71), dir / "b" / "p_al.png");
  save16(t, dir / "a" / "p_pd.png");
  save16(affine(t, 0.5f, 0.1f), dir / "b" / "p_pd.png");
  save16(flat, dir / "a" / "p_td.png");
  save16(testing::blur_image(flat, 2.0), dir / "b" / "p_td.png");
  return dir;
}

json last_json_line(const std::string& text) {
  const auto end = text.find_last_not_of('\n');
  const auto start = text.rfind('\n', end);
  return json::parse(text.substr(start == std::string::npos ? 0 : start + 1));
}

TEST(CliCompare, IdentityScores) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(192, 192, 1), dir / "x.png");
  const auto r = run_cli({"compare", (dir / "x.png").string(), (dir / "x.png").string()}, dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["pair_id"], "x");
  EXPECT_EQ(j[0]["psnr"], "inf");
  EXPECT_EQ(j[0]["ssim"], 1);
  EXPECT_EQ(j[0]["ms_ssim"], 1);
  EXPECT_EQ(j[0]["papis"], 1);
}

TEST(CliCompare, MatchesLibraryValues) {
  const auto dir = testing::scratch_dir();
  const ImagePatch x = testing::tissue_image(200, 180, 2);
  save16(x, dir / "x.png");
  save16(testing::add_gaussian_noise(x, 0.05, 3), dir / "y.png");
  const auto r = run_cli({"compare", (dir / "x.png").string(), (dir / "y.png").string(), "--lambda",
                          "0.25", "--write", "--out", (dir / "out").string(), "--seed", "42"},
                         dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const ImagePatch a = load_image(dir / "x.png"), b = load_image(dir / "y.png");
  MetricConfig cfg;
  cfg.lambda = 0.25;
  cfg.seed = 42;
  PairReport want{"x", {}, std::nullopt};
  want.scores["psnr"] = psnr(a, b);
  want.scores["ssim"] = ssim(a, b);
  want.scores["ms_ssim"] = ms_ssim(a, b);
  want.scores["papis"] = papis_score(a, b, FilterBankSpec::standard(), cfg);
  EXPECT_EQ(r.out, reports_to_json({want}));
  EXPECT_EQ(read_file(dir / "out" / "report.csv"), reports_to_csv({want}));
  const json run = json::parse(read_file(dir / "out" / "run.json"));
  EXPECT_EQ(run["config"]["seed"], 42);
  EXPECT_EQ(run["config"]["lambda"], 0.25);
}

TEST(CliCompare, SmallImagesSkipMsSsim) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(64, 64, 3), dir / "x.png");
  const auto r = run_cli({"compare", (dir / "x.png").string(), (dir / "x.png").string()}, dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)[0]["ms_ssim"].is_null());
}

TEST(CliErrors, ExitCodes) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(64, 64, 1), dir / "a.png");
  save16(testing::tissue_image(64, 65, 1), dir / "b.png");
  std::ofstream(dir / "junk.png") << "not an image";
  const std::string a = (dir / "a.png").string();

  auto r = run_cli({"compare", a, (dir / "b.png").string()}, dir);
  EXPECT_EQ(r.exit_code, 4);
  json e = last_json_line(r.err);
  EXPECT_EQ(e["exit_code"], 4);
  EXPECT_EQ(e["error"], "dimension");

  r = run_cli({"compare", a, (dir / "missing.png").string()}, dir);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(last_json_line(r.err)["exit_code"], 3);
  r = run_cli({"compare", a, (dir / "junk.png").string()}, dir);
  EXPECT_EQ(r.exit_code, 3);
  r = run_cli({"compare", a}, dir);
  EXPECT_EQ(r.exit_code, 2);
  r = run_cli({"frobnicate"}, dir);
  EXPECT_EQ(r.exit_code, 2);
  r = run_cli({"compare", a, a, "--metric", "lpips"}, dir);
  EXPECT_EQ(r.exit_code, 2);
  r = run_cli({"compare", a, a, "--extractor", "deepnet"}, dir);
  EXPECT_EQ(r.exit_code, 2);
  r = run_cli({"compare", a, a, "--extractor", "fts1:" + (dir / "none.fts1").string()}, dir);
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliErrors, OutOfRangeFlagsNameTheFlag) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(64, 64, 1), dir / "a.png");
  const std::string a = (dir / "a.png").string();
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"--lambda", "-1"}, "--lambda"},
      {{"--threads", "0"}, "--threads"},
      {{"--c1", "0"}, "--c1"},
      {{"--c2", "-3"}, "--c2"},
      {{"--epsilon", "1.5"}, "--epsilon"},
      {{"--sigmas", "2,-1"}, "--sigmas"},
      {{"--convention", "sideways"}, "--convention"},
      {{"--weight-mode", "fancy"}, "--weight-mode"},
  };
  for (const auto& [flags, name] : cases) {
    std::vector<std::string> args = {"compare", a, a};
    args.insert(args.end(), flags.begin(), flags.end());
    const auto r = run_cli(args, dir);
    EXPECT_EQ(r.exit_code, 2) << name;
    EXPECT_NE(last_json_line(r.err)["message"].get<std::string>().find(name), std::string::npos)
        << r.err;
  }
  const auto r = run_cli({"heatmap", a, a, "--patch", "8", "--metric", "ssim", "--out",
                          (dir / "h").string()},
                         dir);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("--patch"), std::string::npos);
  const auto d = run_cli({"dataset", a, a, "--min-foreground", "2", "--out", (dir / "d").string()},
                         dir);
  EXPECT_EQ(d.exit_code, 2);
  EXPECT_NE(d.err.find("--min-foreground"), std::string::npos);
}

TEST(CliConfig, FlagsOverrideConfigFile) {
  const auto dir = testing::scratch_dir();
  const ImagePatch x = testing::tissue_image(64, 64, 5);
  save16(x, dir / "x.png");
  save16(testing::add_gaussian_noise(x, 0.1, 6), dir / "y.png");
  std::ofstream(dir / "cfg.json") << R"({"lambda": 3.0, "seed": 9})";
  const std::string xs = (dir / "x.png").string(), ys = (dir / "y.png").string();
  const auto base = run_cli({"compare", xs, ys, "--metric", "papis", "--lambda", "3"}, dir);
  const auto cfg = run_cli({"compare", xs, ys, "--metric", "papis", "--config",
                            (dir / "cfg.json").string()},
                           dir);
  const auto flag = run_cli({"compare", xs, ys, "--metric", "papis", "--config",
                             (dir / "cfg.json").string(), "--lambda", "0.1"},
                            dir);
  const auto plain = run_cli({"compare", xs, ys, "--metric", "papis"}, dir);
  ASSERT_EQ(cfg.exit_code, 0) << cfg.err;
  EXPECT_EQ(cfg.out, base.out);
  EXPECT_EQ(flag.out, plain.out);
  EXPECT_NE(cfg.out, plain.out);
  std::ofstream(dir / "bad.json") << R"({"lambda": -2})";
  const auto bad = run_cli({"compare", xs, ys, "--config", (dir / "bad.json").string()}, dir);
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_NE(bad.err.find("lambda"), std::string::npos);
}

TEST(CliExtractor, Fts1DirectoryPerImage) {
  const auto dir = testing::scratch_dir();
  const ImagePatch x = testing::tissue_image(64, 64, 5);
  const ImagePatch y = testing::add_gaussian_noise(x, 0.1, 6);
  save16(x, dir / "x.png");
  save16(y, dir / "y.png");
  fs::create_directories(dir / "feat");
  const auto fx = run_cli({"features", (dir / "x.png").string(), "--save-fts",
                           (dir / "feat" / "x.fts1").string(), "--out", (dir / "fx").string()},
                          dir);
  ASSERT_EQ(fx.exit_code, 0) << fx.err;
  run_cli({"features", (dir / "y.png").string(), "--save-fts", (dir / "feat" / "y.fts1").string(),
           "--out", (dir / "fy").string()},
          dir);
  const auto ext = run_cli({"compare", (dir / "x.png").string(), (dir / "y.png").string(),
                            "--metric", "papis", "--extractor", "fts1:" + (dir / "feat").string()},
                           dir);
  ASSERT_EQ(ext.exit_code, 0) << ext.err;
  const auto fb = run_cli(
      {"compare", (dir / "x.png").string(), (dir / "y.png").string(), "--metric", "papis"}, dir);
  const double a = json::parse(ext.out)[0]["papis"].get<double>();
  const double b = json::parse(fb.out)[0]["papis"].get<double>();
  EXPECT_NEAR(a, b, 1e-5);
  EXPECT_LT(a, 1.0);
}

TEST(CliBatch, EmptyDirectoryGivesHeaderOnly) {
  const auto dir = testing::scratch_dir();
  fs::create_directories(dir / "empty");
  const auto r = run_cli({"batch", (dir / "empty").string()}, dir);
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "pair_id,psnr,ssim,ms_ssim,papis,lpips,dists,category\n");
}

TEST(CliBatch, RowsMatchIndividualCompareRuns) {
  const auto dir = quadrant_dataset(testing::scratch_dir() / "data");
  const auto r = run_cli({"batch", dir.string(), "--format", "json"}, dir.parent_path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json rows = json::parse(r.out);
  ASSERT_EQ(rows.size(), 4u);
  std::vector<std::string> ids;
  for (const auto& row : rows) {
    const std::string id = row["pair_id"];
    ids.push_back(id);
    const auto single = run_cli({"compare", (dir / "a" / (id + ".png")).string(),
                                 (dir / "b" / (id + ".png")).string()},
                                dir.parent_path());
    ASSERT_EQ(single.exit_code, 0);
    EXPECT_EQ(json::parse(single.out)[0], row);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"p_ah", "p_al", "p_pd", "p_td"}));
}

TEST(CliBatch, CategorizeQuadrantFixture) {
  const auto dir = quadrant_dataset(testing::scratch_dir() / "data");
  const auto r = run_cli({"batch", dir.string(), "--metric", "ssim", "--metric", "papis",
                          "--categorize", "vs=ssim", "--thresholds", "0.97,0.95"},
                         dir.parent_path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto reports = reports_from_csv([&] {
    std::vector<std::string> lines;
    std::istringstream in(r.out);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines;
  }());
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(reports[0].category, Category::kAH);
  EXPECT_EQ(reports[1].category, Category::kAL);
  EXPECT_EQ(reports[2].category, Category::kPD);
  EXPECT_EQ(reports[3].category, Category::kTD);
  const auto bad = run_cli({"batch", dir.string(), "--categorize", "ssim"}, dir.parent_path());
  EXPECT_EQ(bad.exit_code, 2);
}

TEST(CliBatch, IngestsExternalScores) {
  const auto dir = quadrant_dataset(testing::scratch_dir() / "data");
  std::ofstream(dir.parent_path() / "ext.csv")
      << "pair_id,metric,score\np_ah,lpips,0.01\np_td,dists,0.2\np_td,lpips,0.3\n";
  const auto r = run_cli({"batch", dir.string(), "--metric", "psnr", "--ingest",
                          (dir.parent_path() / "ext.csv").string()},
                         dir.parent_path());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("p_ah,inf,,,,0.01,,\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(",0.3,0.2,\n"), std::string::npos) << r.out;
  std::ofstream(dir.parent_path() / "dup.csv") << "pair_id,metric,score\np_ah,psnr,1\n";
  const auto dup = run_cli({"batch", dir.string(), "--metric", "psnr", "--ingest",
                            (dir.parent_path() / "dup.csv").string()},
                           dir.parent_path());
  EXPECT_EQ(dup.exit_code, 3);
  EXPECT_EQ(last_json_line(dup.err)["error"], "conflict");
}

TEST(CliBatch, MissingCounterpartIsReported) {
  const auto dir = quadrant_dataset(testing::scratch_dir() / "data");
  fs::remove(dir / "b" / "p_pd.png");
  const auto out = dir.parent_path() / "out";
  const auto r = run_cli({"batch", dir.string(), "--metric", "psnr", "--out", out.string()},
                         dir.parent_path());
  EXPECT_EQ(r.exit_code, 3);
  const auto reports = read_report_csv(out / "report.csv");
  EXPECT_EQ(reports.size(), 3u);
  const json run = json::parse(read_file(out / "run.json"));
  ASSERT_EQ(run["errors"].size(), 1u);
  EXPECT_EQ(run["errors"][0]["pair_id"], "p_pd");
  EXPECT_EQ(last_json_line(r.err)["errors"][0]["pair_id"], "p_pd");
}

TEST(CliBatch, ReportBytesIndependentOfThreads) {
  const auto root = testing::scratch_dir();
  const auto dir = quadrant_dataset(root / "data");
  std::string csv, js;
  for (const char* threads : {"1", "4", "8", "1"}) {
    const auto out = root / (std::string("t") + threads + "_" + std::to_string(csv.size()));
    const auto r = run_cli({"batch", dir.string(), "--threads", threads, "--out", out.string()}, root);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::string c = read_file(out / "report.csv"), j = read_file(out / "report.json");
    if (csv.empty()) {
      csv = c;
      js = j;
    } else {
      EXPECT_EQ(c, csv) << threads;
      EXPECT_EQ(j, js) << threads;
    }
  }
}

TEST(CliBatch, ReadsDatasetManifest) {
  const auto root = testing::scratch_dir();
  const ImagePatch a = testing::tissue_image(256, 256, 8);
  save16(a, root / "wsi_a.png");
  save16(testing::add_gaussian_noise(a, 0.05, 9), root / "wsi_b.png");
  const auto ds = run_cli({"dataset", (root / "wsi_a.png").string(), (root / "wsi_b.png").string(),
                           "--patch", "128", "--out", (root / "ds").string()},
                          root);
  ASSERT_EQ(ds.exit_code, 0) << ds.err;
  const auto r = run_cli({"batch", (root / "ds" / "manifest.json").string(), "--metric", "ssim"},
                         root);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("\nr001_c001,"), std::string::npos) << r.out;
  const auto r2 = run_cli({"batch", (root / "ds").string(), "--metric", "ssim"}, root);
  EXPECT_EQ(r2.out, r.out);
}

TEST(CliHeatmap, IdenticalSlidesAndSideBySide) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(256, 384, 4), dir / "w.png");
  const auto out = dir / "hm";
  const auto r = run_cli({"heatmap", (dir / "w.png").string(), (dir / "w.png").string(), "--patch",
                          "128", "--metric", "ssim", "--metric", "papis", "--cell-scale", "4",
                          "--out", out.string(), "--seed", "5"},
                         dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const char* f : {"heatmap_ssim.png", "heatmap_ssim.json", "heatmap_papis.png",
                        "heatmap_papis.json", "heatmap_side_by_side.png",
                        "heatmap_side_by_side.json", "heatmap.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const json summary = json::parse(read_file(out / "heatmap.json"));
  EXPECT_EQ(summary["config"]["seed"], 5);
  ASSERT_EQ(summary["grids"].size(), 2u);
  for (const auto& g : summary["grids"]) {
    EXPECT_EQ(g["rows"], 2);
    EXPECT_EQ(g["cols"], 3);
    for (const auto& v : g["scores"]) EXPECT_NEAR(v.get<double>(), 1.0, 1e-9);
  }
  const ImagePatch png = load_image(out / "heatmap_papis.png");
  EXPECT_EQ(png.height(), 8u);
  EXPECT_EQ(png.width(), 12u);
  for (std::size_t c = 0; c < 3; ++c) {
    for (float v : png.channel(c).values()) EXPECT_EQ(v, png.channel(c).values()[0]);
  }
}

TEST(CliHeatmap, CorruptedQuadrantIsLower) {
  const auto dir = testing::scratch_dir();
  const testing::QuadrantWsi q = testing::quadrant_wsi(512, 9);
  save16(q.a, dir / "a.png");
  save16(q.b, dir / "b.png");
  const auto r = run_cli({"heatmap", (dir / "a.png").string(), (dir / "b.png").string(), "--patch",
                          "256", "--metric", "ssim", "--out", (dir / "hm").string()},
                         dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json g = json::parse(r.out)["grids"][0];
  const double clean = g["scores"][0], noisy = g["scores"][3];
  EXPECT_LT(noisy, clean);
}

TEST(CliDecompose, ConstantImageAndFileCount) {
  const auto dir = testing::scratch_dir();
  save16(ImagePatch(32, 32, 3, 0.4f), dir / "c.png");
  const auto out = dir / "dec";
  const auto r = run_cli({"decompose", (dir / "c.png").string(), "--sigmas", "1,2,4,8", "--out",
                          out.string()},
                         dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(out)) files += e.is_regular_file() ? 1 : 0;
  EXPECT_EQ(files, 4u * 2 + 1);
  const json side = json::parse(read_file(out / "decompose.json"));
  EXPECT_EQ(side["sigmas"].size(), 4u);
  for (const auto& m : side["maps"]) {
    if (m["kind"] == "R") {
      EXPECT_NEAR(m["lo"].get<double>(), 0.0, 1e-12);
      EXPECT_NEAR(m["hi"].get<double>(), 0.0, 1e-12);
      const ImagePatch img = load_image(out / m["file"].get<std::string>());
      for (float v : img.channel(0).values()) EXPECT_EQ(v, 0.0f);
    }
  }
}

TEST(CliDecompose, FeatureChannelSelection) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(64, 64, 2), dir / "t.png");
  const auto out = dir / "dec";
  const auto r = run_cli({"decompose", (dir / "t.png").string(), "--layer", "1", "--channel", "2",
                          "--out", out.string()},
                         dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json side = json::parse(read_file(out / "decompose.json"));
  EXPECT_EQ(side["source"], "layer 1 channel 2");
  EXPECT_EQ(load_image(out / "R_s0.png").height(), 32u);
  const auto bad = run_cli({"decompose", (dir / "t.png").string(), "--layer", "9", "--out",
                            out.string()},
                           dir);
  EXPECT_EQ(bad.exit_code, 2);
}

TEST(CliFeatures, ReconstructionMatchesLibrary) {
  const auto dir = testing::scratch_dir();
  save16(testing::tissue_image(96, 80, 3), dir / "t.png");
  const auto out = dir / "feat";
  const auto r = run_cli({"features", (dir / "t.png").string(), "--out", out.string()}, dir);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const ImagePatch img = load_image(dir / "t.png");
  const FeatureMap want = reconstruct(extract_features(img, FilterBankSpec::standard()), 96, 80);
  const ImagePatch got = load_image(out / "reconstruction.png");
  ASSERT_EQ(got.height(), 96u);
  ASSERT_EQ(got.width(), 80u);
  for (std::size_t k = 0; k < want.size(); ++k) {
    ASSERT_NEAR(got.channel(0).values()[k], want.values()[k], 0.5 / 65535.0 + 1e-7);
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(fs::exists(out / ("layer_" + std::to_string(i) + "_mean.png")));
  }
}

TEST(CliDataset, GridRandomAndWhite) {
  const auto root = testing::scratch_dir();
  const ImagePatch a = testing::tissue_image(4096, 4096, 12);
  save_png(a, root / "a.png", 8);
  save_png(testing::add_gaussian_noise(a, 0.05, 13), root / "b.png", 8);
  save_png(ImagePatch(4096, 4096, 3, 1.0f), root / "white.png", 8);
  const std::string as = (root / "a.png").string(), bs = (root / "b.png").string();

  auto r = run_cli({"dataset", as, bs, "--patch", "1024", "--min-foreground", "0",
                    "--output-size", "64", "--out", (root / "grid").string()},
                   root);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["patches"], 16);
  const PatchManifest grid = read_manifest(root / "grid" / "manifest.json");
  EXPECT_EQ(grid.entries.size(), 16u);
  EXPECT_EQ(grid.source_a, "a.png");

  const std::string ws = (root / "white.png").string();
  r = run_cli({"dataset", ws, ws, "--patch", "1024", "--out", (root / "white").string()}, root);
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["patches"], 0);

  for (const char* run : {"r1", "r2"}) {
    r = run_cli({"dataset", as, bs, "--mode", "random", "--count", "206", "--seed", "11",
                 "--patch", "256", "--output-size", "32", "--augment", "--threads", "2", "--out",
                 (root / run).string()},
                root);
    ASSERT_EQ(r.exit_code, 0) << r.err;
  }
  EXPECT_EQ(read_file(root / "r1" / "manifest.json"), read_file(root / "r2" / "manifest.json"));
  const PatchManifest m = read_manifest(root / "r1" / "manifest.json");
  EXPECT_EQ(m.seed, 11u);
  EXPECT_EQ(m.entries.size(), 206u);
  for (const auto& e : m.entries) {
    ASSERT_EQ(read_file(root / "r1" / "b" / (e.patch_id + ".png")),
              read_file(root / "r2" / "b" / (e.patch_id + ".png")));
  }
}

}  // namespace
}  // namespace papis
