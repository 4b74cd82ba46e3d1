// Copyright 2026 The svx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "svx/io.hpp"
#include "svx/render.hpp"
#include "svx/stream.hpp"
#include "svx/synth.hpp"

namespace fs = std::filesystem;
using namespace svx;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path dir = fs::temp_directory_path() / (std::string("svx_cli_") + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "svx_cli_stdout.txt";
  const std::string cmd = std::string("\"") + SVX_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::map<std::string, double> scores(const std::string& out) {
  std::map<std::string, double> m;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    m[line.substr(0, colon)] = std::stod(line.substr(colon + 2));
  }
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MovingSquareSpec small_square() {
  MovingSquareSpec s;
  s.width = 24;
  s.height = 24;
  s.frames = 30;
  s.side = 8;
  s.start_x = 2;
  s.start_y = 8;
  s.speed = 0;
  return s;
}

}  // namespace

TEST(Cli, SegmentConstantVideo) {
  const fs::path d = scratch();
  save_video(constant_video(8, 6, 4, {20, 40, 60}), d / "in");
  const CliResult r = run("segment --method gb --input " + q(d / "in") + " --output " + q(d / "out"));
  ASSERT_EQ(r.code, 0);
  const LabelVolume l = load_labels(d / "out");
  EXPECT_EQ(l.geometry(), (Geometry{8, 6, 4}));
  EXPECT_EQ(compact_labels(l).num_labels(), 1u);
}

TEST(Cli, BadArgumentsExitOne) {
  const fs::path d = scratch();
  save_video(constant_video(4, 4, 2, {}), d / "in");
  EXPECT_EQ(run("segment --method swa --input " + q(d / "in") + " --output " + q(d / "out")).code, 1);
  EXPECT_EQ(run("segment --method gb --k -3 --input " + q(d / "in") + " --output " + q(d / "out")).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, MissingInputExitsTwo) {
  const fs::path d = scratch();
  EXPECT_EQ(run("segment --method gb --input " + q(d / "nothing") + " --output " + q(d / "out")).code, 2);
}

TEST(Cli, StreamingMatchesLibrary) {
  const fs::path d = scratch();
  MovingSquareSpec s = small_square();
  s.speed = 1;
  s.noise = 10;
  const VideoVolume v = moving_square(s).video;
  save_video(v, d / "in");
  const CliResult r = run("segment --method streamgbh --window 10 --k 40 --min-size 10 --input " + q(d / "in") +
                    " --output " + q(d / "out"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("peak state"), std::string::npos);
  GBHParams p;
  p.gb.k = 40;
  p.gb.min_size = 10;
  VolumeFrameSource src(v);
  const auto h = segment_stream(src, p, 10);
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    char name[16];
    std::snprintf(name, sizeof name, "level_%02zu", l);
    const LabelVolume got = load_labels(d / "out" / name);
    EXPECT_EQ(got.frames(), 30);
    EXPECT_EQ(got.labels().size(), h.levels[l].labels().size());
    EXPECT_TRUE(std::equal(got.labels().begin(), got.labels().end(), h.levels[l].labels().begin())) << name;
  }
}

TEST(Cli, EvalPerfectLabeling) {
  const fs::path d = scratch();
  ASSERT_EQ(run("synth --width 24 --height 24 --frames 6 --side 8 --start-x 2 --start-y 8 --output " + q(d / "sq")).code, 0);
  const CliResult r = run("eval --seg " + q(d / "sq" / "gt") + " --gt " + q(d / "sq" / "gt") + " --flow " +
                    q(d / "sq" / "flow") + " --video " + q(d / "sq" / "frames") + " --csv " + q(d / "r.csv"));
  ASSERT_EQ(r.code, 0);
  const auto m = scores(r.out);
  EXPECT_EQ(m.at("ue3d"), 0.0);
  EXPECT_EQ(m.at("sa3d"), 1.0);
  EXPECT_EQ(m.at("brd"), 0.0);
  EXPECT_EQ(m.at("lc"), 1.0);
  EXPECT_EQ(m.at("ev"), 1.0);
  EXPECT_EQ(m.at("tex"), 1.0);
  EXPECT_EQ(m.at("supervoxels"), 2.0);
  const std::string csv = slurp(d / "r.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "video,method,params,level,num_supervoxels,supervoxels_per_frame,ue3d,sa3d,brd,lc,ev,msv,tex");
}

TEST(Cli, EvalRequiresInputs) {
  const fs::path d = scratch();
  save_labels(LabelVolume(Geometry{4, 4, 2}, std::vector<std::uint32_t>(32, 0)), d / "seg");
  EXPECT_EQ(run("eval --seg " + q(d / "seg") + " --metrics lc").code, 1);
  EXPECT_EQ(run("eval --seg " + q(d / "seg") + " --metrics ue3d").code, 1);
  EXPECT_EQ(run("eval --seg " + q(d / "seg") + " --metrics ev").code, 1);
  EXPECT_EQ(run("eval --seg " + q(d / "seg") + " --metrics bogus").code, 1);
  const CliResult ok = run("eval --seg " + q(d / "seg"));
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(scores(ok.out).at("tex"), 1.0);
}

TEST(Cli, TwoAnnotationsAverage) {
  const fs::path d = scratch();
  std::mt19937 rng(7);
  const Geometry g{10, 8, 3};
  save_labels(oracle::blob_labels(rng, g.width, g.height, g.frames, 6), d / "seg");
  std::vector<Annotation> ann(2);
  for (auto& a : ann) {
    const LabelVolume b = oracle::blob_labels(rng, g.width, g.height, g.frames, 3);
    a.labels.assign(b.labels().begin(), b.labels().end());
  }
  const GroundTruthSet gt(g, {0, 1, 2}, ann);
  save_annotation(gt, 0, d / "g0");
  save_annotation(gt, 1, d / "g1");
  const std::string base = "eval --metrics ue3d,sa3d,brd --seg " + q(d / "seg") + " --gt ";
  const auto a = scores(run(base + q(d / "g0")).out);
  const auto b = scores(run(base + q(d / "g1")).out);
  const CliResult both = run(base + q(d / "g0") + "," + q(d / "g1"));
  ASSERT_EQ(both.code, 0);
  const auto m = scores(both.out);
  for (const char* k : {"ue3d", "sa3d", "brd"}) EXPECT_NEAR(m.at(k), (a.at(k) + b.at(k)) / 2, 1e-8) << k;
}

TEST(Cli, SparseAnnotation) {
  const fs::path d = scratch();
  const Geometry g{6, 6, 5};
  std::vector<std::uint32_t> seg(g.voxel_count());
  for (std::size_t i = 0; i < seg.size(); ++i) seg[i] = (i % 6) < 3 ? 0 : 1;
  save_labels(LabelVolume(g, seg), d / "seg");
  Annotation a;
  a.labels.assign(2 * g.frame_size(), 4);
  const GroundTruthSet gt(g, {1, 3}, {a});
  save_annotation(gt, 0, d / "gt");
  const CliResult r = run("eval --metrics ue3d,sa3d --seg " + q(d / "seg") + " --gt " + q(d / "gt") + " --annotated 1,3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(scores(r.out).at("sa3d"), 1.0);
  EXPECT_EQ(run("eval --metrics ue3d --seg " + q(d / "seg") + " --gt " + q(d / "gt") + " --annotated 1,9").code, 1);
}

TEST(Cli, SweepIsDeterministicAcrossRunsAndJobs) {
  const fs::path d = scratch();
  MovingSquareSpec s = small_square();
  s.frames = 6;
  s.noise = 20;
  for (int v = 0; v < 2; ++v) {
    s.seed = v + 1;
    s.speed = v;
    const SyntheticVideo sv = moving_square(s);
    const fs::path dir = d / ("v" + std::to_string(v));
    save_video(sv.video, dir / "frames");
    save_annotation(sv.groundtruth, 0, dir / "gt");
    for (std::size_t t = 0; t < sv.flow.maps.size(); ++t) {
      char name[16];
      std::snprintf(name, sizeof name, "%05zu.flo", t);
      fs::create_directories(dir / "flow");
      write_flow(dir / "flow" / name, sv.flow.maps[t]);
    }
  }
  {
    std::ofstream m(d / "set.txt");
    m << "# two synthetic videos\nv0 frames=v0/frames gt=v0/gt flow=v0/flow\nv1 frames=v1/frames gt=v1/gt\n";
  }
  const std::string args = "sweep --manifest " + q(d / "set.txt") +
                           " --method gbh --k 5,20 --min-size 4 --grid 2,4,8,16,32 --metrics all";
  ASSERT_EQ(run(args + " --csv " + q(d / "a.csv") + " --reports " + q(d / "ra.csv")).code, 0);
  ASSERT_EQ(run(args + " --csv " + q(d / "b.csv") + " --reports " + q(d / "rb.csv") + " --jobs 2").code, 0);
  const std::string a = slurp(d / "a.csv");
  EXPECT_EQ(a, slurp(d / "b.csv"));
  EXPECT_EQ(slurp(d / "ra.csv"), slurp(d / "rb.csv"));
  EXPECT_EQ(a.substr(0, a.find('\n')), "metric,basis,count,score,contributors");
  EXPECT_NE(a.find("sa3d,spv,4,"), std::string::npos);
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  int rows = 0, contributed = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.back() != '0') ++contributed;
  }
  EXPECT_EQ(rows, 7 * 5);
  EXPECT_GT(contributed, 0);
}

TEST(Cli, BadManifestsExitOne) {
  const fs::path d = scratch();
  { std::ofstream(d / "empty.txt") << "# nothing\n"; }
  { std::ofstream(d / "bad.txt") << "v frames=x colour=red\n"; }
  EXPECT_EQ(run("sweep --manifest " + q(d / "empty.txt") + " --csv " + q(d / "o.csv")).code, 1);
  EXPECT_EQ(run("sweep --manifest " + q(d / "bad.txt") + " --csv " + q(d / "o.csv")).code, 1);
  EXPECT_FALSE(fs::exists(d / "o.csv"));
}

TEST(Cli, RenderIsConstantOverTime) {
  const fs::path d = scratch();
  std::mt19937 rng(9);
  const LabelVolume l = oracle::blob_labels(rng, 12, 9, 4, 7);
  save_labels(l, d / "seg");
  ASSERT_EQ(run("render --seg " + q(d / "seg") + " --output " + q(d / "rgb")).code, 0);
  const VideoVolume v = load_video(d / "rgb");
  ASSERT_EQ(v.geometry(), l.geometry());
  std::map<std::uint32_t, Rgb> color;
  std::set<std::tuple<int, int, int>> used;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto [it, fresh] = color.emplace(l[i], v.voxels()[i]);
    EXPECT_EQ(it->second, v.voxels()[i]);
    if (fresh) {
      EXPECT_TRUE(used.emplace(it->second.r, it->second.g, it->second.b).second);
    }
  }
  save_labels(LabelVolume(Geometry{5, 5, 3}, std::vector<std::uint32_t>(75, 42)), d / "one");
  ASSERT_EQ(run("render --seg " + q(d / "one") + " --output " + q(d / "one_rgb")).code, 0);
  const VideoVolume u = load_video(d / "one_rgb");
  for (const Rgb& c : u.voxels()) EXPECT_EQ(c, u.voxels()[0]);
}

TEST(Render, PaletteDistinct) {
  const auto p = label_palette(100000);
  std::set<std::uint32_t> seen;
  for (const Rgb& c : p) seen.insert(c.r | (c.g << 8) | (c.b << 16));
  EXPECT_EQ(seen.size(), p.size());
  EXPECT_EQ(label_palette(10), std::vector<Rgb>(p.begin(), p.begin() + 10));
}

TEST(Cli, AlternatingFramesHaveOneFrameSupervoxels) {
  const fs::path d = scratch();
  const int frames = 6;
  std::vector<Rgb> px;
  for (int t = 0; t < frames; ++t) px.insert(px.end(), 16, t % 2 ? Rgb{255, 255, 255} : Rgb{0, 0, 0});
  save_video(VideoVolume(Geometry{4, 4, frames}, px), d / "in");
  ASSERT_EQ(run("segment --method gb --k 1 --min-size 1 --sigma 0 --input " + q(d / "in") + " --output " +
                q(d / "seg"))
                .code,
            0);
  const auto m = scores(run("eval --metrics tex,msv --seg " + q(d / "seg")).out);
  EXPECT_NEAR(m.at("tex"), 1.0 / frames, 1e-9);
  EXPECT_EQ(m.at("supervoxels"), frames);
  EXPECT_EQ(m.at("supervoxels per frame"), 1.0);
}
