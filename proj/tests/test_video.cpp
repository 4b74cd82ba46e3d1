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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "svx/color.hpp"
#include "svx/filter.hpp"
#include "svx/io.hpp"
#include "svx/video.hpp"

namespace fs = std::filesystem;
using namespace svx;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("svx_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

PpmImage solid(int w, int h, Rgb c) { return {w, h, std::vector<Rgb>(static_cast<std::size_t>(w) * h, c)}; }

}  // namespace

TEST(Geometry, IndexIsFrameMajor) {
  const Geometry g{3, 2, 4};
  EXPECT_EQ(g.voxel_count(), 24u);
  EXPECT_EQ(g.index(2, 1, 3), (3u * 2 + 1) * 3 + 2);
}

TEST(VideoVolume, RejectsWrongVoxelCount) {
  EXPECT_THROW(VideoVolume(Geometry{2, 2, 2}, std::vector<Rgb>(7)), GeometryError);
}

TEST(CompactLabels, RemapsInFirstOccurrenceOrder) {
  const LabelVolume in(Geometry{3, 1, 1}, {5, 5, 9});
  const LabelVolume out = compact_labels(in);
  EXPECT_EQ(std::vector<std::uint32_t>(out.labels().begin(), out.labels().end()),
            (std::vector<std::uint32_t>{0, 0, 1}));
  EXPECT_EQ(out.num_labels(), 2u);
}

TEST(CompactLabels, IdempotentOnCompactInput) {
  const LabelVolume in(Geometry{4, 1, 1}, {0, 1, 1, 2});
  EXPECT_EQ(compact_labels(in), in);
}

TEST(CompactLabels, PreservesCoLabeling) {
  std::mt19937 rng(7);
  for (int seed = 0; seed < 20; ++seed) {
    std::vector<std::uint32_t> raw(4 * 3 * 2);
    for (auto& x : raw) x = rng() % 1000;
    const LabelVolume in(Geometry{4, 3, 2}, raw);
    const LabelVolume out = compact_labels(in);
    EXPECT_TRUE(out.is_compact());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (std::size_t j = 0; j < raw.size(); ++j) EXPECT_EQ(in[i] == in[j], out[i] == out[j]);
    }
  }
}

TEST(CheckPartition, DetectsGapsAndGeometry) {
  const Geometry g{2, 1, 1};
  EXPECT_NO_THROW(check_partition(LabelVolume(g, {0, 1}), g));
  EXPECT_THROW(check_partition(LabelVolume(g, {0, 2}), g), InvariantError);
  EXPECT_THROW(check_partition(LabelVolume(g, {0, 0}), Geometry{1, 2, 1}), InvariantError);
}

TEST(GroundTruthSet, ValidatesAnnotations) {
  const Geometry g{2, 1, 2};
  EXPECT_NO_THROW(GroundTruthSet(g, {1}, {Annotation{{0, kUnlabeled}}}));
  EXPECT_THROW(GroundTruthSet(g, {1}, {Annotation{{kUnlabeled, kUnlabeled}}}), InvalidArgument);
  EXPECT_THROW(GroundTruthSet(g, {1, 0}, {Annotation{{0, 0, 0, 0}}}), InvalidArgument);
  EXPECT_THROW(GroundTruthSet(g, {0}, {Annotation{{0, 0, 0}}}), GeometryError);
}

TEST(LoadVideo, IdenticalWhiteFrames) {
  const auto dir = scratch_dir("white");
  for (int t = 0; t < 3; ++t) write_ppm(dir / ("f" + std::to_string(t) + ".ppm"), solid(2, 2, {255, 255, 255}));
  const VideoVolume v = load_video(dir);
  EXPECT_EQ(v.geometry(), (Geometry{2, 2, 3}));
  for (auto c : v.voxels()) EXPECT_EQ(c, (Rgb{255, 255, 255}));
}

TEST(LoadVideo, MismatchedSizesIsGeometryError) {
  const auto dir = scratch_dir("mismatch");
  write_ppm(dir / "a.ppm", solid(2, 2, {}));
  write_ppm(dir / "b.ppm", solid(3, 2, {}));
  EXPECT_THROW(load_video(dir), GeometryError);
}

TEST(LoadVideo, LexicographicFrameOrder) {
  const auto dir = scratch_dir("order");
  // Written in reverse so directory iteration order cannot matter.
  for (int t = 9; t >= 0; --t) {
    PpmImage img = solid(3, 3, {});
    img.pixels[0] = {static_cast<std::uint8_t>(t * 10), 0, 0};
    char name[16];
    std::snprintf(name, sizeof name, "%05d.ppm", t);
    write_ppm(dir / name, img);
  }
  const VideoVolume v = load_video(dir);
  ASSERT_EQ(v.frames(), 10);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(v.at(0, 0, t).r, t * 10);
}

TEST(LoadVideo, NonP6NamesTheFile) {
  const auto dir = scratch_dir("badppm");
  write_ppm(dir / "a.ppm", solid(2, 2, {}));
  std::ofstream(dir / "b.ppm") << "P3\n2 2\n255\n0 0 0 0 0 0 0 0 0 0 0 0\n";
  try {
    load_video(dir);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("b.ppm"), std::string::npos);
  }
}

TEST(LoadVideo, MissingOrEmptyDirectory) {
  EXPECT_THROW(load_video("/nonexistent/svx/dir"), IoError);
  EXPECT_THROW(load_video(scratch_dir("empty")), IoError);
}

TEST(Ppm, CommentsInHeader) {
  const auto dir = scratch_dir("comment");
  std::ofstream out(dir / "c.ppm", std::ios::binary);
  out << "P6\n# a comment\n1 1\n255\n";
  out.put(char(1)).put(char(2)).put(char(3));
  out.close();
  const PpmImage img = read_ppm(dir / "c.ppm");
  EXPECT_EQ(img.pixels[0], (Rgb{1, 2, 3}));
}

TEST(LabelEncoding, BaseTwoFiftySix) {
  EXPECT_EQ(encode_label(0), (Rgb{0, 0, 0}));
  EXPECT_EQ(encode_label(258), (Rgb{2, 1, 0}));
  EXPECT_EQ(decode_label({2, 1, 0}), 258u);
  EXPECT_EQ(decode_label(encode_label(0xABCDEF)), 0xABCDEFu);
}

TEST(LabelEncoding, RoundTripRandomVolumes) {
  std::mt19937 rng(3);
  const auto dir = scratch_dir("labels");
  for (int i = 0; i < 100; ++i) {
    const int w = 1 + rng() % 5, h = 1 + rng() % 5, t = 1 + rng() % 3;
    std::vector<std::uint32_t> raw(static_cast<std::size_t>(w) * h * t);
    for (auto& x : raw) x = rng() % (1u << 24);
    const LabelVolume l(Geometry{w, h, t}, raw);
    fs::remove_all(dir);
    save_labels(l, dir);
    EXPECT_EQ(load_labels(dir), l);
  }
}

TEST(LabelEncoding, CapacityError) {
  const LabelVolume l(Geometry{1, 1, 1}, {1u << 24});
  EXPECT_THROW(save_labels(l, scratch_dir("cap")), CapacityError);
}

TEST(Flow, ZeroFlowAllValid) {
  const auto dir = scratch_dir("flow0");
  FlowMap m{3, 2, std::vector<float>(6, 0.f), std::vector<float>(6, 0.f), std::vector<std::uint8_t>(6, 1)};
  write_flow(dir / "a.flo", m);
  const FlowMap r = read_flow(dir / "a.flo");
  EXPECT_EQ(r.width, 3);
  EXPECT_EQ(r.height, 2);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(r.u[i], 0.f);
    EXPECT_EQ(r.v[i], 0.f);
    EXPECT_TRUE(r.valid[i]);
  }
}

namespace {

void put_f32(std::ofstream& out, float f) {
  std::uint32_t b;
  std::memcpy(&b, &f, 4);
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((b >> (8 * i)) & 0xFF));
}

void put_i32(std::ofstream& out, std::int32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((static_cast<std::uint32_t>(v) >> (8 * i)) & 0xFF));
}

}  // namespace

TEST(Flow, HandWrittenBytes) {
  const auto dir = scratch_dir("flowbytes");
  {
    std::ofstream out(dir / "a.flo", std::ios::binary);
    put_f32(out, 202021.25f);
    put_i32(out, 2);
    put_i32(out, 2);
    for (int i = 0; i < 4; ++i) {
      put_f32(out, i == 2 ? 1e10f : 1.0f);
      put_f32(out, 0.0f);
    }
  }
  const FlowMap m = read_flow(dir / "a.flo");
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(m.valid[i], i != 2);
    if (i != 2) {
      EXPECT_EQ(m.u[i], 1.0f);
      EXPECT_EQ(m.v[i], 0.0f);
    }
  }
}

TEST(Flow, BadMagicAndTruncation) {
  const auto dir = scratch_dir("flowbad");
  {
    std::ofstream out(dir / "bad.flo", std::ios::binary);
    put_f32(out, 1.0f);
    put_i32(out, 1);
    put_i32(out, 1);
    put_f32(out, 0.f);
    put_f32(out, 0.f);
  }
  {
    std::ofstream out(dir / "short.flo", std::ios::binary);
    put_f32(out, 202021.25f);
    put_i32(out, 4);
    put_i32(out, 4);
    put_f32(out, 0.f);
  }
  EXPECT_THROW(read_flow(dir / "bad.flo"), FormatError);
  EXPECT_THROW(read_flow(dir / "short.flo"), FormatError);
}

TEST(Flow, MaskSurvivesWriteRead) {
  const auto dir = scratch_dir("flowmask");
  FlowMap m{2, 1, {1.5f, 2.f}, {0.f, -1.f}, {1, 0}};
  write_flow(dir / "m.flo", m);
  const FlowMap r = read_flow(dir / "m.flo");
  EXPECT_EQ(r.u[0], 1.5f);
  EXPECT_TRUE(r.valid[0]);
  EXPECT_FALSE(r.valid[1]);
}

TEST(Lab, WhiteAndBlack) {
  const Lab w = rgb_to_lab(Rgb{255, 255, 255});
  EXPECT_NEAR(w.l, 100.0, 0.01);
  EXPECT_NEAR(w.a, 0.0, 0.01);
  EXPECT_NEAR(w.b, 0.0, 0.01);
  const Lab k = rgb_to_lab(Rgb{0, 0, 0});
  EXPECT_EQ(k.l, 0.f);
  EXPECT_EQ(k.a, 0.f);
  EXPECT_EQ(k.b, 0.f);
}

TEST(Lab, SrgbRedMatchesReference) {
  // Published CIE Lab (D65) of sRGB (255, 0, 0): 53.2408, 80.0925, 67.2032.
  const Lab r = rgb_to_lab(Rgb{255, 0, 0});
  EXPECT_NEAR(r.l, 53.2408, 0.5);
  EXPECT_NEAR(r.a, 80.0925, 0.5);
  EXPECT_NEAR(r.b, 67.2032, 0.5);
}

TEST(Lab, Deterministic) {
  std::mt19937 rng(1);
  const VideoVolume v = oracle::random_video(rng, 5, 5, 2);
  const LabVolume a = rgb_to_lab(v), b = rgb_to_lab(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(a[i].l, b[i].l);
    EXPECT_EQ(a[i].a, b[i].a);
    EXPECT_EQ(a[i].b, b[i].b);
  }
}

TEST(Smooth, SigmaZeroIsIdentity) {
  std::mt19937 rng(2);
  const VideoVolume v = oracle::random_video(rng, 7, 5, 3);
  const FloatVideo s = smooth(v, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(s.r[i], v.voxels()[i].r);
    EXPECT_EQ(s.g[i], v.voxels()[i].g);
    EXPECT_EQ(s.b[i], v.voxels()[i].b);
  }
}

TEST(Smooth, ConstantVolumeUnchanged) {
  const VideoVolume v(Geometry{9, 6, 2}, std::vector<Rgb>(108, Rgb{17, 200, 93}));
  for (double sigma : {0.5, 0.8, 1.0, 2.5}) {
    const FloatVideo s = smooth(v, sigma);
    EXPECT_EQ(s.geometry, v.geometry());
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_EQ(s.r[i], 17.f);
      EXPECT_EQ(s.g[i], 200.f);
      EXPECT_EQ(s.b[i], 93.f);
    }
  }
}

TEST(Smooth, ImpulseMatchesBruteForceAndConservesSum) {
  const int w = 21, h = 21;
  std::vector<Rgb> px(w * h);
  px[10 * w + 10] = {255, 0, 0};
  const VideoVolume v(Geometry{w, h, 1}, px);
  const FloatVideo s = smooth(v, 1.0);
  std::vector<double> plane(w * h, 0.0);
  plane[10 * w + 10] = 1.0;
  const auto ref = oracle::brute_smooth_plane(plane, w, h, 1.0);
  double sum = 0;
  for (int i = 0; i < w * h; ++i) {
    EXPECT_NEAR(s.r[i] / 255.0, ref[i], 1e-6);
    sum += s.r[i];
  }
  EXPECT_NEAR(sum / 255.0, 1.0, 1e-6);
}

TEST(Smooth, RandomFrameMatchesBruteForceWithBorders) {
  std::mt19937 rng(5);
  const VideoVolume v = oracle::random_video(rng, 8, 6, 1);
  const FloatVideo s = smooth(v, 0.8);
  std::vector<double> plane(48);
  for (int i = 0; i < 48; ++i) plane[i] = v.voxels()[i].g;
  const auto ref = oracle::brute_smooth_plane(plane, 8, 6, 0.8);
  for (int i = 0; i < 48; ++i) EXPECT_NEAR(s.g[i], ref[i], 1e-3);
}

TEST(Smooth, NegativeSigmaRejected) {
  const VideoVolume v(Geometry{1, 1, 1}, std::vector<Rgb>(1));
  EXPECT_THROW(smooth(v, -0.1), InvalidArgument);
}
