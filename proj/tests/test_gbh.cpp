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
#include <random>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "svx/color.hpp"
#include "svx/gb.hpp"
#include "svx/gbh.hpp"
#include "svx/synth.hpp"

using namespace svx;

namespace {

std::vector<double> two_bin_hist(double c0, double c1) { return {c0, c1, c0, c1, c0, c1}; }

RegionGraph graph_of(const VideoVolume& v, const LabelVolume& l, int bins = 20) {
  return build_region_graph(rgb_to_lab(v), l, bins);
}

}  // namespace

TEST(ChiSquared, IdentityZero) {
  const auto h = two_bin_hist(0.25, 0.75);
  EXPECT_EQ(chi_squared(h, h), 0.0);
}

TEST(ChiSquared, DisjointChannelsGiveThree) {
  EXPECT_DOUBLE_EQ(chi_squared(two_bin_hist(1, 0), two_bin_hist(0, 1)), 3.0);
}

TEST(ChiSquared, SymmetricOnRandomHistograms) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(0, 1);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> a(60), b(60);
    for (auto& x : a) x = d(rng) < 0.3 ? 0 : d(rng);
    for (auto& x : b) x = d(rng) < 0.3 ? 0 : d(rng);
    EXPECT_EQ(chi_squared(a, b), chi_squared(b, a));
    EXPECT_GE(chi_squared(a, b), 0.0);
  }
}

TEST(ChiSquared, BinMismatchThrows) {
  EXPECT_THROW(chi_squared(std::vector<double>(6), std::vector<double>(9)), InvalidArgument);
}

TEST(ChiSquared, BlackAgainstWhiteRegions) {
  // Black and white share the a and b bins; only the L channel differs.
  const VideoVolume v = half_split(4, 2, 1);
  const LabelVolume l(v.geometry(), {0, 0, 1, 1, 0, 0, 1, 1});
  const RegionGraph g = graph_of(v, l);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_DOUBLE_EQ(g.edges[0].weight, 1.0);
}

TEST(LabBins, RangesAndClamping) {
  EXPECT_EQ(lab_bins(Lab{0, -128, -128}, 20).l, 0);
  EXPECT_EQ(lab_bins(Lab{100, 127, 127}, 20).l, 19);
  EXPECT_EQ(lab_bins(Lab{100, 127, 127}, 20).a, 19);
  EXPECT_EQ(lab_bins(Lab{50, -500, 500}, 20).a, 0);
  EXPECT_EQ(lab_bins(Lab{50, -500, 500}, 20).b, 19);
}

TEST(RegionGraph, TwoTouchingRegions) {
  const VideoVolume v = half_split(4, 4, 2);
  std::vector<std::uint32_t> ids(v.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = (i % 4) < 2 ? 0 : 1;
  const RegionGraph g = graph_of(v, LabelVolume(v.geometry(), ids));
  EXPECT_EQ(g.nodes.size(), 2u);
  EXPECT_EQ(g.edges.size(), 1u);
}

TEST(RegionGraph, SingleLabelHasNoEdges) {
  const VideoVolume v = half_split(4, 4, 2);
  const RegionGraph g = graph_of(v, LabelVolume(v.geometry(), std::vector<std::uint32_t>(v.size(), 0)));
  EXPECT_EQ(g.nodes.size(), 1u);
  EXPECT_TRUE(g.edges.empty());
}

TEST(RegionGraph, RandomLabelingInvariants) {
  std::mt19937 rng(2);
  for (int seed = 0; seed < 10; ++seed) {
    const VideoVolume v = oracle::random_video(rng, 6, 5, 3);
    const LabelVolume l = oracle::blob_labels(rng, 6, 5, 3, 6);
    const RegionGraph g = graph_of(v, l, 8);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const auto& n = g.nodes[i];
      EXPECT_EQ(n.id, i);
      total += n.size;
      for (int c = 0; c < 3; ++c) {
        double s = 0;
        for (int b = 0; b < 8; ++b) s += n.histogram[c * 8 + b];
        EXPECT_NEAR(s, 1.0, 1e-9);
      }
    }
    EXPECT_EQ(total, v.size());
    // Adjacent pairs by brute force over all 26-neighbor voxel pairs.
    std::set<std::pair<std::uint32_t, std::uint32_t>> adjacent;
    for (auto [a, b] : oracle::neighbor_pairs(v.geometry())) {
      if (l[a] != l[b]) adjacent.emplace(std::min(l[a], l[b]), std::max(l[a], l[b]));
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> got;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      EXPECT_LT(e.a, e.b);
      got.emplace(e.a, e.b);
      EXPECT_DOUBLE_EQ(e.weight, chi_squared(g.nodes[e.a].histogram, g.nodes[e.b].histogram));
      if (i > 0) {
        const auto& p = g.edges[i - 1];
        EXPECT_TRUE(std::tie(p.weight, p.a, p.b) < std::tie(e.weight, e.a, e.b));
      }
    }
    EXPECT_EQ(got, adjacent);
  }
}

TEST(RegionGraph, AggregateConservesHistograms) {
  std::mt19937 rng(3);
  const VideoVolume v = oracle::random_video(rng, 8, 6, 2);
  const LabelVolume fine = oracle::blob_labels(rng, 8, 6, 2, 12);
  const RegionGraph g = graph_of(v, fine, 10);
  std::vector<std::uint32_t> coarse_of(g.nodes.size());
  for (std::size_t i = 0; i < coarse_of.size(); ++i) coarse_of[i] = static_cast<std::uint32_t>(i % 3);
  const RegionGraph c = aggregate_region_graph(g, coarse_of, 3);
  ASSERT_EQ(c.nodes.size(), 3u);
  for (std::uint32_t k = 0; k < 3; ++k) {
    std::vector<double> weighted(30, 0.0);
    double size = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (coarse_of[i] != k) continue;
      size += g.nodes[i].size;
      for (int b = 0; b < 30; ++b) weighted[b] += g.nodes[i].size * g.nodes[i].histogram[b];
    }
    EXPECT_EQ(c.nodes[k].size, static_cast<std::uint64_t>(size));
    for (int b = 0; b < 30; ++b) EXPECT_NEAR(c.nodes[k].histogram[b], weighted[b] / size, 1e-9);
  }
  // Same as building the coarse graph from the coarse labeling directly.
  std::vector<std::uint32_t> coarse_labels(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) coarse_labels[i] = coarse_of[fine[i]];
  const RegionGraph direct = graph_of(v, LabelVolume(v.geometry(), coarse_labels), 10);
  ASSERT_EQ(direct.edges.size(), c.edges.size());
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    EXPECT_EQ(direct.edges[i].a, c.edges[i].a);
    EXPECT_EQ(direct.edges[i].b, c.edges[i].b);
    EXPECT_EQ(direct.edges[i].weight, c.edges[i].weight);
  }
}

TEST(MergeLevel, IdenticalHistogramsMerge) {
  const VideoVolume v = constant_video(4, 2, 1, {10, 200, 30});
  const LabelVolume l(v.geometry(), {0, 0, 1, 1, 0, 0, 1, 1});
  std::uint32_t n = 0;
  merge_level(graph_of(v, l), 1e-6, 1, &n);
  EXPECT_EQ(n, 1u);
}

TEST(MergeLevel, DisjointHistogramsStaySeparate) {
  const VideoVolume v = half_split(4, 2, 1);
  const LabelVolume l(v.geometry(), {0, 0, 1, 1, 0, 0, 1, 1});
  const RegionGraph g = graph_of(v, l);
  const double w = g.edges[0].weight;  // both regions have 4 voxels
  std::uint32_t n = 0;
  merge_level(g, 0.99 * w * 4, 1, &n);
  EXPECT_EQ(n, 2u);
  merge_level(g, 1.01 * w * 4, 1, &n);
  EXPECT_EQ(n, 1u);
}

TEST(MergeLevel, ForcedByMinSize) {
  std::mt19937 rng(4);
  const VideoVolume v = oracle::random_video(rng, 6, 6, 2);
  const LabelVolume l = oracle::blob_labels(rng, 6, 6, 2, 8);
  std::uint32_t n = 0;
  merge_level(graph_of(v, l), 1e-9, static_cast<double>(v.size()), &n);
  EXPECT_EQ(n, 1u);
}

TEST(SegmentGBH, ConstantVolumeOneRegionEverywhere) {
  const auto h = segment_gbh(constant_video(6, 6, 3, {1, 2, 3}), GBHParams{});
  ASSERT_FALSE(h.levels.empty());
  for (const auto& l : h.levels) EXPECT_EQ(l.num_labels(), 1u);
}

TEST(SegmentGBH, HalfSplitPersistsUntilThresholdsReachTheEdge) {
  GBHParams p;
  p.gb.sigma = 0;
  p.gb.min_size = 20;
  const VideoVolume v = half_split(8, 8, 4);
  const auto h = segment_gbh(v, p);
  // Each half has 128 voxels; the single edge weighs chi-squared 1.0.
  int expected_merge = 1;
  while (!(1.0 <= p.k_at(expected_merge) / 128.0 || p.min_size_at(expected_merge) > 128.0)) ++expected_merge;
  ASSERT_EQ(static_cast<int>(h.levels.size()), expected_merge + 1);
  for (int l = 0; l < expected_merge; ++l) EXPECT_EQ(h.levels[l].num_labels(), 2u) << "level " << l;
  EXPECT_EQ(h.levels.back().num_labels(), 1u);
}

TEST(SegmentGBH, HierarchyInvariantsOnRandomVideos) {
  std::mt19937 rng(5);
  for (int seed = 0; seed < 5; ++seed) {
    const VideoVolume v = oracle::random_video(rng, 12, 10, 4, 6);
    GBHParams p;
    p.gb.k = 20;
    p.gb.min_size = 3;
    p.num_levels = 8;
    const auto h = segment_gbh(v, p);
    EXPECT_EQ(h.levels[0], segment_gb(v, p.gb));
    EXPECT_LE(static_cast<int>(h.levels.size()), p.num_levels);
    for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
      EXPECT_TRUE(oracle::refines(h.levels[l], h.levels[l + 1])) << "level " << l;
      EXPECT_GE(h.levels[l].num_labels(), h.levels[l + 1].num_labels());
      check_partition(h.levels[l + 1], v.geometry());
    }
  }
}

TEST(SelectLevel, ClosestCountTiesToFiner) {
  SegmentationHierarchy h;
  const Geometry g{1000, 1, 1};
  for (std::uint32_t n : {900u, 400u, 80u}) {
    std::vector<std::uint32_t> ids(1000);
    for (std::uint32_t i = 0; i < 1000; ++i) ids[i] = i % n;
    h.levels.emplace_back(g, ids);
  }
  EXPECT_EQ(select_level_index(h, 400), 1u);
  EXPECT_EQ(select_level_index(h, 1), 2u);
  EXPECT_EQ(select_level_index(h, 240), 1u);
  EXPECT_EQ(select_level_index(h, 650), 0u);  // equidistant from 900 and 400
  EXPECT_EQ(&select_level(h, 90), &h.levels[2]);
}

TEST(GBHParams, Validation) {
  GBHParams p;
  EXPECT_NO_THROW(p.validate());
  p.scale_factor = 1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = GBHParams{};
  p.num_levels = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = GBHParams{};
  p.bins = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = GBHParams{};
  EXPECT_DOUBLE_EQ(p.k_at(2), 100 * 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(p.min_size_at(0), 20);
}
