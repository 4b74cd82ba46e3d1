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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "svx/gb.hpp"
#include "svx/video.hpp"

namespace svx {

/// Fixed Lab histogram ranges; values outside are clamped into the end bins.
namespace histogram_range {
inline constexpr double kLMin = 0.0, kLMax = 100.0;
inline constexpr double kABMin = -128.0, kABMax = 127.0;
}  // namespace histogram_range

/// Bin index of each channel (L, a, b) for `bins` bins per channel.
struct LabBins {
  int l, a, b;
};
LabBins lab_bins(const Lab& c, int bins);

/// 0.5 * sum (a_i - b_i)^2 / (a_i + b_i); 0/0 terms contribute nothing.
double chi_squared(std::span<const double> a, std::span<const double> b);

struct RegionNode {
  std::uint32_t id = 0;
  std::uint64_t size = 0;
  /// Raw bin counts, 3 channels x bins; each channel sums to `size`.
  std::vector<std::uint64_t> counts;
  /// counts / size, so every channel sums to 1.
  std::vector<double> histogram;
};

struct RegionEdge {
  std::uint32_t a;
  std::uint32_t b;
  double weight;
};

struct RegionGraph {
  int bins = 0;
  std::vector<RegionNode> nodes;  ///< nodes[i].id == i
  std::vector<RegionEdge> edges;  ///< one per adjacent pair, a < b, sorted by (weight, a, b)
};

/// Normalizes counts into the per-channel unit-sum histogram.
std::vector<double> normalize_histogram(std::span<const std::uint64_t> counts, std::uint64_t size, int bins);

/// One node per label (compact labels required); one edge per pair of labels
/// that touch through a 26-neighbor voxel pair, weighted by chi-squared.
RegionGraph build_region_graph(const LabVolume& lab, const LabelVolume& labels, int bins);

/// Region graph of a coarser partition: node i of `fine` belongs to coarse
/// node `coarse_of[i]`. Counts are summed, edges re-mapped and re-weighted.
RegionGraph aggregate_region_graph(const RegionGraph& fine, std::span<const std::uint32_t> coarse_of,
                                   std::uint32_t coarse_count);

/// Graph-based merging with regions as nodes (|R| = voxel size, Int = 0 at
/// start). Returns the compact coarse label of each node, numbered in node order.
std::vector<std::uint32_t> merge_level(const RegionGraph& graph, double k_level, double min_size_level,
                                       std::uint32_t* coarse_count = nullptr);

struct GBHParams {
  GBParams gb;
  double scale_factor = 1.5;
  int num_levels = 20;
  int bins = 20;

  void validate() const;
  double k_at(int level) const;
  double min_size_at(int level) const;
};

struct SegmentationHierarchy {
  std::vector<LabelVolume> levels;  ///< levels[0] is the finest

  std::vector<std::uint32_t> region_counts() const;
};

/// Level 0 is segment_gb; every further level merges the previous level's
/// region graph with k and min-size scaled by scale_factor^level. Stops after
/// the first level with a single region.
SegmentationHierarchy segment_gbh(const VideoVolume& video, const GBHParams& params);

/// Index of the level whose region count is closest to `target`; ties go to the finer level.
std::size_t select_level_index(const SegmentationHierarchy& hierarchy, std::uint32_t target);
const LabelVolume& select_level(const SegmentationHierarchy& hierarchy, std::uint32_t target);

}  // namespace svx
