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

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "svx/disjoint_set.hpp"
#include "svx/filter.hpp"
#include "svx/video.hpp"

namespace svx {

/// Undirected edge between two 26-neighbor voxels, a < b.
struct LatticeEdge {
  std::uint32_t a;
  std::uint32_t b;
  float weight;
};

struct GBParams {
  double k = 100.0;       ///< scale parameter, color-distance units
  double min_size = 20;   ///< voxels
  double sigma = 0.8;     ///< spatial smoothing, pixels

  void validate() const;
};

/// The 13 "forward" neighbor offsets (dx, dy, dt): 4 inside a frame, 9 into
/// the next frame. Together with their negations they form the 26-neighborhood.
struct Offset {
  int dx, dy, dt;
};
inline constexpr Offset kForwardOffsets[13] = {
    {1, 0, 0},  {-1, 1, 0}, {0, 1, 0},  {1, 1, 0},
    {-1, -1, 1}, {0, -1, 1}, {1, -1, 1}, {-1, 0, 1}, {0, 0, 1},
    {1, 0, 1},  {-1, 1, 1}, {0, 1, 1},  {1, 1, 1},
};

/// One edge per unordered 26-neighbor pair, weighted by the Euclidean
/// distance between the two voxels' colors. With `skip_first_frame_edges`
/// the in-frame edges of frame 0 are omitted (frame 0 is then only linked
/// forward in time).
std::vector<LatticeEdge> build_lattice_edges(const FloatVideo& video, bool skip_first_frame_edges = false);

/// Total order used for every edge sort: (weight, a, b).
template <class Edge>
void sort_edges(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
}

/// Graph-based merging over edges already sorted by sort_edges.
///
/// Phase 1 merges the regions at both ends of an edge when its weight is at
/// most min(Int(Ri) + k/|Ri|, Int(Rj) + k/|Rj|) and sets Int of the union to
/// the edge weight. Phase 2 re-walks the same order and merges any pair where
/// a side is smaller than `min_size`. Two carried regions are never merged.
template <class Edge>
void merge_sorted_edges(RegionForest& forest, std::span<const Edge> edges, double k, double min_size) {
  for (const auto& e : edges) {
    std::uint32_t a = forest.find(e.a);
    std::uint32_t b = forest.find(e.b);
    if (a == b || (forest.carried(a) && forest.carried(b))) continue;
    const double w = static_cast<double>(e.weight);
    const double ta = forest.internal(a) + k / static_cast<double>(forest.size(a));
    const double tb = forest.internal(b) + k / static_cast<double>(forest.size(b));
    if (w <= ta && w <= tb) {
      // join keeps the larger Int; with sorted edges w dominates unless a
      // carried region enters with a larger accumulated Int.
      const std::uint32_t r = forest.join(a, b);
      forest.set_internal(r, std::max(forest.internal(r), w));
    }
  }
  for (const auto& e : edges) {
    std::uint32_t a = forest.find(e.a);
    std::uint32_t b = forest.find(e.b);
    if (a == b || (forest.carried(a) && forest.carried(b))) continue;
    if (static_cast<double>(forest.size(a)) < min_size || static_cast<double>(forest.size(b)) < min_size) {
      const std::uint32_t r = forest.join(a, b);
      forest.set_internal(r, std::max(forest.internal(r), static_cast<double>(e.weight)));
    }
  }
}

/// Sorts a copy of `edges` and runs both merge phases over `num_voxels`
/// singleton regions.
RegionForest felzenszwalb_merge(std::vector<LatticeEdge> edges, std::size_t num_voxels, double k,
                                double min_size);

/// Compact labels from forest roots, numbered in node scan order.
std::vector<std::uint32_t> forest_labels(RegionForest& forest, std::uint32_t* num_regions = nullptr);

/// smooth -> lattice edges -> merge -> compact labels.
LabelVolume segment_gb(const VideoVolume& video, const GBParams& params);

}  // namespace svx
