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

#include "svx/gb.hpp"

#include <cmath>
#include <string>

#include "svx/simd/kernels.hpp"

namespace svx {

void GBParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("k must be positive, got " + std::to_string(k));
  if (!(min_size >= 1.0)) throw InvalidArgument("min-size must be at least 1");
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be non-negative");
}

std::vector<LatticeEdge> build_lattice_edges(const FloatVideo& video, bool skip_first_frame_edges) {
  const Geometry& g = video.geometry;
  const auto& k = simd::active();
  std::vector<LatticeEdge> edges;
  if (g.voxel_count() == 0) return edges;
  // Upper bound; boundary truncation makes the real count smaller.
  edges.reserve(g.voxel_count() * 13);
  std::vector<float> weights(static_cast<std::size_t>(g.width));

  for (int t = 0; t < g.frames; ++t) {
    for (const auto& o : kForwardOffsets) {
      if (t + o.dt >= g.frames) continue;
      if (o.dt == 0 && t == 0 && skip_first_frame_edges) continue;
      const int x0 = std::max(0, -o.dx);
      const int x1 = std::min(g.width, g.width - o.dx);
      if (x1 <= x0) continue;
      const std::size_t n = static_cast<std::size_t>(x1 - x0);
      for (int y = std::max(0, -o.dy); y < std::min(g.height, g.height - o.dy); ++y) {
        const std::size_t p = g.index(x0, y, t);
        const std::size_t q = g.index(x0 + o.dx, y + o.dy, t + o.dt);
        k.color_distance(video.r.data() + p, video.g.data() + p, video.b.data() + p, video.r.data() + q,
                         video.g.data() + q, video.b.data() + q, weights.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
          edges.push_back({static_cast<std::uint32_t>(p + i), static_cast<std::uint32_t>(q + i), weights[i]});
        }
      }
    }
  }
  return edges;
}

RegionForest felzenszwalb_merge(std::vector<LatticeEdge> edges, std::size_t num_voxels, double k,
                                double min_size) {
  sort_edges(edges);
  RegionForest forest(num_voxels);
  merge_sorted_edges<LatticeEdge>(forest, edges, k, min_size);
  return forest;
}

std::vector<std::uint32_t> forest_labels(RegionForest& forest, std::uint32_t* num_regions) {
  constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  const std::size_t n = forest.node_count();
  std::vector<std::uint32_t> root_label(n, kNone);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t r = forest.find(static_cast<std::uint32_t>(i));
    if (root_label[r] == kNone) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  if (num_regions) *num_regions = next;
  return labels;
}

LabelVolume segment_gb(const VideoVolume& video, const GBParams& params) {
  params.validate();
  if (video.size() == 0) throw InvalidArgument("cannot segment an empty video");
  if (video.size() >= (std::size_t{1} << 32)) throw CapacityError("video exceeds 2^32 voxels");
  const FloatVideo smoothed = smooth(video, params.sigma);
  auto forest = felzenszwalb_merge(build_lattice_edges(smoothed), video.size(), params.k, params.min_size);
  LabelVolume out(video.geometry(), forest_labels(forest));
  check_partition(out, video.geometry());
  return out;
}

}  // namespace svx
