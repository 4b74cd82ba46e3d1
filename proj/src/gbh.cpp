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

#include "svx/gbh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svx/color.hpp"

namespace svx {

namespace {

int bin_of(double v, double lo, double hi, int bins) {
  const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
  return std::clamp(b, 0, bins - 1);
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void weigh_edges(RegionGraph& graph, const std::vector<std::uint64_t>& sorted_unique_pairs) {
  graph.edges.clear();
  graph.edges.reserve(sorted_unique_pairs.size());
  for (auto key : sorted_unique_pairs) {
    const auto a = static_cast<std::uint32_t>(key >> 32);
    const auto b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
    graph.edges.push_back({a, b, chi_squared(graph.nodes[a].histogram, graph.nodes[b].histogram)});
  }
  sort_edges(graph.edges);
}

}  // namespace

LabBins lab_bins(const Lab& c, int bins) {
  using namespace histogram_range;
  return {bin_of(c.l, kLMin, kLMax, bins), bin_of(c.a, kABMin, kABMax, bins), bin_of(c.b, kABMin, kABMax, bins)};
}

double chi_squared(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("chi_squared: bin counts differ (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double s = a[i] + b[i];
    if (s > 0.0) {
      const double d = a[i] - b[i];
      sum += d * d / s;
    }
  }
  return 0.5 * sum;
}

std::vector<double> normalize_histogram(std::span<const std::uint64_t> counts, std::uint64_t size, int bins) {
  std::vector<double> h(counts.size(), 0.0);
  if (size == 0) return h;
  const double inv = 1.0 / static_cast<double>(size);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < bins; ++i) {
      const std::size_t k = static_cast<std::size_t>(c) * bins + i;
      h[k] = static_cast<double>(counts[k]) * inv;
    }
  }
  return h;
}

RegionGraph build_region_graph(const LabVolume& lab, const LabelVolume& labels, int bins) {
  if (lab.geometry() != labels.geometry()) throw GeometryError("region graph: Lab and label geometry differ");
  if (bins < 1) throw InvalidArgument("histogram bins must be positive");
  const Geometry& g = labels.geometry();
  const std::uint32_t n = labels.num_labels();

  RegionGraph graph;
  graph.bins = bins;
  graph.nodes.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    graph.nodes[i].id = i;
    graph.nodes[i].counts.assign(3 * static_cast<std::size_t>(bins), 0);
  }
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto& node = graph.nodes[labels[v]];
    const LabBins b = lab_bins(lab[v], bins);
    ++node.size;
    ++node.counts[b.l];
    ++node.counts[bins + b.a];
    ++node.counts[2 * bins + b.b];
  }
  for (auto& node : graph.nodes) {
    if (node.size == 0) throw InvalidArgument("region graph: labels are not compact");
    node.histogram = normalize_histogram(node.counts, node.size, bins);
  }

  std::vector<std::uint64_t> pairs;
  for (int t = 0; t < g.frames; ++t) {
    for (const auto& o : kForwardOffsets) {
      if (t + o.dt >= g.frames) continue;
      for (int y = std::max(0, -o.dy); y < std::min(g.height, g.height - o.dy); ++y) {
        for (int x = std::max(0, -o.dx); x < std::min(g.width, g.width - o.dx); ++x) {
          const std::uint32_t a = labels.at(x, y, t);
          const std::uint32_t b = labels.at(x + o.dx, y + o.dy, t + o.dt);
          if (a != b) pairs.push_back(pair_key(a, b));
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  weigh_edges(graph, pairs);
  return graph;
}

RegionGraph aggregate_region_graph(const RegionGraph& fine, std::span<const std::uint32_t> coarse_of,
                                   std::uint32_t coarse_count) {
  if (coarse_of.size() != fine.nodes.size()) throw InvalidArgument("aggregate: node map size mismatch");
  RegionGraph coarse;
  coarse.bins = fine.bins;
  coarse.nodes.resize(coarse_count);
  for (std::uint32_t i = 0; i < coarse_count; ++i) {
    coarse.nodes[i].id = i;
    coarse.nodes[i].counts.assign(3 * static_cast<std::size_t>(fine.bins), 0);
  }
  for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
    auto& dst = coarse.nodes[coarse_of[i]];
    dst.size += fine.nodes[i].size;
    for (std::size_t k = 0; k < dst.counts.size(); ++k) dst.counts[k] += fine.nodes[i].counts[k];
  }
  for (auto& node : coarse.nodes) node.histogram = normalize_histogram(node.counts, node.size, coarse.bins);

  std::vector<std::uint64_t> pairs;
  pairs.reserve(fine.edges.size());
  for (const auto& e : fine.edges) {
    const auto a = coarse_of[e.a], b = coarse_of[e.b];
    if (a != b) pairs.push_back(pair_key(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  weigh_edges(coarse, pairs);
  return coarse;
}

std::vector<std::uint32_t> merge_level(const RegionGraph& graph, double k_level, double min_size_level,
                                       std::uint32_t* coarse_count) {
  std::vector<std::uint64_t> sizes(graph.nodes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) sizes[i] = graph.nodes[i].size;
  RegionForest forest(std::move(sizes));
  merge_sorted_edges<RegionEdge>(forest, graph.edges, k_level, min_size_level);
  return forest_labels(forest, coarse_count);
}

void GBHParams::validate() const {
  gb.validate();
  if (!(scale_factor > 1.0)) throw InvalidArgument("scale factor must exceed 1");
  if (num_levels < 1) throw InvalidArgument("levels must be at least 1");
  if (bins < 1) throw InvalidArgument("histogram bins must be positive");
}

double GBHParams::k_at(int level) const { return gb.k * std::pow(scale_factor, level); }
double GBHParams::min_size_at(int level) const { return gb.min_size * std::pow(scale_factor, level); }

std::vector<std::uint32_t> SegmentationHierarchy::region_counts() const {
  std::vector<std::uint32_t> counts;
  counts.reserve(levels.size());
  for (const auto& l : levels) counts.push_back(l.num_labels());
  return counts;
}

SegmentationHierarchy segment_gbh(const VideoVolume& video, const GBHParams& params) {
  params.validate();
  SegmentationHierarchy hier;
  hier.levels.push_back(segment_gb(video, params.gb));

  const LabVolume lab = rgb_to_lab(video);
  RegionGraph graph = build_region_graph(lab, hier.levels.back(), params.bins);
  for (int level = 1; level < params.num_levels && graph.nodes.size() > 1; ++level) {
    std::uint32_t count = 0;
    const auto coarse_of = merge_level(graph, params.k_at(level), params.min_size_at(level), &count);

    const auto& prev = hier.levels.back();
    std::vector<std::uint32_t> labels(prev.size());
    for (std::size_t v = 0; v < labels.size(); ++v) labels[v] = coarse_of[prev[v]];
    LabelVolume next(video.geometry(), std::move(labels));
    check_partition(next, video.geometry());
    hier.levels.push_back(std::move(next));

    graph = aggregate_region_graph(graph, coarse_of, count);
  }
  return hier;
}

std::size_t select_level_index(const SegmentationHierarchy& hierarchy, std::uint32_t target) {
  if (hierarchy.levels.empty()) throw InvalidArgument("select_level: empty hierarchy");
  std::size_t best = 0;
  std::uint64_t best_gap = ~std::uint64_t{0};
  for (std::size_t i = 0; i < hierarchy.levels.size(); ++i) {
    const std::int64_t n = hierarchy.levels[i].num_labels();
    const auto gap = static_cast<std::uint64_t>(std::llabs(n - static_cast<std::int64_t>(target)));
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

const LabelVolume& select_level(const SegmentationHierarchy& hierarchy, std::uint32_t target) {
  return hierarchy.levels[select_level_index(hierarchy, target)];
}

}  // namespace svx
