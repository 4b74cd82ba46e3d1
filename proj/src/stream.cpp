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

#include "svx/stream.hpp"

#include <algorithm>
#include <string>

#include "svx/color.hpp"
#include "svx/filter.hpp"

namespace svx {

namespace {

constexpr std::uint32_t kNone = 0xFFFFFFFFu;

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Distinct pairs of differing values among 26-neighbors of `labels` over
// `g`, as keys of (node_of[a], node_of[b]). In-frame pairs of frame 0 are
// skipped when `skip_first_frame`.
std::vector<std::uint64_t> adjacent_pairs(const Geometry& g, std::span<const std::uint32_t> node_of,
                                          bool skip_first_frame) {
  std::vector<std::uint64_t> pairs;
  for (int t = 0; t < g.frames; ++t) {
    for (const auto& o : kForwardOffsets) {
      if (t + o.dt >= g.frames) continue;
      if (o.dt == 0 && t == 0 && skip_first_frame) continue;
      for (int y = std::max(0, -o.dy); y < std::min(g.height, g.height - o.dy); ++y) {
        for (int x = std::max(0, -o.dx); x < std::min(g.width, g.width - o.dx); ++x) {
          const std::uint32_t a = node_of[g.index(x, y, t)];
          const std::uint32_t b = node_of[g.index(x + o.dx, y + o.dy, t + o.dt)];
          if (a != b) pairs.push_back(pair_key(a, b));
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace

StreamSegmenter::StreamSegmenter(GBHParams params, int window, FrameSink sink)
    : params_(std::move(params)), window_(window), sink_(std::move(sink)) {
  params_.validate();
  if (window_ < 1) throw InvalidArgument("streaming window must be at least 1 frame");
}

std::size_t StreamSegmenter::state_size() const {
  const std::size_t fs = static_cast<std::size_t>(width_) * height_;
  std::size_t records = 0;
  for (const auto& table : alive_) records += table.size();
  return (buffer_.size() + (has_carry_ ? 1 : 0)) * fs + records;
}

void StreamSegmenter::note_state(std::size_t voxels_held) {
  std::size_t records = 0;
  for (const auto& table : alive_) records += table.size();
  peak_state_ = std::max(peak_state_, voxels_held + records);
}

void StreamSegmenter::push(const PpmImage& frame) {
  if (frame.width < 1 || frame.height < 1) throw GeometryError("stream: empty frame");
  if (frames_emitted_ == 0 && buffer_.empty() && !has_carry_) {
    width_ = frame.width;
    height_ = frame.height;
  } else if (frame.width != width_ || frame.height != height_) {
    throw GeometryError("stream: frame " + std::to_string(frames_emitted_ + buffer_.size()) +
                        " has a different size");
  }
  buffer_.push_back(frame);
  note_state((buffer_.size() + (has_carry_ ? 1 : 0)) * static_cast<std::size_t>(width_) * height_);
  if (static_cast<int>(buffer_.size()) == window_) process_window();
}

void StreamSegmenter::finish() {
  if (!buffer_.empty()) process_window();
}

void StreamSegmenter::process_window() {
  const int n = static_cast<int>(buffer_.size());
  const std::size_t fs = static_cast<std::size_t>(width_) * height_;
  const int carry = has_carry_ ? 1 : 0;
  const Geometry block{width_, height_, carry + n};
  const std::size_t held = carry * fs;  // carried-frame voxels, first in the block
  const std::size_t total = block.voxel_count();
  if (total >= (std::size_t{1} << 32)) throw CapacityError("stream: window exceeds 2^32 voxels");
  note_state(total);

  const int bins = params_.bins;
  const bool first_window = num_levels_ == 0;
  const int max_levels = first_window ? params_.num_levels : num_levels_;

  FloatVideo ext{block, std::vector<float>(total), std::vector<float>(total), std::vector<float>(total)};
  if (has_carry_) {
    std::copy(carry_r_.begin(), carry_r_.end(), ext.r.begin());
    std::copy(carry_g_.begin(), carry_g_.end(), ext.g.begin());
    std::copy(carry_b_.begin(), carry_b_.end(), ext.b.begin());
  }
  std::vector<LabBins> voxel_bins(total - held);
  for (int f = 0; f < n; ++f) {
    const std::size_t off = held + f * fs;
    smooth_frame(buffer_[f].pixels, width_, height_, params_.gb.sigma, ext.r.data() + off, ext.g.data() + off,
                 ext.b.data() + off);
    for (std::size_t i = 0; i < fs; ++i) voxel_bins[f * fs + i] = lab_bins(rgb_to_lab(buffer_[f].pixels[i]), bins);
  }

  std::vector<std::vector<std::uint32_t>> labels;
  std::vector<StatsTable> block_stats;

  // Accumulates window voxels of `level_labels` into `stats`, which already
  // holds the carried regions, and records Int from the forest roots.
  auto accumulate = [&](const std::vector<std::uint32_t>& level_labels, StatsTable stats,
                        RegionForest& forest, std::span<const std::uint32_t> node_of) {
    for (std::size_t v = held; v < total; ++v) {
      auto& s = stats[level_labels[v]];
      if (s.counts.empty()) s.counts.assign(3 * static_cast<std::size_t>(bins), 0);
      const LabBins& b = voxel_bins[v - held];
      ++s.size;
      ++s.counts[b.l];
      ++s.counts[bins + b.a];
      ++s.counts[2 * bins + b.b];
      s.internal = forest.internal(forest.find(node_of.empty() ? static_cast<std::uint32_t>(v) : node_of[v]));
    }
    return stats;
  };

  // ---- level 0: voxel lattice ----
  {
    auto edges = build_lattice_edges(ext, has_carry_);
    sort_edges(edges);

    std::vector<std::uint64_t> sizes(total, 1);
    std::unordered_map<std::uint32_t, std::uint32_t> rep;  // carried id -> representative pixel
    for (std::size_t p = 0; p < held; ++p) {
      const std::uint32_t id = carry_labels_[0][p];
      auto [it, inserted] = rep.try_emplace(id, static_cast<std::uint32_t>(p));
      sizes[p] = inserted ? alive_[0].at(id).size : 0;
    }
    RegionForest forest(std::move(sizes));
    for (std::size_t p = 0; p < held; ++p) {
      const std::uint32_t r = forest.find(rep.at(carry_labels_[0][p]));
      const std::uint32_t q = forest.find(static_cast<std::uint32_t>(p));
      if (r != q) forest.join(r, q);
    }
    std::vector<std::uint32_t> root_label(total, kNone);
    for (const auto& [id, pixel] : rep) {
      const std::uint32_t r = forest.find(pixel);
      forest.set_internal(r, alive_[0].at(id).internal);
      forest.set_carried(r);
    }

    merge_sorted_edges<LatticeEdge>(forest, edges, params_.k_at(0), params_.min_size_at(0));

    for (const auto& [id, pixel] : rep) root_label[forest.find(pixel)] = id;
    if (next_id_.empty()) next_id_.assign(1, 0);
    std::vector<std::uint32_t> level(total);
    for (std::size_t p = 0; p < held; ++p) level[p] = carry_labels_[0][p];
    for (std::size_t v = held; v < total; ++v) {
      auto& l = root_label[forest.find(static_cast<std::uint32_t>(v))];
      if (l == kNone) l = next_id_[0]++;
      level[v] = l;
    }
    block_stats.push_back(accumulate(level, has_carry_ ? alive_[0] : StatsTable{}, forest, {}));
    labels.push_back(std::move(level));
  }

  // ---- levels 1..: region graphs over the previous level ----
  for (int lv = 1; lv < max_levels; ++lv) {
    const auto& prev = labels[lv - 1];
    const auto& prev_stats = block_stats[lv - 1];

    std::vector<std::uint32_t> ids(prev.begin(), prev.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (first_window && ids.size() <= 1) break;

    std::unordered_map<std::uint32_t, std::uint32_t> local;
    local.reserve(ids.size());
    for (std::uint32_t i = 0; i < ids.size(); ++i) local.emplace(ids[i], i);
    std::vector<std::uint32_t> node_of(total);
    for (std::size_t v = 0; v < total; ++v) node_of[v] = local.at(prev[v]);

    // Carried children grouped under their carried parent.
    std::unordered_map<std::uint32_t, std::uint32_t> parent_rep;  // parent id -> representative node
    std::vector<std::uint32_t> parent_of(ids.size(), kNone);
    for (std::size_t p = 0; p < held; ++p) parent_of[node_of[p]] = carry_labels_[lv][p];

    std::vector<std::uint64_t> sizes(ids.size());
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
      const auto& s = prev_stats.at(ids[i]);
      if (parent_of[i] == kNone) {
        sizes[i] = s.size;
        continue;
      }
      // Only this window's growth of the child adds to the parent's record.
      const std::uint64_t growth = s.size - alive_[lv - 1].at(ids[i]).size;
      auto [it, inserted] = parent_rep.try_emplace(parent_of[i], i);
      if (inserted) sizes[i] = alive_[lv].at(parent_of[i]).size;
      sizes[it->second] += growth;
      if (!inserted) sizes[i] = 0;
    }

    RegionGraph graph;
    graph.bins = bins;
    graph.nodes.resize(ids.size());
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
      const auto& s = prev_stats.at(ids[i]);
      graph.nodes[i].id = i;
      graph.nodes[i].size = s.size;
      graph.nodes[i].histogram = normalize_histogram(s.counts, s.size, bins);
    }
    for (auto key : adjacent_pairs(block, node_of, has_carry_)) {
      const auto a = static_cast<std::uint32_t>(key >> 32);
      const auto b = static_cast<std::uint32_t>(key & 0xFFFFFFFFu);
      graph.edges.push_back({a, b, chi_squared(graph.nodes[a].histogram, graph.nodes[b].histogram)});
    }
    sort_edges(graph.edges);

    RegionForest forest(std::move(sizes));
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
      if (parent_of[i] == kNone) continue;
      const std::uint32_t r = forest.find(parent_rep.at(parent_of[i]));
      const std::uint32_t q = forest.find(i);
      if (r != q) forest.join(r, q);
    }
    std::vector<std::uint32_t> root_label(ids.size(), kNone);
    for (const auto& [parent, node] : parent_rep) {
      const std::uint32_t r = forest.find(node);
      forest.set_internal(r, alive_[lv].at(parent).internal);
      forest.set_carried(r);
    }

    merge_sorted_edges<RegionEdge>(forest, graph.edges, params_.k_at(lv), params_.min_size_at(lv));

    for (const auto& [parent, node] : parent_rep) root_label[forest.find(node)] = parent;
    if (static_cast<int>(next_id_.size()) <= lv) next_id_.resize(lv + 1, 0);
    std::vector<std::uint32_t> level(total);
    for (std::size_t p = 0; p < held; ++p) level[p] = carry_labels_[lv][p];
    for (std::size_t v = held; v < total; ++v) {
      auto& l = root_label[forest.find(node_of[v])];
      if (l == kNone) l = next_id_[lv]++;
      level[v] = l;
    }
    block_stats.push_back(accumulate(level, has_carry_ ? alive_[lv] : StatsTable{}, forest, node_of));
    labels.push_back(std::move(level));
  }

  if (first_window) num_levels_ = static_cast<int>(labels.size());

  // Emit the window's frames; the carried frame was emitted by the previous window.
  std::vector<std::span<const std::uint32_t>> frame_levels(num_levels_);
  for (int f = 0; f < n; ++f) {
    const std::size_t off = held + f * fs;
    for (int lv = 0; lv < num_levels_; ++lv) frame_levels[lv] = std::span<const std::uint32_t>(labels[lv]).subspan(off, fs);
    if (sink_) sink_(frames_emitted_, frame_levels);
    ++frames_emitted_;
  }

  // The window's last frame becomes the carried frame.
  const std::size_t last = held + static_cast<std::size_t>(n - 1) * fs;
  carry_r_.assign(ext.r.begin() + last, ext.r.begin() + last + fs);
  carry_g_.assign(ext.g.begin() + last, ext.g.begin() + last + fs);
  carry_b_.assign(ext.b.begin() + last, ext.b.begin() + last + fs);
  carry_labels_.assign(num_levels_, {});
  alive_.assign(num_levels_, {});
  for (int lv = 0; lv < num_levels_; ++lv) {
    carry_labels_[lv].assign(labels[lv].begin() + last, labels[lv].begin() + last + fs);
    for (auto id : carry_labels_[lv]) {
      if (!alive_[lv].contains(id)) alive_[lv].emplace(id, std::move(block_stats[lv].at(id)));
    }
  }
  has_carry_ = true;
  buffer_.clear();
}

std::size_t segment_stream(FrameSource& source, const GBHParams& params, int window, const FrameSink& sink) {
  StreamSegmenter seg(params, window, sink);
  while (auto frame = source.next()) seg.push(*frame);
  if (seg.frames_emitted() == 0 && seg.state_size() == 0) throw InvalidArgument("stream: empty source");
  seg.finish();
  return seg.peak_state_size();
}

SegmentationHierarchy segment_stream(FrameSource& source, const GBHParams& params, int window,
                                     std::size_t* peak_state_size) {
  std::vector<std::vector<std::uint32_t>> collected;
  int width = 0, height = 0, frames = 0;
  auto sink = [&](int, const std::vector<std::span<const std::uint32_t>>& levels) {
    if (collected.empty()) collected.resize(levels.size());
    for (std::size_t lv = 0; lv < levels.size(); ++lv) {
      collected[lv].insert(collected[lv].end(), levels[lv].begin(), levels[lv].end());
    }
    ++frames;
  };
  // Geometry is taken from the first frame through a peeking source.
  struct Peek : FrameSource {
    FrameSource& inner;
    int* w;
    int* h;
    Peek(FrameSource& s, int* w_, int* h_) : inner(s), w(w_), h(h_) {}
    std::optional<PpmImage> next() override {
      auto f = inner.next();
      if (f && *w == 0) {
        *w = f->width;
        *h = f->height;
      }
      return f;
    }
  } peek(source, &width, &height);

  const std::size_t peak = segment_stream(peek, params, window, sink);
  if (peak_state_size) *peak_state_size = peak;

  SegmentationHierarchy hier;
  for (auto& level : collected) {
    LabelVolume lv({width, height, frames}, std::move(level));
    check_partition(lv, {width, height, frames});
    hier.levels.push_back(std::move(lv));
  }
  return hier;
}

}  // namespace svx
