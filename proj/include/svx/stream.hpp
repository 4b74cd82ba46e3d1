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
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "svx/gbh.hpp"
#include "svx/io.hpp"

namespace svx {

/// Receives the labels of one frame at every hierarchy level, in frame order.
/// `levels[l]` holds width * height ids. Emitted labels are final.
using FrameSink = std::function<void(int frame, const std::vector<std::span<const std::uint32_t>>& levels)>;

/// Streaming hierarchical segmenter. Frames are consumed in windows of
/// `window` frames; each window is segmented together with the final frame
/// of the previous window, whose regions enter as carried nodes with their
/// accumulated size, histogram and Int. New voxels may join a carried
/// region; two carried regions never merge, so emitted labels never change.
class StreamSegmenter {
 public:
  StreamSegmenter(GBHParams params, int window, FrameSink sink);

  void push(const PpmImage& frame);
  /// Segments any buffered partial window.
  void finish();

  int frames_emitted() const { return frames_emitted_; }
  /// Hierarchy depth; known after the first window (0 before).
  int num_levels() const { return num_levels_; }

  /// Voxels held (buffered window plus carried frame) plus carried region records.
  std::size_t state_size() const;
  std::size_t peak_state_size() const { return peak_state_; }

 private:
  struct RegionStats {
    std::uint64_t size = 0;
    double internal = 0.0;
    std::vector<std::uint64_t> counts;
  };
  using StatsTable = std::unordered_map<std::uint32_t, RegionStats>;

  void process_window();
  void note_state(std::size_t voxels_held);

  GBHParams params_;
  int window_;
  FrameSink sink_;

  int width_ = 0, height_ = 0;
  std::vector<PpmImage> buffer_;

  bool has_carry_ = false;
  std::vector<float> carry_r_, carry_g_, carry_b_;
  std::vector<std::vector<std::uint32_t>> carry_labels_;  // per level, one frame
  std::vector<StatsTable> alive_;                         // per level, regions in the carried frame
  std::vector<std::uint32_t> next_id_;                    // per level

  int num_levels_ = 0;
  int frames_emitted_ = 0;
  std::size_t peak_state_ = 0;
};

/// Runs the streaming segmenter over `source`, forwarding frames to `sink`.
/// Returns the peak state size. Throws InvalidArgument on an empty source.
std::size_t segment_stream(FrameSource& source, const GBHParams& params, int window, const FrameSink& sink);

/// Convenience: collects the emitted frames into a full hierarchy.
SegmentationHierarchy segment_stream(FrameSource& source, const GBHParams& params, int window,
                                     std::size_t* peak_state_size = nullptr);

}  // namespace svx
