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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svx/video.hpp"

namespace svx {

namespace fs = std::filesystem;

/// One decoded binary PPM (P6, maxval 255) image.
struct PpmImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;
};

PpmImage read_ppm(const fs::path& file);
void write_ppm(const fs::path& file, const PpmImage& image);

/// Regular files with a .ppm extension, in lexicographic filename order.
std::vector<fs::path> list_frames(const fs::path& directory);

/// Reads every frame of `directory`. Fails on the first malformed frame
/// without returning a partial volume.
VideoVolume load_video(const fs::path& directory);

/// Writes one PPM per frame (00000.ppm, 00001.ppm, ...). Creates the directory.
void save_video(const VideoVolume& video, const fs::path& directory);

/// Label ids are stored bit-exactly as id = R + 256 G + 65536 B.
Rgb encode_label(std::uint32_t id);
std::uint32_t decode_label(Rgb pixel);
inline constexpr std::uint32_t kMaxEncodableLabels = 1u << 24;

void save_labels(const LabelVolume& labels, const fs::path& directory);
LabelVolume load_labels(const fs::path& directory);

/// Middlebury .flo: float 202021.25, int32 width, int32 height, then u,v
/// interleaved little-endian float32 rows.
inline constexpr float kFlowMagic = 202021.25f;
inline constexpr float kFlowSentinel = 1e9f;

FlowMap read_flow(const fs::path& file);
void write_flow(const fs::path& file, const FlowMap& map);
FlowField load_flow(const std::vector<fs::path>& files);
/// All .flo files of a directory in lexicographic order.
FlowField load_flow_directory(const fs::path& directory);

/// Reads annotation directories (label-encoded PPM frames, one per annotated
/// frame). When `annotated_frames` is empty every annotation must be dense.
GroundTruthSet load_groundtruth(const std::vector<fs::path>& directories,
                                const Geometry& video_geometry,
                                std::vector<int> annotated_frames = {});

void save_annotation(const GroundTruthSet& gt, std::size_t annotation, const fs::path& directory);

/// Pull-style frame supplier used by the streaming segmenter.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// Next frame, or nullopt once exhausted. All frames share one size.
  virtual std::optional<PpmImage> next() = 0;
};

/// Reads frames from a directory one at a time, on demand.
class DirectoryFrameSource : public FrameSource {
 public:
  explicit DirectoryFrameSource(const fs::path& directory);
  std::optional<PpmImage> next() override;
  std::size_t frame_count() const { return files_.size(); }

 private:
  std::vector<fs::path> files_;
  std::size_t cursor_ = 0;
};

/// Serves frames of an in-memory volume; used in tests and benchmarks.
class VolumeFrameSource : public FrameSource {
 public:
  explicit VolumeFrameSource(const VideoVolume& video) : video_(video) {}
  std::optional<PpmImage> next() override;

 private:
  const VideoVolume& video_;
  int cursor_ = 0;
};

}  // namespace svx
