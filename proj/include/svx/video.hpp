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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svx/error.hpp"

namespace svx {

/// Width x height x frames of a voxel lattice. Voxels are stored frame-major,
/// then row-major, so index = (t * height + y) * width + x.
struct Geometry {
  int width = 0;
  int height = 0;
  int frames = 0;

  std::size_t frame_size() const { return static_cast<std::size_t>(width) * height; }
  std::size_t voxel_count() const { return frame_size() * static_cast<std::size_t>(frames); }
  std::size_t index(int x, int y, int t) const {
    return (static_cast<std::size_t>(t) * height + y) * width + x;
  }
  bool operator==(const Geometry&) const = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

struct Lab {
  float l = 0.f;
  float a = 0.f;
  float b = 0.f;
};

/// Immutable RGB video volume.
class VideoVolume {
 public:
  VideoVolume() = default;
  VideoVolume(Geometry geometry, std::vector<Rgb> voxels);

  const Geometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  int frames() const { return geometry_.frames; }
  std::size_t size() const { return voxels_.size(); }

  std::span<const Rgb> voxels() const { return voxels_; }
  std::span<const Rgb> frame(int t) const {
    return std::span<const Rgb>(voxels_).subspan(static_cast<std::size_t>(t) * geometry_.frame_size(),
                                                 geometry_.frame_size());
  }
  const Rgb& at(int x, int y, int t) const { return voxels_[geometry_.index(x, y, t)]; }

  /// Frames [first, first + count) as a new volume.
  VideoVolume slice(int first, int count) const;

  bool operator==(const VideoVolume&) const = default;

 private:
  Geometry geometry_;
  std::vector<Rgb> voxels_;
};

/// CIE Lab volume with the same geometry as the source video.
class LabVolume {
 public:
  LabVolume() = default;
  LabVolume(Geometry geometry, std::vector<Lab> voxels);

  const Geometry& geometry() const { return geometry_; }
  std::span<const Lab> voxels() const { return voxels_; }
  const Lab& operator[](std::size_t i) const { return voxels_[i]; }

 private:
  Geometry geometry_;
  std::vector<Lab> voxels_;
};

/// One label per voxel. `num_labels` is max label + 1; a volume produced by
/// the segmenters is additionally compact (every id below num_labels occurs).
class LabelVolume {
 public:
  LabelVolume() = default;
  LabelVolume(Geometry geometry, std::vector<std::uint32_t> labels);

  const Geometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  int frames() const { return geometry_.frames; }
  std::size_t size() const { return labels_.size(); }
  std::uint32_t num_labels() const { return num_labels_; }

  std::span<const std::uint32_t> labels() const { return labels_; }
  std::span<const std::uint32_t> frame(int t) const {
    return std::span<const std::uint32_t>(labels_).subspan(
        static_cast<std::size_t>(t) * geometry_.frame_size(), geometry_.frame_size());
  }
  std::uint32_t operator[](std::size_t i) const { return labels_[i]; }
  std::uint32_t at(int x, int y, int t) const { return labels_[geometry_.index(x, y, t)]; }

  /// True when every id in [0, num_labels) is used.
  bool is_compact() const;

  bool operator==(const LabelVolume&) const = default;

 private:
  Geometry geometry_;
  std::vector<std::uint32_t> labels_;
  std::uint32_t num_labels_ = 0;
};

/// Remaps labels to [0, n) in order of first occurrence in scan order.
LabelVolume compact_labels(const LabelVolume& labels);

/// Throws InvariantError unless `labels` is a compact partition of `geometry`.
void check_partition(const LabelVolume& labels, const Geometry& geometry);

/// Forward flow between consecutive frames; maps[t] displaces frame t to t + 1.
struct FlowMap {
  int width = 0;
  int height = 0;
  std::vector<float> u;
  std::vector<float> v;
  std::vector<std::uint8_t> valid;
};

struct FlowField {
  std::vector<FlowMap> maps;
};

/// Reserved groundtruth id for pixels no annotator labeled.
inline constexpr std::uint32_t kUnlabeled = 0xFFFFFFu;

/// One human annotation: a label map for each annotated frame, stored
/// contiguously in annotated-frame order.
struct Annotation {
  std::vector<std::uint32_t> labels;

  std::span<const std::uint32_t> frame(std::size_t slot, std::size_t frame_size) const {
    return std::span<const std::uint32_t>(labels).subspan(slot * frame_size, frame_size);
  }
};

class GroundTruthSet {
 public:
  GroundTruthSet() = default;
  /// `annotated_frames` must be sorted, unique and inside [0, geometry.frames).
  GroundTruthSet(Geometry geometry, std::vector<int> annotated_frames,
                 std::vector<Annotation> annotations);

  const Geometry& geometry() const { return geometry_; }
  const std::vector<int>& annotated_frames() const { return annotated_frames_; }
  const std::vector<Annotation>& annotations() const { return annotations_; }
  bool empty() const { return annotations_.empty(); }

 private:
  Geometry geometry_;
  std::vector<int> annotated_frames_;
  std::vector<Annotation> annotations_;
};

}  // namespace svx
