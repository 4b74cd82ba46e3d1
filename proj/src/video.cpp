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

#include "svx/video.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace svx {

namespace {

void check_geometry(const Geometry& g, std::size_t count, const char* what) {
  if (g.width < 0 || g.height < 0 || g.frames < 0) {
    throw GeometryError(std::string(what) + ": negative dimension");
  }
  if (g.voxel_count() != count) {
    throw GeometryError(std::string(what) + ": voxel count " + std::to_string(count) +
                        " does not match " + std::to_string(g.width) + "x" +
                        std::to_string(g.height) + "x" + std::to_string(g.frames));
  }
}

}  // namespace

VideoVolume::VideoVolume(Geometry geometry, std::vector<Rgb> voxels)
    : geometry_(geometry), voxels_(std::move(voxels)) {
  check_geometry(geometry_, voxels_.size(), "VideoVolume");
}

VideoVolume VideoVolume::slice(int first, int count) const {
  if (first < 0 || count < 0 || first + count > geometry_.frames) {
    throw InvalidArgument("VideoVolume::slice: frame range out of bounds");
  }
  const std::size_t fs = geometry_.frame_size();
  std::vector<Rgb> out(voxels_.begin() + static_cast<std::ptrdiff_t>(first * fs),
                       voxels_.begin() + static_cast<std::ptrdiff_t>((first + count) * fs));
  return VideoVolume({geometry_.width, geometry_.height, count}, std::move(out));
}

LabVolume::LabVolume(Geometry geometry, std::vector<Lab> voxels)
    : geometry_(geometry), voxels_(std::move(voxels)) {
  check_geometry(geometry_, voxels_.size(), "LabVolume");
}

LabelVolume::LabelVolume(Geometry geometry, std::vector<std::uint32_t> labels)
    : geometry_(geometry), labels_(std::move(labels)) {
  check_geometry(geometry_, labels_.size(), "LabelVolume");
  if (!labels_.empty()) {
    num_labels_ = *std::max_element(labels_.begin(), labels_.end()) + 1;
  }
}

bool LabelVolume::is_compact() const {
  std::vector<bool> seen(num_labels_, false);
  std::uint32_t distinct = 0;
  for (auto l : labels_) {
    if (!seen[l]) {
      seen[l] = true;
      ++distinct;
    }
  }
  return distinct == num_labels_;
}

LabelVolume compact_labels(const LabelVolume& labels) {
  std::vector<std::uint32_t> out(labels.size());
  std::uint32_t next = 0;
  // Dense lookup when the id range is small, hash map otherwise.
  if (labels.num_labels() <= 4 * labels.size() + 1024) {
    constexpr std::uint32_t kNone = 0xFFFFFFFFu;
    std::vector<std::uint32_t> remap(labels.num_labels(), kNone);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto& r = remap[labels[i]];
      if (r == kNone) r = next++;
      out[i] = r;
    }
  } else {
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, inserted] = remap.try_emplace(labels[i], next);
      if (inserted) ++next;
      out[i] = it->second;
    }
  }
  return LabelVolume(labels.geometry(), std::move(out));
}

void check_partition(const LabelVolume& labels, const Geometry& geometry) {
  if (labels.geometry() != geometry) {
    throw InvariantError("labeling geometry differs from its video");
  }
  if (!labels.is_compact()) {
    throw InvariantError("labeling is not compact");
  }
}

GroundTruthSet::GroundTruthSet(Geometry geometry, std::vector<int> annotated_frames,
                               std::vector<Annotation> annotations)
    : geometry_(geometry),
      annotated_frames_(std::move(annotated_frames)),
      annotations_(std::move(annotations)) {
  for (std::size_t i = 0; i < annotated_frames_.size(); ++i) {
    const int t = annotated_frames_[i];
    if (t < 0 || t >= geometry_.frames) {
      throw GeometryError("groundtruth: annotated frame " + std::to_string(t) + " outside video");
    }
    if (i > 0 && annotated_frames_[i - 1] >= t) {
      throw InvalidArgument("groundtruth: annotated frames must be sorted and unique");
    }
  }
  const std::size_t expected = annotated_frames_.size() * geometry_.frame_size();
  for (std::size_t a = 0; a < annotations_.size(); ++a) {
    const auto& labels = annotations_[a].labels;
    if (labels.size() != expected) {
      throw GeometryError("groundtruth: annotation " + std::to_string(a) +
                          " does not cover every annotated frame");
    }
    if (std::all_of(labels.begin(), labels.end(), [](auto l) { return l == kUnlabeled; })) {
      throw InvalidArgument("groundtruth: annotation " + std::to_string(a) +
                            " has no labeled segment");
    }
  }
}

}  // namespace svx
