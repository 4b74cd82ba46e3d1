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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svx/video.hpp"

namespace svx {

/// Overlap counts between supervoxels and the groundtruth segments of one
/// annotation, restricted to annotated frames.
struct OverlapTable {
  std::uint32_t num_supervoxels = 0;
  std::uint32_t num_segments = 0;
  std::vector<std::uint32_t> segment_ids;      ///< original groundtruth id per segment column
  std::vector<std::uint64_t> overlap;          ///< [sv * num_segments + seg] = Vol(s ∩ g)
  std::vector<std::uint64_t> supervoxel_volume;  ///< Vol(s), unlabeled voxels included
  std::vector<std::uint64_t> labeled_volume;   ///< sum over segments of Vol(s ∩ g)
  std::vector<std::uint64_t> segment_volume;   ///< Vol(g)

  std::uint64_t at(std::uint32_t sv, std::uint32_t seg) const {
    return overlap[static_cast<std::size_t>(sv) * num_segments + seg];
  }
};

OverlapTable overlap_table(const LabelVolume& labels, const GroundTruthSet& gt, std::size_t annotation);

/// 3D undersegmentation error of one annotation: mean over segments of
/// (total volume of supervoxels touching g - Vol(g)) / Vol(g).
double ue3d(const OverlapTable& table);
/// 3D segmentation accuracy of one annotation: mean over segments of the
/// fraction of g covered by supervoxels that overlap g at least as much as
/// all other labeled segments together.
double sa3d(const OverlapTable& table);

/// Means over all annotations.
double ue3d(const LabelVolume& labels, const GroundTruthSet& gt);
double sa3d(const LabelVolume& labels, const GroundTruthSet& gt);

/// 1 where some 4-neighbor inside the frame carries a different label.
std::vector<std::uint8_t> boundary_map(std::span<const std::uint32_t> frame, int width, int height);

/// Exact Euclidean distance from every pixel to the nearest set pixel of
/// `mask`; +inf everywhere when the mask is empty.
std::vector<double> distance_transform(std::span<const std::uint8_t> mask, int width, int height);

/// Boundary recall distance, mean over annotations. Per annotation: mean over
/// groundtruth boundary pixels of all annotated frames of the distance to the
/// nearest supervoxel boundary pixel of the same frame. A frame without
/// supervoxel boundaries charges the frame diagonal per groundtruth boundary
/// pixel; no groundtruth boundary at all scores 0.
double brd(const LabelVolume& labels, const GroundTruthSet& gt);

/// Label consistency under forward flow: fraction of valid-flow source
/// pixels whose rounded, clamped destination keeps their label. 1 when no
/// pixel is projected.
double lc(const LabelVolume& labels, const FlowField& flow);

/// Explained variation of the RGB signal; 1 for a constant video.
double ev(const VideoVolume& video, const LabelVolume& labels);

/// Mean over supervoxels of the sample standard deviation of per-frame slice
/// sizes (frames where the supervoxel is present; one-frame supervoxels give 0).
double msv(const LabelVolume& labels);

/// Mean fraction of the video's frames each supervoxel is present in.
double tex(const LabelVolume& labels);

/// Mean number of distinct labels per frame.
double supervoxels_per_frame(const LabelVolume& labels);

enum class Metric { kUE3D, kSA3D, kBRD, kLC, kEV, kMSV, kTEX };
inline constexpr std::array<Metric, 7> kAllMetrics = {Metric::kUE3D, Metric::kSA3D, Metric::kBRD, Metric::kLC,
                                                      Metric::kEV,   Metric::kMSV,  Metric::kTEX};

std::string_view metric_name(Metric m);
/// Case-insensitive; throws InvalidArgument for unknown names.
Metric parse_metric(std::string_view name);
std::vector<Metric> parse_metric_list(std::string_view comma_separated);
bool needs_groundtruth(Metric m);

struct MetricReport {
  std::string video;
  std::string method;
  std::string params;
  int level = 0;
  std::uint32_t num_supervoxels = 0;
  double supervoxels_per_frame = 0.0;
  std::array<std::optional<double>, 7> scores;

  std::optional<double> score(Metric m) const { return scores[static_cast<std::size_t>(m)]; }
};

/// Computes `metrics` for one labeling and checks every score's range
/// (InvariantError otherwise). Groundtruth / flow metrics require their input.
MetricReport evaluate(const VideoVolume& video, const LabelVolume& labels, const GroundTruthSet* gt,
                      const FlowField* flow, std::span<const Metric> metrics);

}  // namespace svx
