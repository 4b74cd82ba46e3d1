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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svx/gbh.hpp"
#include "svx/metrics.hpp"
#include "svx/video.hpp"

namespace svx {

enum class Method { kGB, kGBH, kStreamGBH };
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// spv: supervoxels per video; spf: mean distinct supervoxels per frame.
enum class Basis { kSpv, kSpf };
std::string_view basis_name(Basis b);
Basis parse_basis(std::string_view name);

/// One video of a dataset. Groundtruth and flow are optional; metrics that
/// need a missing input are skipped for that video.
struct VideoEntry {
  std::string id;
  VideoVolume video;
  std::optional<GroundTruthSet> groundtruth;
  std::optional<FlowField> flow;
};

struct SweepConfig {
  Method method = Method::kGBH;
  /// One run per grid point. For gb only `.gb` is used; the hierarchical
  /// methods report every level of each run.
  std::vector<GBHParams> grid;
  int window = 10;
  std::vector<Metric> metrics;
};

struct SweepResult {
  LabelVolume labels;
  MetricReport report;
};

struct SweepError {
  std::size_t grid_point;
  std::string message;
};

struct SweepOutput {
  std::vector<SweepResult> results;  ///< one per distinct supervoxel count, first occurrence kept
  std::vector<SweepError> errors;
};

/// Runs the method over the grid. A failing grid point is recorded in
/// `errors` and the sweep continues. Empty grid throws InvalidArgument.
SweepOutput sweep(const VideoEntry& entry, const SweepConfig& config);

/// Parameter string stored in the reports, e.g. "k=100;min_size=20;sigma=0.8".
std::string describe_params(Method method, const GBHParams& params, int window);

/// (count, score) samples, counts strictly increasing.
struct MetricCurve {
  Metric metric = Metric::kUE3D;
  Basis basis = Basis::kSpv;
  std::vector<std::pair<double, double>> points;
};

/// Curve of one metric over a video's reports. Reports without the score are
/// skipped; on equal counts the first report wins.
MetricCurve make_curve(std::span<const MetricReport> reports, Metric metric, Basis basis);

/// Piecewise-linear value at `count`; nullopt outside the sampled range.
/// Throws InvalidArgument for curves with fewer than two points.
std::optional<double> interpolate(const MetricCurve& curve, double count);

struct DatasetAggregate {
  Metric metric = Metric::kUE3D;
  Basis basis = Basis::kSpv;
  std::vector<double> grid;
  std::vector<std::optional<double>> score;  ///< mean over contributors; nullopt when none
  std::vector<int> contributors;
};

/// Mean of the in-range interpolated scores at every grid point. Curves with
/// fewer than two points are ignored.
DatasetAggregate aggregate(std::span<const MetricCurve> curves, std::span<const double> grid);

/// spv: 100, 200, ..., 2000. spf: 20 log-spaced points from 10 to 1500.
std::vector<double> default_grid(Basis basis);

/// Columns: metric,basis,count,score,contributors (score empty without contributors).
void write_aggregate_csv(std::span<const DatasetAggregate> aggregates, const std::filesystem::path& path);
std::string aggregate_csv(std::span<const DatasetAggregate> aggregates);

/// Columns: video,method,params,level,num_supervoxels,supervoxels_per_frame,
/// ue3d,sa3d,brd,lc,ev,msv,tex (missing scores empty).
void write_reports_csv(std::span<const MetricReport> reports, const std::filesystem::path& path);
std::string reports_csv(std::span<const MetricReport> reports);

/// Manifest line: `<id> frames=DIR [gt=DIR[,DIR...]] [flow=DIR] [annotated=i,j,...]`.
/// Blank lines and lines starting with '#' are ignored; relative paths are
/// resolved against the manifest's directory.
struct ManifestEntry {
  std::string id;
  std::filesystem::path frames;
  std::vector<std::filesystem::path> groundtruth;
  std::optional<std::filesystem::path> flow;
  std::vector<int> annotated_frames;  ///< empty = every frame
};

/// Throws FormatError naming the line; an empty manifest is an error.
std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& file);
VideoEntry load_entry(const ManifestEntry& entry);

struct DatasetResult {
  std::vector<std::vector<MetricReport>> reports;  ///< per video, manifest order
  std::vector<std::pair<std::string, SweepError>> errors;
  std::vector<DatasetAggregate> aggregates;  ///< one per metric in config order
};

/// Loads, sweeps and aggregates every video. `jobs` videos run concurrently;
/// the result does not depend on it.
DatasetResult run_dataset(std::span<const ManifestEntry> manifest, const SweepConfig& config, Basis basis,
                          std::span<const double> grid, int jobs);

/// One toy configuration of a single 8x8 groundtruth square on a 20x20 frame.
struct ToyCase {
  std::string name;
  double ue3d = 0, sa3d = 0, brd = 0;
  double expected_ue3d = 0, expected_sa3d = 0, expected_brd = 0;
  bool pass = false;
};

struct ToyScene {
  LabelVolume supervoxels;
  GroundTruthSet groundtruth;
};

/// Configurations a..e: four 4x4 tiles; four 6x6 tiles centered on the
/// corners; a with the lower-left tile moved 2 px left; four 6x6 tiles
/// extending each quadrant by 2 px outward; one 8x8 tile shifted 2 px right.
/// The rest of the frame is split into four quadrant fillers.
ToyScene toy_scene(char configuration);

/// Metric values against values obtained by direct enumeration; tolerance 1e-9.
std::vector<ToyCase> toy_oracle();

}  // namespace svx
