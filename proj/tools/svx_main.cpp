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

// svx: segment videos into supervoxels, evaluate labelings, run benchmark sweeps.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svx/bench.hpp"
#include "svx/gb.hpp"
#include "svx/gbh.hpp"
#include "svx/io.hpp"
#include "svx/metrics.hpp"
#include "svx/render.hpp"
#include "svx/stream.hpp"
#include "svx/synth.hpp"

namespace fs = std::filesystem;
using namespace svx;

namespace {

enum Exit { kOk = 0, kBadArgs = 1, kIoFailure = 2, kInvariant = 3 };

struct SegmentOptions {
  std::string method = "gbh";
  std::string input, output;
  GBHParams params;
  int window = 10;
};

struct EvalOptions {
  std::string seg, video, flow, csv, metrics, annotated;
  std::vector<std::string> gt;
};

struct SweepOptions {
  std::string manifest, method = "gbh", basis = "spv", csv, reports, metrics = "all";
  std::vector<double> k{100}, min_size{20}, grid;
  GBHParams params;
  int window = 10, jobs = 0;
};

struct RenderOptions {
  std::string seg, output;
};

struct SynthOptions {
  std::string output;
  MovingSquareSpec spec;
};

void add_hierarchy_flags(CLI::App* app, GBHParams& p) {
  app->add_option("--scale-factor", p.scale_factor, "Per-level factor applied to k and min size")
      ->capture_default_str();
  app->add_option("--levels", p.num_levels, "Maximum number of hierarchy levels")->capture_default_str();
  app->add_option("--bins", p.bins, "Lab histogram bins per channel")->capture_default_str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || v < 0) throw InvalidArgument("bad frame index '" + item + "'");
    out.push_back(v);
  }
  return out;
}

fs::path level_dir(const fs::path& root, std::size_t level) {
  char name[32];
  std::snprintf(name, sizeof name, "level_%02zu", level);
  return root / name;
}

fs::path frame_file(const fs::path& dir, int t, const char* ext) {
  char name[32];
  std::snprintf(name, sizeof name, "%05d.%s", t, ext);
  return dir / name;
}

// Remembers the frame size seen by the streaming segmenter.
class SizedSource : public FrameSource {
 public:
  explicit SizedSource(FrameSource& inner) : inner_(inner) {}
  std::optional<PpmImage> next() override {
    auto img = inner_.next();
    if (img && width == 0) {
      width = img->width;
      height = img->height;
    }
    return img;
  }
  int width = 0, height = 0;

 private:
  FrameSource& inner_;
};

int run_segment(const SegmentOptions& o) {
  const Method method = parse_method(o.method);
  o.params.validate();
  if (o.window < 1) throw InvalidArgument("--window must be >= 1");
  const fs::path out = o.output;

  if (method == Method::kGB) {
    const LabelVolume labels = segment_gb(load_video(o.input), o.params.gb);
    save_labels(labels, out);
    std::printf("level 0: %u supervoxels\n", labels.num_labels());
    return kOk;
  }
  if (method == Method::kGBH) {
    const SegmentationHierarchy h = segment_gbh(load_video(o.input), o.params);
    for (std::size_t l = 0; l < h.levels.size(); ++l) {
      save_labels(h.levels[l], level_dir(out, l));
      std::printf("level %zu: %u supervoxels\n", l, h.levels[l].num_labels());
    }
    return kOk;
  }

  // Streaming: frames are read lazily and written as soon as they are final.
  DirectoryFrameSource directory(o.input);
  SizedSource source(directory);
  std::vector<std::uint32_t> counts;
  const FrameSink sink = [&](int t, const std::vector<std::span<const std::uint32_t>>& levels) {
    if (counts.empty()) {
      counts.assign(levels.size(), 0);
      for (std::size_t l = 0; l < levels.size(); ++l) fs::create_directories(level_dir(out, l));
    }
    for (std::size_t l = 0; l < levels.size(); ++l) {
      PpmImage img;
      img.width = source.width;
      img.height = source.height;
      img.pixels.reserve(levels[l].size());
      for (auto id : levels[l]) {
        if (id >= kMaxEncodableLabels) throw CapacityError("label id exceeds the 24-bit encoding");
        img.pixels.push_back(encode_label(id));
        counts[l] = std::max(counts[l], id + 1);
      }
      write_ppm(frame_file(level_dir(out, l), t, "ppm"), img);
    }
  };
  const std::size_t peak = segment_stream(source, o.params, o.window, sink);
  for (std::size_t l = 0; l < counts.size(); ++l) std::printf("level %zu: %u supervoxels\n", l, counts[l]);
  std::printf("peak state: %zu\n", peak);
  return kOk;
}

int run_eval(const EvalOptions& o) {
  std::vector<Metric> metrics;
  if (o.metrics.empty()) {
    for (auto m : kAllMetrics) {
      if (needs_groundtruth(m) && o.gt.empty()) continue;
      if (m == Metric::kLC && o.flow.empty()) continue;
      if (m == Metric::kEV && o.video.empty()) continue;
      metrics.push_back(m);
    }
  } else {
    metrics = parse_metric_list(o.metrics);
  }
  for (auto m : metrics) {
    if (needs_groundtruth(m) && o.gt.empty()) throw InvalidArgument(std::string(metric_name(m)) + " requires --gt");
    if (m == Metric::kLC && o.flow.empty()) throw InvalidArgument("lc requires --flow");
    if (m == Metric::kEV && o.video.empty()) throw InvalidArgument("ev requires --video");
  }
  const std::vector<int> annotated = o.annotated.empty() ? std::vector<int>{} : parse_int_list(o.annotated);
  if (!annotated.empty() && o.gt.empty()) throw InvalidArgument("--annotated requires --gt");

  const LabelVolume labels = load_labels(o.seg);
  for (int t : annotated) {
    if (t < 0 || t >= labels.frames()) {
      throw InvalidArgument("--annotated: frame " + std::to_string(t) + " outside the " +
                            std::to_string(labels.frames()) + "-frame labeling");
    }
  }
  const VideoVolume video = o.video.empty()
                                ? VideoVolume(labels.geometry(), std::vector<Rgb>(labels.size()))
                                : load_video(o.video);
  std::optional<GroundTruthSet> gt;
  if (!o.gt.empty()) {
    gt = load_groundtruth(std::vector<fs::path>(o.gt.begin(), o.gt.end()), labels.geometry(), annotated);
  }
  std::optional<FlowField> flow;
  if (!o.flow.empty()) flow = load_flow_directory(o.flow);

  // Stored labels need not be compact; metrics see the compacted partition.
  MetricReport r = evaluate(video, compact_labels(labels), gt ? &*gt : nullptr, flow ? &*flow : nullptr, metrics);
  r.video = fs::path(o.seg).filename().string();
  r.method = "eval";
  std::printf("supervoxels: %u\nsupervoxels per frame: %.6g\n", r.num_supervoxels, r.supervoxels_per_frame);
  for (auto m : metrics) std::printf("%s: %.9g\n", std::string(metric_name(m)).c_str(), *r.score(m));
  if (!o.csv.empty()) write_reports_csv(std::span<const MetricReport>(&r, 1), o.csv);
  return kOk;
}

int run_sweep(SweepOptions o) {
  SweepConfig config;
  config.method = parse_method(o.method);
  const Basis basis = parse_basis(o.basis);
  config.metrics = parse_metric_list(o.metrics);
  config.window = o.window;
  if (o.window < 1) throw InvalidArgument("--window must be >= 1");
  for (double k : o.k) {
    for (double m : o.min_size) {
      GBHParams p = o.params;
      p.gb.k = k;
      p.gb.min_size = m;
      p.validate();
      config.grid.push_back(p);
    }
  }
  if (config.grid.empty()) throw InvalidArgument("empty parameter grid");
  std::vector<double> grid = o.grid.empty() ? default_grid(basis) : o.grid;
  std::sort(grid.begin(), grid.end());
  if (o.csv.empty()) throw InvalidArgument("--csv is required");

  int jobs = o.jobs;
  if (jobs <= 0) {
    const char* env = std::getenv("SVX_JOBS");
    jobs = env ? std::atoi(env) : 1;
    if (jobs <= 0) jobs = 1;
  }

  std::vector<ManifestEntry> manifest;
  try {
    manifest = read_manifest(o.manifest);
  } catch (const FormatError& e) {
    throw InvalidArgument(e.what());
  }
  const DatasetResult result = run_dataset(manifest, config, basis, grid, jobs);
  write_aggregate_csv(result.aggregates, o.csv);
  if (!o.reports.empty()) {
    std::vector<MetricReport> all;
    for (const auto& v : result.reports) all.insert(all.end(), v.begin(), v.end());
    write_reports_csv(all, o.reports);
  }
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    std::printf("%s: %zu reports\n", manifest[i].id.c_str(), result.reports[i].size());
  }
  for (const auto& [id, e] : result.errors) {
    std::fprintf(stderr, "warning: %s grid point %zu: %s\n", id.c_str(), e.grid_point, e.message.c_str());
  }
  return kOk;
}

int run_render(const RenderOptions& o) {
  const LabelVolume labels = compact_labels(load_labels(o.seg));
  save_video(render_labels(labels), o.output);
  std::printf("rendered %d frames, %u labels\n", labels.frames(), labels.num_labels());
  return kOk;
}

int run_synth(const SynthOptions& o) {
  const SyntheticVideo s = moving_square(o.spec);
  const fs::path out = o.output;
  save_video(s.video, out / "frames");
  save_annotation(s.groundtruth, 0, out / "gt");
  fs::create_directories(out / "flow");
  for (std::size_t t = 0; t < s.flow.maps.size(); ++t) {
    write_flow(frame_file(out / "flow", static_cast<int>(t), "flo"), s.flow.maps[t]);
  }
  std::printf("wrote %dx%dx%d video to %s\n", o.spec.width, o.spec.height, o.spec.frames, out.string().c_str());
  return kOk;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kBadArgs;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInvariant;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervoxel segmentation and benchmark toolkit"};
  app.require_subcommand(1);

  SegmentOptions seg;
  auto* segment = app.add_subcommand("segment", "Segment a PPM frame directory into supervoxels");
  segment->add_option("--method", seg.method, "gb, gbh or streamgbh")
      ->check(CLI::IsMember({"gb", "gbh", "streamgbh"}))
      ->capture_default_str();
  segment->add_option("--input", seg.input, "Frame directory")->required();
  segment->add_option("--output", seg.output, "Output directory (one level_NN subdirectory per level)")
      ->required();
  segment->add_option("--k", seg.params.gb.k, "Scale parameter k")->capture_default_str();
  segment->add_option("--min-size", seg.params.gb.min_size, "Minimum region size in voxels")
      ->capture_default_str();
  segment->add_option("--sigma", seg.params.gb.sigma, "Spatial Gaussian smoothing in pixels")
      ->capture_default_str();
  add_hierarchy_flags(segment, seg.params);
  segment->add_option("--window", seg.window, "Streaming window in frames")->capture_default_str();

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a labeling against groundtruth and flow");
  eval->add_option("--seg", ev.seg, "Label frame directory")->required();
  eval->add_option("--gt", ev.gt, "Groundtruth directories, one per annotation")->delimiter(',');
  eval->add_option("--annotated", ev.annotated, "Annotated frame indices (default: every frame)");
  eval->add_option("--flow", ev.flow, "Directory of .flo forward flow files");
  eval->add_option("--video", ev.video, "Frame directory of the source video (needed for ev)");
  eval->add_option("--metrics", ev.metrics, "Comma list or 'all' (default: every metric with inputs)");
  eval->add_option("--csv", ev.csv, "Report CSV path");

  SweepOptions sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep and dataset aggregation over a manifest");
  sweep_cmd->alias("curve");
  sweep_cmd->add_option("--manifest", sw.manifest, "Dataset manifest")->required();
  sweep_cmd->add_option("--method", sw.method, "gb, gbh or streamgbh")
      ->check(CLI::IsMember({"gb", "gbh", "streamgbh"}))
      ->capture_default_str();
  sweep_cmd->add_option("--basis", sw.basis, "spv or spf")->check(CLI::IsMember({"spv", "spf"}))
      ->capture_default_str();
  sweep_cmd->add_option("--k", sw.k, "Comma list of k values")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--min-size", sw.min_size, "Comma list of minimum sizes")->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--sigma", sw.params.gb.sigma, "Spatial Gaussian smoothing in pixels")
      ->capture_default_str();
  add_hierarchy_flags(sweep_cmd, sw.params);
  sweep_cmd->add_option("--window", sw.window, "Streaming window in frames")->capture_default_str();
  sweep_cmd->add_option("--grid", sw.grid, "Comma list of evaluation counts (default depends on basis)")
      ->delimiter(',');
  sweep_cmd->add_option("--metrics", sw.metrics, "Comma list or 'all'")->capture_default_str();
  sweep_cmd->add_option("--csv", sw.csv, "Aggregate CSV path")->required();
  sweep_cmd->add_option("--reports", sw.reports, "Per-report CSV path");
  sweep_cmd->add_option("--jobs", sw.jobs, "Videos processed concurrently (default: SVX_JOBS or 1)");

  RenderOptions rd;
  auto* render = app.add_subcommand("render", "Paint labels with distinct colors, constant over time");
  render->add_option("--seg", rd.seg, "Label frame directory")->required();
  render->add_option("--output", rd.output, "Output frame directory")->required();

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Write a moving-square video with groundtruth and flow");
  synth->add_option("--output", sy.output, "Output directory (frames/, gt/, flow/)")->required();
  synth->add_option("--width", sy.spec.width)->capture_default_str();
  synth->add_option("--height", sy.spec.height)->capture_default_str();
  synth->add_option("--frames", sy.spec.frames)->capture_default_str();
  synth->add_option("--side", sy.spec.side, "Square side")->capture_default_str();
  synth->add_option("--start-x", sy.spec.start_x)->capture_default_str();
  synth->add_option("--start-y", sy.spec.start_y)->capture_default_str();
  synth->add_option("--speed", sy.spec.speed, "Pixels per frame along x")->capture_default_str();
  synth->add_option("--noise", sy.spec.noise, "Uniform noise amplitude per channel")->capture_default_str();
  synth->add_option("--seed", sy.spec.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kBadArgs;
  }

  if (segment->parsed()) return guarded([&] { return run_segment(seg); });
  if (eval->parsed()) return guarded([&] { return run_eval(ev); });
  if (sweep_cmd->parsed()) return guarded([&] { return run_sweep(sw); });
  if (render->parsed()) return guarded([&] { return run_render(rd); });
  if (synth->parsed()) return guarded([&] { return run_synth(sy); });
  return kBadArgs;
}
