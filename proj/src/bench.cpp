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

#include "svx/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "svx/gb.hpp"
#include "svx/io.hpp"
#include "svx/stream.hpp"

namespace svx {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("write failed: '" + path.string() + "'");
}

void add_report(SweepOutput& out, std::set<std::uint32_t>& seen, LabelVolume labels, MetricReport report) {
  if (!seen.insert(report.num_supervoxels).second) return;
  out.results.push_back({std::move(labels), std::move(report)});
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kGB: return "gb";
    case Method::kGBH: return "gbh";
    case Method::kStreamGBH: return "streamgbh";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  const auto n = lower(name);
  for (auto m : {Method::kGB, Method::kGBH, Method::kStreamGBH}) {
    if (method_name(m) == n) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(name) + "' (expected gb, gbh or streamgbh)");
}

std::string_view basis_name(Basis b) { return b == Basis::kSpv ? "spv" : "spf"; }

Basis parse_basis(std::string_view name) {
  const auto n = lower(name);
  if (n == "spv") return Basis::kSpv;
  if (n == "spf") return Basis::kSpf;
  throw InvalidArgument("unknown basis '" + std::string(name) + "' (expected spv or spf)");
}

std::string describe_params(Method method, const GBHParams& p, int window) {
  std::string s = "k=" + num(p.gb.k) + ";min_size=" + num(p.gb.min_size) + ";sigma=" + num(p.gb.sigma);
  if (method != Method::kGB) {
    s += ";scale_factor=" + num(p.scale_factor) + ";levels=" + std::to_string(p.num_levels) +
         ";bins=" + std::to_string(p.bins);
  }
  if (method == Method::kStreamGBH) s += ";window=" + std::to_string(window);
  return s;
}

SweepOutput sweep(const VideoEntry& entry, const SweepConfig& config) {
  if (config.grid.empty()) throw InvalidArgument("sweep: empty parameter grid");
  std::vector<Metric> metrics;
  for (auto m : config.metrics) {
    if (needs_groundtruth(m) && !entry.groundtruth) continue;
    if (m == Metric::kLC && !entry.flow) continue;
    metrics.push_back(m);
  }
  const GroundTruthSet* gt = entry.groundtruth ? &*entry.groundtruth : nullptr;
  const FlowField* flow = entry.flow ? &*entry.flow : nullptr;

  SweepOutput out;
  std::set<std::uint32_t> seen;
  for (std::size_t i = 0; i < config.grid.size(); ++i) {
    const auto& params = config.grid[i];
    try {
      const std::string desc = describe_params(config.method, params, config.window);
      auto report_for = [&](const LabelVolume& labels, int level) {
        MetricReport r = evaluate(entry.video, labels, gt, flow, metrics);
        r.video = entry.id;
        r.method = std::string(method_name(config.method));
        r.params = desc;
        r.level = level;
        return r;
      };
      if (config.method == Method::kGB) {
        LabelVolume labels = segment_gb(entry.video, params.gb);
        MetricReport r = report_for(labels, 0);
        add_report(out, seen, std::move(labels), std::move(r));
        continue;
      }
      SegmentationHierarchy h;
      if (config.method == Method::kGBH) {
        h = segment_gbh(entry.video, params);
      } else {
        VolumeFrameSource source(entry.video);
        h = segment_stream(source, params, config.window);
      }
      for (std::size_t level = 0; level < h.levels.size(); ++level) {
        if (seen.count(h.levels[level].num_labels())) continue;
        MetricReport r = report_for(h.levels[level], static_cast<int>(level));
        add_report(out, seen, std::move(h.levels[level]), std::move(r));
      }
    } catch (const Error& e) {
      out.errors.push_back({i, e.what()});
    }
  }
  return out;
}

MetricCurve make_curve(std::span<const MetricReport> reports, Metric metric, Basis basis) {
  MetricCurve c;
  c.metric = metric;
  c.basis = basis;
  for (const auto& r : reports) {
    const auto s = r.score(metric);
    if (!s) continue;
    const double x = basis == Basis::kSpv ? static_cast<double>(r.num_supervoxels) : r.supervoxels_per_frame;
    c.points.emplace_back(x, *s);
  }
  std::stable_sort(c.points.begin(), c.points.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  c.points.erase(std::unique(c.points.begin(), c.points.end(),
                             [](const auto& a, const auto& b) { return a.first == b.first; }),
                 c.points.end());
  return c;
}

std::optional<double> interpolate(const MetricCurve& curve, double count) {
  const auto& p = curve.points;
  if (p.size() < 2) throw InvalidArgument("interpolate: curve needs at least two points");
  if (!(count >= p.front().first && count <= p.back().first)) return std::nullopt;
  auto it = std::lower_bound(p.begin(), p.end(), count, [](const auto& a, double c) { return a.first < c; });
  if (it->first == count) return it->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (count - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

DatasetAggregate aggregate(std::span<const MetricCurve> curves, std::span<const double> grid) {
  DatasetAggregate a;
  if (!curves.empty()) {
    a.metric = curves.front().metric;
    a.basis = curves.front().basis;
  }
  a.grid.assign(grid.begin(), grid.end());
  for (double g : grid) {
    double sum = 0.0;
    int n = 0;
    for (const auto& c : curves) {
      if (c.points.size() < 2) continue;
      if (auto v = interpolate(c, g)) {
        sum += *v;
        ++n;
      }
    }
    a.contributors.push_back(n);
    a.score.push_back(n ? std::optional<double>(sum / n) : std::nullopt);
  }
  return a;
}

std::vector<double> default_grid(Basis basis) {
  std::vector<double> g;
  if (basis == Basis::kSpv) {
    for (int c = 100; c <= 2000; c += 100) g.push_back(c);
  } else {
    constexpr int kPoints = 20;
    const double lo = std::log(10.0), hi = std::log(1500.0);
    for (int i = 0; i < kPoints; ++i) {
      g.push_back(std::exp(lo + (hi - lo) * i / (kPoints - 1)));
    }
    g.front() = 10.0;
    g.back() = 1500.0;
  }
  return g;
}

std::string aggregate_csv(std::span<const DatasetAggregate> aggregates) {
  std::string s = "metric,basis,count,score,contributors\n";
  for (const auto& a : aggregates) {
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
      s += std::string(metric_name(a.metric)) + ',' + std::string(basis_name(a.basis)) + ',' + num(a.grid[i]) +
           ',' + (a.score[i] ? num(*a.score[i]) : "") + ',' + std::to_string(a.contributors[i]) + '\n';
    }
  }
  return s;
}

void write_aggregate_csv(std::span<const DatasetAggregate> aggregates, const fs::path& path) {
  write_text(path, aggregate_csv(aggregates));
}

std::string reports_csv(std::span<const MetricReport> reports) {
  std::string s = "video,method,params,level,num_supervoxels,supervoxels_per_frame";
  for (auto m : kAllMetrics) s += ',' + std::string(metric_name(m));
  s += '\n';
  for (const auto& r : reports) {
    s += r.video + ',' + r.method + ',' + r.params + ',' + std::to_string(r.level) + ',' +
         std::to_string(r.num_supervoxels) + ',' + num(r.supervoxels_per_frame);
    for (auto m : kAllMetrics) {
      s += ',';
      if (auto v = r.score(m)) s += num(*v);
    }
    s += '\n';
  }
  return s;
}

void write_reports_csv(std::span<const MetricReport> reports, const fs::path& path) {
  write_text(path, reports_csv(reports));
}

std::vector<ManifestEntry> parse_manifest(std::string_view text, const fs::path& base) {
  std::vector<ManifestEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  while (std::getline(in, line)) {
    ++number;
    auto fail = [&](const std::string& why) {
      throw FormatError("manifest line " + std::to_string(number) + ": " + why);
    };
    std::istringstream words(line);
    std::string word;
    if (!(words >> word) || word[0] == '#') continue;
    ManifestEntry e;
    e.id = word;
    if (e.id.find('=') != std::string::npos) fail("expected a video id before '" + e.id + "'");
    if (e.id.find(',') != std::string::npos) fail("video id must not contain ','");
    for (const auto& seen : out) {
      if (seen.id == e.id) fail("duplicate video id '" + e.id + "'");
    }
    while (words >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos || eq + 1 == word.size()) fail("expected key=value, got '" + word + "'");
      const std::string key = word.substr(0, eq), value = word.substr(eq + 1);
      std::vector<std::string> items;
      std::stringstream list(value);
      for (std::string item; std::getline(list, item, ',');) {
        if (item.empty()) fail("empty item in '" + word + "'");
        items.push_back(item);
      }
      if (key == "frames") {
        e.frames = resolve(value);
      } else if (key == "gt") {
        for (const auto& i : items) e.groundtruth.push_back(resolve(i));
      } else if (key == "flow") {
        e.flow = resolve(value);
      } else if (key == "annotated") {
        for (const auto& i : items) {
          std::size_t used = 0;
          int v = -1;
          try {
            v = std::stoi(i, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != i.size() || v < 0) fail("bad frame index '" + i + "'");
          e.annotated_frames.push_back(v);
        }
      } else {
        fail("unknown key '" + key + "'");
      }
    }
    if (e.frames.empty()) fail("missing frames=DIR");
    if (!e.annotated_frames.empty() && e.groundtruth.empty()) fail("annotated= given without gt=");
    out.push_back(std::move(e));
  }
  if (out.empty()) throw FormatError("manifest lists no video");
  return out;
}

std::vector<ManifestEntry> read_manifest(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), file.parent_path());
}

VideoEntry load_entry(const ManifestEntry& m) {
  VideoEntry e;
  e.id = m.id;
  e.video = load_video(m.frames);
  if (!m.groundtruth.empty()) e.groundtruth = load_groundtruth(m.groundtruth, e.video.geometry(), m.annotated_frames);
  if (m.flow) e.flow = load_flow_directory(*m.flow);
  return e;
}

DatasetResult run_dataset(std::span<const ManifestEntry> manifest, const SweepConfig& config, Basis basis,
                          std::span<const double> grid, int jobs) {
  if (config.grid.empty()) throw InvalidArgument("sweep: empty parameter grid");
  const std::size_t n = manifest.size();
  std::vector<SweepOutput> outputs(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outputs[i] = sweep(load_entry(manifest[i]), config);
        for (auto& r : outputs[i].results) r.labels = LabelVolume();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  DatasetResult result;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<MetricReport> reports;
    for (auto& r : outputs[i].results) reports.push_back(std::move(r.report));
    result.reports.push_back(std::move(reports));
    for (auto& e : outputs[i].errors) result.errors.emplace_back(manifest[i].id, std::move(e));
  }
  for (auto m : config.metrics) {
    std::vector<MetricCurve> curves;
    for (const auto& reports : result.reports) curves.push_back(make_curve(reports, m, basis));
    DatasetAggregate a = aggregate(curves, grid);
    a.metric = m;
    a.basis = basis;
    result.aggregates.push_back(std::move(a));
  }
  return result;
}

namespace {

constexpr int kToySize = 20;
constexpr int kGtLo = 6, kGtHi = 14;

struct Rect {
  int x0, y0, x1, y1;  // half-open
};

// Per-pixel scans with sets; shares nothing with the metrics module.
struct ToyExpected {
  double ue3d, sa3d, brd;
};

ToyExpected enumerate_toy(const std::vector<std::uint32_t>& sv, const std::vector<std::uint32_t>& gt) {
  const int n = kToySize;
  std::set<std::uint32_t> segments(gt.begin(), gt.end());
  double ue = 0.0, sa = 0.0;
  for (auto g : segments) {
    std::set<std::uint32_t> touching;
    double vol_g = 0;
    for (int p = 0; p < n * n; ++p) {
      if (gt[p] == g) {
        touching.insert(sv[p]);
        ++vol_g;
      }
    }
    double leak = 0, covered = 0;
    for (auto s : touching) {
      double vol_s = 0, in = 0, out = 0;
      for (int p = 0; p < n * n; ++p) {
        if (sv[p] != s) continue;
        ++vol_s;
        (gt[p] == g ? in : out) += 1;
      }
      leak += vol_s;
      if (in >= out) covered += in;
    }
    ue += (leak - vol_g) / vol_g;
    sa += covered / vol_g;
  }
  ue /= static_cast<double>(segments.size());
  sa /= static_cast<double>(segments.size());

  auto edge_pixels = [&](const std::vector<std::uint32_t>& f) {
    std::vector<std::pair<int, int>> pts;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const auto l = f[y * n + x];
        const bool edge = (x > 0 && f[y * n + x - 1] != l) || (x + 1 < n && f[y * n + x + 1] != l) ||
                          (y > 0 && f[(y - 1) * n + x] != l) || (y + 1 < n && f[(y + 1) * n + x] != l);
        if (edge) pts.emplace_back(x, y);
      }
    }
    return pts;
  };
  const auto gb = edge_pixels(gt), sb = edge_pixels(sv);
  double brd = 0.0;
  for (auto [gx, gy] : gb) {
    double best = std::numeric_limits<double>::infinity();
    for (auto [sx, sy] : sb) best = std::min(best, std::sqrt(double((gx - sx) * (gx - sx) + (gy - sy) * (gy - sy))));
    brd += sb.empty() ? std::hypot(double(n), double(n)) : best;
  }
  brd = gb.empty() ? 0.0 : brd / static_cast<double>(gb.size());
  return {ue, sa, brd};
}

std::vector<Rect> toy_tiles(char c) {
  const int m = (kGtLo + kGtHi) / 2;
  switch (c) {
    case 'a':
      return {{kGtLo, kGtLo, m, m}, {m, kGtLo, kGtHi, m}, {kGtLo, m, m, kGtHi}, {m, m, kGtHi, kGtHi}};
    case 'b':
      return {{kGtLo - 3, kGtLo - 3, kGtLo + 3, kGtLo + 3},
              {kGtHi - 3, kGtLo - 3, kGtHi + 3, kGtLo + 3},
              {kGtLo - 3, kGtHi - 3, kGtLo + 3, kGtHi + 3},
              {kGtHi - 3, kGtHi - 3, kGtHi + 3, kGtHi + 3}};
    case 'c':
      return {{kGtLo, kGtLo, m, m}, {m, kGtLo, kGtHi, m}, {kGtLo - 2, m, m - 2, kGtHi}, {m, m, kGtHi, kGtHi}};
    case 'd':
      return {{kGtLo - 2, kGtLo - 2, m, m},
              {m, kGtLo - 2, kGtHi + 2, m},
              {kGtLo - 2, m, m, kGtHi + 2},
              {m, m, kGtHi + 2, kGtHi + 2}};
    case 'e':
      return {{kGtLo + 2, kGtLo, kGtHi + 2, kGtHi}};
    default:
      throw InvalidArgument(std::string("unknown toy configuration '") + c + "'");
  }
}

}  // namespace

ToyScene toy_scene(char configuration) {
  const int n = kToySize;
  const auto tiles = toy_tiles(configuration);
  std::vector<std::uint32_t> sv(n * n), gt(n * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      sv[y * n + x] = (y >= n / 2 ? 2u : 0u) + (x >= n / 2 ? 1u : 0u);
      gt[y * n + x] = (x >= kGtLo && x < kGtHi && y >= kGtLo && y < kGtHi) ? 1u : 0u;
    }
  }
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const Rect& r = tiles[i];
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) sv[y * n + x] = static_cast<std::uint32_t>(4 + i);
    }
  }
  const Geometry geo{n, n, 1};
  std::vector<Annotation> anns(1);
  anns[0].labels = gt;
  return {compact_labels(LabelVolume(geo, sv)), GroundTruthSet(geo, {0}, std::move(anns))};
}

std::vector<ToyCase> toy_oracle() {
  std::vector<ToyCase> out;
  for (char c : {'a', 'b', 'c', 'd', 'e'}) {
    const ToyScene scene = toy_scene(c);
    const auto& labels = scene.supervoxels.labels();
    const ToyExpected ex = enumerate_toy({labels.begin(), labels.end()}, scene.groundtruth.annotations()[0].labels);
    ToyCase t;
    t.name = std::string(1, c);
    t.ue3d = ue3d(scene.supervoxels, scene.groundtruth);
    t.sa3d = sa3d(scene.supervoxels, scene.groundtruth);
    t.brd = brd(scene.supervoxels, scene.groundtruth);
    t.expected_ue3d = ex.ue3d;
    t.expected_sa3d = ex.sa3d;
    t.expected_brd = ex.brd;
    constexpr double kTol = 1e-9;
    t.pass = std::abs(t.ue3d - ex.ue3d) <= kTol && std::abs(t.sa3d - ex.sa3d) <= kTol &&
             std::abs(t.brd - ex.brd) <= kTol;
    out.push_back(t);
  }
  return out;
}

}  // namespace svx
