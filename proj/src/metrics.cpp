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

#include "svx/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace svx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gt(const LabelVolume& labels, const GroundTruthSet& gt) {
  if (gt.empty()) throw InvalidArgument("groundtruth set has no annotation");
  if (labels.geometry() != gt.geometry()) throw GeometryError("labeling and groundtruth geometry differ");
}

// 1D squared distance transform of sampled function f (lower envelope of parabolas).
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  int first = 0;
  while (first < n && f[first] == kInf) ++first;
  if (first == n) {
    std::fill(d, d + n, kInf);
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

OverlapTable overlap_table(const LabelVolume& labels, const GroundTruthSet& gt, std::size_t annotation) {
  require_gt(labels, gt);
  const auto& ann = gt.annotations().at(annotation);
  const std::size_t fs = labels.geometry().frame_size();

  OverlapTable t;
  t.num_supervoxels = labels.num_labels();
  for (auto id : ann.labels) {
    if (id != kUnlabeled) t.segment_ids.push_back(id);
  }
  std::sort(t.segment_ids.begin(), t.segment_ids.end());
  t.segment_ids.erase(std::unique(t.segment_ids.begin(), t.segment_ids.end()), t.segment_ids.end());
  t.num_segments = static_cast<std::uint32_t>(t.segment_ids.size());
  std::unordered_map<std::uint32_t, std::uint32_t> column;
  for (std::uint32_t i = 0; i < t.num_segments; ++i) column.emplace(t.segment_ids[i], i);

  t.overlap.assign(static_cast<std::size_t>(t.num_supervoxels) * t.num_segments, 0);
  t.supervoxel_volume.assign(t.num_supervoxels, 0);
  t.labeled_volume.assign(t.num_supervoxels, 0);
  t.segment_volume.assign(t.num_segments, 0);

  const auto& frames = gt.annotated_frames();
  for (std::size_t slot = 0; slot < frames.size(); ++slot) {
    const auto sv = labels.frame(frames[slot]);
    const auto g = ann.frame(slot, fs);
    for (std::size_t p = 0; p < fs; ++p) {
      ++t.supervoxel_volume[sv[p]];
      if (g[p] == kUnlabeled) continue;
      const std::uint32_t c = column.at(g[p]);
      ++t.overlap[static_cast<std::size_t>(sv[p]) * t.num_segments + c];
      ++t.labeled_volume[sv[p]];
      ++t.segment_volume[c];
    }
  }
  return t;
}

double ue3d(const OverlapTable& t) {
  if (t.num_segments == 0) throw InvalidArgument("ue3d: annotation has no labeled segment");
  double sum = 0.0;
  for (std::uint32_t i = 0; i < t.num_segments; ++i) {
    std::uint64_t touching = 0;
    for (std::uint32_t j = 0; j < t.num_supervoxels; ++j) {
      if (t.at(j, i) > 0) touching += t.supervoxel_volume[j];
    }
    const auto vol = static_cast<double>(t.segment_volume[i]);
    sum += (static_cast<double>(touching) - vol) / vol;
  }
  return sum / t.num_segments;
}

double sa3d(const OverlapTable& t) {
  if (t.num_segments == 0) throw InvalidArgument("sa3d: annotation has no labeled segment");
  double sum = 0.0;
  for (std::uint32_t i = 0; i < t.num_segments; ++i) {
    std::uint64_t covered = 0;
    for (std::uint32_t j = 0; j < t.num_supervoxels; ++j) {
      const std::uint64_t in = t.at(j, i);
      const std::uint64_t out = t.labeled_volume[j] - in;
      if (in > 0 && in >= out) covered += in;
    }
    sum += static_cast<double>(covered) / static_cast<double>(t.segment_volume[i]);
  }
  return sum / t.num_segments;
}

double ue3d(const LabelVolume& labels, const GroundTruthSet& gt) {
  require_gt(labels, gt);
  double sum = 0.0;
  for (std::size_t a = 0; a < gt.annotations().size(); ++a) sum += ue3d(overlap_table(labels, gt, a));
  return sum / static_cast<double>(gt.annotations().size());
}

double sa3d(const LabelVolume& labels, const GroundTruthSet& gt) {
  require_gt(labels, gt);
  double sum = 0.0;
  for (std::size_t a = 0; a < gt.annotations().size(); ++a) sum += sa3d(overlap_table(labels, gt, a));
  return sum / static_cast<double>(gt.annotations().size());
}

std::vector<std::uint8_t> boundary_map(std::span<const std::uint32_t> f, int w, int h) {
  std::vector<std::uint8_t> b(f.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const std::uint32_t l = f[p];
      if ((x > 0 && f[p - 1] != l) || (x + 1 < w && f[p + 1] != l) || (y > 0 && f[p - w] != l) ||
          (y + 1 < h && f[p + w] != l)) {
        b[p] = 1;
      }
    }
  }
  return b;
}

std::vector<double> distance_transform(std::span<const std::uint8_t> mask, int w, int h) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = mask[i] ? 0.0 : kInf;

  const int longest = std::max(w, h);
  std::vector<double> f(longest), d(longest), z(longest + 1);
  std::vector<int> v(longest);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = sq[static_cast<std::size_t>(y) * w + x];
    edt_1d(f.data(), d.data(), h, v, z);
    for (int y = 0; y < h; ++y) sq[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    double* row = sq.data() + static_cast<std::size_t>(y) * w;
    std::copy(row, row + w, f.begin());
    edt_1d(f.data(), row, w, v, z);
  }
  for (auto& s : sq) s = std::sqrt(s);
  return sq;
}

double brd(const LabelVolume& labels, const GroundTruthSet& gt) {
  require_gt(labels, gt);
  const int w = labels.width(), h = labels.height();
  const std::size_t fs = labels.geometry().frame_size();
  const double diagonal = std::hypot(static_cast<double>(w), static_cast<double>(h));
  const auto& frames = gt.annotated_frames();

  // Distance maps depend only on the labeling; compute once per annotated frame.
  std::vector<std::vector<double>> dist(frames.size());
  std::vector<bool> has_boundary(frames.size());
  for (std::size_t slot = 0; slot < frames.size(); ++slot) {
    const auto mask = boundary_map(labels.frame(frames[slot]), w, h);
    has_boundary[slot] = std::find(mask.begin(), mask.end(), 1) != mask.end();
    if (has_boundary[slot]) dist[slot] = distance_transform(mask, w, h);
  }

  double total = 0.0;
  for (const auto& ann : gt.annotations()) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for (std::size_t slot = 0; slot < frames.size(); ++slot) {
      const auto gb = boundary_map(ann.frame(slot, fs), w, h);
      for (std::size_t p = 0; p < fs; ++p) {
        if (!gb[p]) continue;
        ++count;
        sum += has_boundary[slot] ? dist[slot][p] : diagonal;
      }
    }
    total += count ? sum / static_cast<double>(count) : 0.0;
  }
  return total / static_cast<double>(gt.annotations().size());
}

double lc(const LabelVolume& labels, const FlowField& flow) {
  const int w = labels.width(), h = labels.height(), frames = labels.frames();
  if (static_cast<int>(flow.maps.size()) != std::max(frames - 1, 0)) {
    throw GeometryError("lc: expected " + std::to_string(std::max(frames - 1, 0)) + " flow maps, got " +
                        std::to_string(flow.maps.size()));
  }
  std::uint64_t agree = 0, projected = 0;
  for (int t = 1; t < frames; ++t) {
    const auto& m = flow.maps[t - 1];
    if (m.width != w || m.height != h) throw GeometryError("lc: flow map size differs from the video");
    const auto src = labels.frame(t - 1);
    const auto dst = labels.frame(t);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        if (!m.valid[p]) continue;
        const double tx = std::clamp(std::round(x + static_cast<double>(m.u[p])), 0.0, w - 1.0);
        const double ty = std::clamp(std::round(y + static_cast<double>(m.v[p])), 0.0, h - 1.0);
        const std::size_t q = static_cast<std::size_t>(ty) * w + static_cast<std::size_t>(tx);
        ++projected;
        if (dst[q] == src[p]) ++agree;
      }
    }
  }
  return projected ? static_cast<double>(agree) / static_cast<double>(projected) : 1.0;
}

double ev(const VideoVolume& video, const LabelVolume& labels) {
  if (video.geometry() != labels.geometry()) throw GeometryError("ev: labeling and video geometry differ");
  const auto vox = video.voxels();
  const std::size_t n = vox.size();
  if (n == 0) return 1.0;
  const std::uint32_t k = labels.num_labels();

  std::vector<double> sums(3 * static_cast<std::size_t>(k), 0.0);
  std::vector<std::uint64_t> counts(k, 0);
  double mean[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double c[3] = {double(vox[i].r), double(vox[i].g), double(vox[i].b)};
    double* s = sums.data() + 3 * static_cast<std::size_t>(labels[i]);
    for (int ch = 0; ch < 3; ++ch) {
      mean[ch] += c[ch];
      s[ch] += c[ch];
    }
    ++counts[labels[i]];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::uint32_t j = 0; j < k; ++j) {
    for (int ch = 0; ch < 3; ++ch) {
      if (counts[j]) sums[3 * j + ch] /= static_cast<double>(counts[j]);
    }
  }
  double explained = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c[3] = {double(vox[i].r), double(vox[i].g), double(vox[i].b)};
    const double* mu = sums.data() + 3 * static_cast<std::size_t>(labels[i]);
    double e = 0.0, t = 0.0;
    for (int ch = 0; ch < 3; ++ch) {
      e += (mu[ch] - mean[ch]) * (mu[ch] - mean[ch]);
      t += (c[ch] - mean[ch]) * (c[ch] - mean[ch]);
    }
    explained += e;
    total += t;
  }
  if (total == 0.0) return 1.0;
  return std::min(explained / total, 1.0);
}

namespace {

// Calls visit(label, slice_size) for every label present in frame t.
template <class Visit>
void for_each_slice(const LabelVolume& labels, std::vector<std::uint32_t>& scratch,
                    std::vector<std::uint32_t>& touched, int t, Visit&& visit) {
  touched.clear();
  for (auto l : labels.frame(t)) {
    if (scratch[l]++ == 0) touched.push_back(l);
  }
  for (auto l : touched) {
    visit(l, scratch[l]);
    scratch[l] = 0;
  }
}

}  // namespace

double msv(const LabelVolume& labels) {
  const std::uint32_t n = labels.num_labels();
  if (n == 0) return 0.0;
  std::vector<std::uint32_t> scratch(n, 0), touched;
  std::vector<std::uint64_t> present(n, 0), total(n, 0);
  for (int t = 0; t < labels.frames(); ++t) {
    for_each_slice(labels, scratch, touched, t, [&](std::uint32_t l, std::uint32_t s) {
      ++present[l];
      total[l] += s;
    });
  }
  std::vector<double> mean(n), sq(n, 0.0);
  for (std::uint32_t l = 0; l < n; ++l) {
    mean[l] = present[l] ? static_cast<double>(total[l]) / static_cast<double>(present[l]) : 0.0;
  }
  for (int t = 0; t < labels.frames(); ++t) {
    for_each_slice(labels, scratch, touched, t, [&](std::uint32_t l, std::uint32_t s) {
      const double d = static_cast<double>(s) - mean[l];
      sq[l] += d * d;
    });
  }
  double sum = 0.0;
  for (std::uint32_t l = 0; l < n; ++l) {
    if (present[l] > 1) sum += std::sqrt(sq[l] / static_cast<double>(present[l] - 1));
  }
  return sum / n;
}

double tex(const LabelVolume& labels) {
  const std::uint32_t n = labels.num_labels();
  if (n == 0 || labels.frames() == 0) return 0.0;
  std::vector<std::uint32_t> scratch(n, 0), touched;
  std::uint64_t presence = 0;
  for (int t = 0; t < labels.frames(); ++t) {
    for_each_slice(labels, scratch, touched, t, [&](std::uint32_t, std::uint32_t) { ++presence; });
  }
  return static_cast<double>(presence) / (static_cast<double>(n) * labels.frames());
}

double supervoxels_per_frame(const LabelVolume& labels) {
  if (labels.frames() == 0) return 0.0;
  std::vector<std::uint32_t> scratch(labels.num_labels(), 0), touched;
  std::uint64_t distinct = 0;
  for (int t = 0; t < labels.frames(); ++t) {
    for_each_slice(labels, scratch, touched, t, [&](std::uint32_t, std::uint32_t) { ++distinct; });
  }
  return static_cast<double>(distinct) / labels.frames();
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kUE3D: return "ue3d";
    case Metric::kSA3D: return "sa3d";
    case Metric::kBRD: return "brd";
    case Metric::kLC: return "lc";
    case Metric::kEV: return "ev";
    case Metric::kMSV: return "msv";
    case Metric::kTEX: return "tex";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto m : kAllMetrics) {
    if (metric_name(m) == lower) return m;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

std::vector<Metric> parse_metric_list(std::string_view list) {
  std::vector<Metric> out;
  if (list == "all") return {kAllMetrics.begin(), kAllMetrics.end()};
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t end = std::min(list.find(',', start), list.size());
    const auto item = list.substr(start, end - start);
    if (!item.empty()) {
      const Metric m = parse_metric(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    start = end + 1;
  }
  if (out.empty()) throw InvalidArgument("empty metric list");
  return out;
}

bool needs_groundtruth(Metric m) { return m == Metric::kUE3D || m == Metric::kSA3D || m == Metric::kBRD; }

MetricReport evaluate(const VideoVolume& video, const LabelVolume& labels, const GroundTruthSet* gt,
                      const FlowField* flow, std::span<const Metric> metrics) {
  check_partition(labels, video.geometry());
  MetricReport r;
  r.num_supervoxels = labels.num_labels();
  r.supervoxels_per_frame = supervoxels_per_frame(labels);
  for (auto m : metrics) {
    if (needs_groundtruth(m) && !gt) throw InvalidArgument(std::string(metric_name(m)) + " requires groundtruth");
    if (m == Metric::kLC && !flow) throw InvalidArgument("lc requires a flow field");
    double v = 0.0;
    bool ok = true;
    switch (m) {
      case Metric::kUE3D: v = ue3d(labels, *gt); ok = v >= 0.0; break;
      case Metric::kSA3D: v = sa3d(labels, *gt); ok = v >= 0.0 && v <= 1.0; break;
      case Metric::kBRD: v = brd(labels, *gt); ok = v >= 0.0; break;
      case Metric::kLC: v = lc(labels, *flow); ok = v >= 0.0 && v <= 1.0; break;
      case Metric::kEV: v = ev(video, labels); ok = v >= 0.0 && v <= 1.0; break;
      case Metric::kMSV: v = msv(labels); ok = v >= 0.0; break;
      case Metric::kTEX: v = tex(labels); ok = v > 0.0 && v <= 1.0; break;
    }
    if (!ok || std::isnan(v)) {
      throw InvariantError(std::string(metric_name(m)) + " out of range: " + std::to_string(v));
    }
    r.scores[static_cast<std::size_t>(m)] = v;
  }
  return r;
}

}  // namespace svx
