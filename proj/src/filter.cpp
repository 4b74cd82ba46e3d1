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

#include "svx/filter.hpp"

#include <algorithm>
#include <cmath>

#include "svx/simd/kernels.hpp"

namespace svx {

FloatVideo to_float(const VideoVolume& video) {
  FloatVideo out{video.geometry(), {}, {}, {}};
  const std::size_t n = video.size();
  out.r.resize(n);
  out.g.resize(n);
  out.b.resize(n);
  const auto voxels = video.voxels();
  for (std::size_t i = 0; i < n; ++i) {
    out.r[i] = voxels[i].r;
    out.g[i] = voxels[i].g;
    out.b[i] = voxels[i].b;
  }
  return out;
}

std::vector<float> gaussian_half_kernel(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("smoothing sigma must be non-negative");
  if (sigma == 0.0) return {1.0f};
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(radius + 1);
  for (int i = 0; i <= radius; ++i) taps[i] = std::exp(-0.5 * (i / sigma) * (i / sigma));
  double sum = taps[0];
  for (int i = 1; i <= radius; ++i) sum += 2.0 * taps[i];
  std::vector<float> out(radius + 1);
  for (int i = 0; i <= radius; ++i) out[i] = static_cast<float>(taps[i] / sum);
  return out;
}

namespace {

// Separable pass over one plane held in `plane` (width x height), in place.
void smooth_plane(float* plane, int width, int height, const std::vector<float>& kernel,
                  const simd::Kernels& k) {
  const int radius = static_cast<int>(kernel.size()) - 1;
  const float* taps = kernel.data() + 1;
  const std::size_t w = static_cast<std::size_t>(width);

  std::vector<const float*> minus(radius), plus(radius);
  std::vector<float> padded(w + 2 * radius);
  std::vector<float> tmp(w * height);

  for (int y = 0; y < height; ++y) {
    const float* row = plane + y * w;
    std::fill(padded.begin(), padded.begin() + radius, row[0]);
    std::copy(row, row + w, padded.begin() + radius);
    std::fill(padded.begin() + radius + w, padded.end(), row[w - 1]);
    const float* center = padded.data() + radius;
    for (int j = 1; j <= radius; ++j) {
      minus[j - 1] = center - j;
      plus[j - 1] = center + j;
    }
    k.symmetric_fir(center, minus.data(), plus.data(), taps, radius, tmp.data() + y * w, w);
  }
  for (int y = 0; y < height; ++y) {
    for (int j = 1; j <= radius; ++j) {
      minus[j - 1] = tmp.data() + std::max(y - j, 0) * w;
      plus[j - 1] = tmp.data() + std::min(y + j, height - 1) * w;
    }
    k.symmetric_fir(tmp.data() + y * w, minus.data(), plus.data(), taps, radius, plane + y * w, w);
  }
}

}  // namespace

void smooth_frame(std::span<const Rgb> frame, int width, int height, double sigma, float* r,
                  float* g, float* b) {
  const auto kernel = gaussian_half_kernel(sigma);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    r[i] = frame[i].r;
    g[i] = frame[i].g;
    b[i] = frame[i].b;
  }
  if (kernel.size() == 1 || frame.empty()) return;
  const auto& k = simd::active();
  smooth_plane(r, width, height, kernel, k);
  smooth_plane(g, width, height, kernel, k);
  smooth_plane(b, width, height, kernel, k);
}

FloatVideo smooth(const VideoVolume& video, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("smoothing sigma must be non-negative");
  FloatVideo out{video.geometry(), std::vector<float>(video.size()), std::vector<float>(video.size()),
                 std::vector<float>(video.size())};
  const std::size_t fs = video.geometry().frame_size();
  for (int t = 0; t < video.frames(); ++t) {
    smooth_frame(video.frame(t), video.width(), video.height(), sigma, out.r.data() + t * fs,
                 out.g.data() + t * fs, out.b.data() + t * fs);
  }
  return out;
}

}  // namespace svx
