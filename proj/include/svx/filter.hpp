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

#include <vector>

#include "svx/video.hpp"

namespace svx {

/// Planar single-precision RGB volume: the smoothed signal edge weights are
/// computed from. Channels are stored as separate contiguous planes.
struct FloatVideo {
  Geometry geometry;
  std::vector<float> r, g, b;
};

/// Exact float copy of an 8-bit video.
FloatVideo to_float(const VideoVolume& video);

/// Normalized half-kernel of a sampled Gaussian: taps [0, radius], radius =
/// ceil(4 sigma), with taps[0] + 2 * sum(taps[1..]) == 1.
std::vector<float> gaussian_half_kernel(double sigma);

/// Per-frame (spatial only) separable Gaussian, replicated borders. sigma == 0
/// returns the exact input values. Throws InvalidArgument for sigma < 0.
FloatVideo smooth(const VideoVolume& video, double sigma);

/// Smooths one frame into three caller-provided planes of width * height floats.
void smooth_frame(std::span<const Rgb> frame, int width, int height, double sigma, float* r,
                  float* g, float* b);

}  // namespace svx
