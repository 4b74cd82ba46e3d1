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

#include "svx/video.hpp"

namespace svx {

/// A generated video together with its exact groundtruth and forward flow.
struct SyntheticVideo {
  VideoVolume video;
  GroundTruthSet groundtruth;
  FlowField flow;
};

struct MovingSquareSpec {
  int width = 64;
  int height = 64;
  int frames = 30;
  int side = 16;
  int start_x = 8;
  int start_y = 24;
  int speed = 1;  ///< pixels per frame along x
  Rgb background{40, 60, 90};
  Rgb square{230, 180, 40};
  /// Uniform per-channel noise amplitude added to every voxel (0 = clean).
  int noise = 0;
  std::uint32_t seed = 1;
};

/// Square translating along x over a static background. Groundtruth is dense
/// (every frame annotated, background = 0, square = 1). Flow is 0 on the
/// background and `speed` on the square; background pixels covered by the
/// square in the next frame are marked invalid (occluded).
SyntheticVideo moving_square(const MovingSquareSpec& spec);

/// Left half black, right half white.
VideoVolume half_split(int width, int height, int frames);

/// Single-color volume.
VideoVolume constant_video(int width, int height, int frames, Rgb color);

}  // namespace svx
