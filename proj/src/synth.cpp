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

#include "svx/synth.hpp"

#include <algorithm>
#include <random>

namespace svx {

namespace {

bool inside_square(const MovingSquareSpec& s, int x, int y, int t) {
  const int x0 = s.start_x + s.speed * t;
  return x >= x0 && x < x0 + s.side && y >= s.start_y && y < s.start_y + s.side;
}

std::uint8_t add_noise(std::uint8_t v, int delta) {
  return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + delta, 0, 255));
}

}  // namespace

SyntheticVideo moving_square(const MovingSquareSpec& s) {
  if (s.width < 1 || s.height < 1 || s.frames < 1 || s.side < 1 || s.noise < 0) {
    throw InvalidArgument("moving_square: invalid geometry");
  }
  const Geometry geo{s.width, s.height, s.frames};
  std::vector<Rgb> voxels(geo.voxel_count());
  Annotation ann;
  ann.labels.resize(geo.voxel_count());
  // mt19937 output is fully specified, unlike the std distributions.
  std::mt19937 rng(s.seed);
  const int span = 2 * s.noise + 1;
  for (int t = 0; t < s.frames; ++t) {
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        const std::size_t i = geo.index(x, y, t);
        const bool in = inside_square(s, x, y, t);
        Rgb c = in ? s.square : s.background;
        if (s.noise > 0) {
          c.r = add_noise(c.r, static_cast<int>(rng() % span) - s.noise);
          c.g = add_noise(c.g, static_cast<int>(rng() % span) - s.noise);
          c.b = add_noise(c.b, static_cast<int>(rng() % span) - s.noise);
        }
        voxels[i] = c;
        ann.labels[i] = in ? 1u : 0u;
      }
    }
  }

  FlowField flow;
  for (int t = 0; t + 1 < s.frames; ++t) {
    FlowMap m;
    m.width = s.width;
    m.height = s.height;
    m.u.assign(geo.frame_size(), 0.f);
    m.v.assign(geo.frame_size(), 0.f);
    m.valid.assign(geo.frame_size(), 1);
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * s.width + x;
        if (inside_square(s, x, y, t)) {
          m.u[p] = static_cast<float>(s.speed);
        } else if (inside_square(s, x, y, t + 1)) {
          m.valid[p] = 0;
        }
      }
    }
    flow.maps.push_back(std::move(m));
  }

  std::vector<int> frames(s.frames);
  for (int t = 0; t < s.frames; ++t) frames[t] = t;
  std::vector<Annotation> anns;
  anns.push_back(std::move(ann));
  return {VideoVolume(geo, std::move(voxels)), GroundTruthSet(geo, std::move(frames), std::move(anns)),
          std::move(flow)};
}

VideoVolume half_split(int width, int height, int frames) {
  const Geometry geo{width, height, frames};
  std::vector<Rgb> voxels(geo.voxel_count());
  for (int t = 0; t < frames; ++t) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        voxels[geo.index(x, y, t)] = x < width / 2 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
      }
    }
  }
  return VideoVolume(geo, std::move(voxels));
}

VideoVolume constant_video(int width, int height, int frames, Rgb color) {
  const Geometry geo{width, height, frames};
  return VideoVolume(geo, std::vector<Rgb>(geo.voxel_count(), color));
}

}  // namespace svx
