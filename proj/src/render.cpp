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

#include "svx/render.hpp"

#include <unordered_set>

namespace svx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<Rgb> label_palette(std::uint32_t n) {
  if (n >= (1u << 24)) throw CapacityError("label_palette: too many labels for distinct colors");
  std::vector<Rgb> colors(n);
  std::unordered_set<std::uint32_t> used;
  used.reserve(n);
  for (std::uint32_t id = 0; id < n; ++id) {
    std::uint64_t h = splitmix64(id);
    std::uint32_t c = static_cast<std::uint32_t>(h) & 0xFFFFFFu;
    while (!used.insert(c).second) {
      h = splitmix64(h);
      c = static_cast<std::uint32_t>(h) & 0xFFFFFFu;
    }
    colors[id] = {static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(c >> 8), static_cast<std::uint8_t>(c >> 16)};
  }
  return colors;
}

VideoVolume render_labels(const LabelVolume& labels) {
  const auto palette = label_palette(labels.num_labels());
  std::vector<Rgb> voxels(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) voxels[i] = palette[labels[i]];
  return VideoVolume(labels.geometry(), std::move(voxels));
}

}  // namespace svx
