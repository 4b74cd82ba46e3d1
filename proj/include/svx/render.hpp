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
#include <vector>

#include "svx/video.hpp"

namespace svx {

/// Deterministic display colors for labels 0..n-1, pairwise distinct. Each
/// label's color is a hash of its id, re-hashed while it collides with the
/// color of a smaller id. Requires n < 2^24.
std::vector<Rgb> label_palette(std::uint32_t n);

/// Frames of `labels` painted with label_palette.
VideoVolume render_labels(const LabelVolume& labels);

}  // namespace svx
