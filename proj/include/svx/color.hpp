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

#include "svx/video.hpp"

namespace svx {

// sRGB (IEC 61966-2-1 companding) -> XYZ -> CIE Lab, D65 reference white.
// The constants below are the only ones used anywhere for Lab features, so
// histograms are reproducible across runs and machines.
namespace lab_constants {
inline constexpr double kWhiteX = 0.95047;
inline constexpr double kWhiteY = 1.00000;
inline constexpr double kWhiteZ = 1.08883;
inline constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
}  // namespace lab_constants

Lab rgb_to_lab(Rgb c);
LabVolume rgb_to_lab(const VideoVolume& video);

}  // namespace svx
