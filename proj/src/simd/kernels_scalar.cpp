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

#include <cmath>

#include "svx/simd/kernels.hpp"

namespace svx::simd {

namespace {

void symmetric_fir_scalar(const float* center, const float* const* minus, const float* const* plus,
                          const float* taps, int radius, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float c = center[i];
    float acc = c;
    for (int j = 0; j < radius; ++j) {
      acc = acc + taps[j] * ((minus[j][i] - c) + (plus[j][i] - c));
    }
    out[i] = acc;
  }
}

void color_distance_scalar(const float* r0, const float* g0, const float* b0, const float* r1,
                           const float* g1, const float* b1, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float dr = r0[i] - r1[i];
    const float dg = g0[i] - g1[i];
    const float db = b0[i] - b1[i];
    out[i] = std::sqrt(dr * dr + dg * dg + db * db);
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::kScalar, symmetric_fir_scalar, color_distance_scalar};
  return k;
}

}  // namespace svx::simd
