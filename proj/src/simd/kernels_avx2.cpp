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

// Compiled with -mavx2 (and without -mfma); only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "svx/simd/kernels.hpp"

namespace svx::simd {

namespace {

void symmetric_fir_avx2(const float* center, const float* const* minus, const float* const* plus,
                        const float* taps, int radius, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 c = _mm256_loadu_ps(center + i);
    __m256 acc = c;
    for (int j = 0; j < radius; ++j) {
      const __m256 lo = _mm256_sub_ps(_mm256_loadu_ps(minus[j] + i), c);
      const __m256 hi = _mm256_sub_ps(_mm256_loadu_ps(plus[j] + i), c);
      acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(taps[j]), _mm256_add_ps(lo, hi)));
    }
    _mm256_storeu_ps(out + i, acc);
  }
  for (; i < n; ++i) {
    const float c = center[i];
    float acc = c;
    for (int j = 0; j < radius; ++j) acc = acc + taps[j] * ((minus[j][i] - c) + (plus[j][i] - c));
    out[i] = acc;
  }
}

void color_distance_avx2(const float* r0, const float* g0, const float* b0, const float* r1,
                         const float* g1, const float* b1, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 dr = _mm256_sub_ps(_mm256_loadu_ps(r0 + i), _mm256_loadu_ps(r1 + i));
    const __m256 dg = _mm256_sub_ps(_mm256_loadu_ps(g0 + i), _mm256_loadu_ps(g1 + i));
    const __m256 db = _mm256_sub_ps(_mm256_loadu_ps(b0 + i), _mm256_loadu_ps(b1 + i));
    __m256 sum = _mm256_add_ps(_mm256_mul_ps(dr, dr), _mm256_mul_ps(dg, dg));
    sum = _mm256_add_ps(sum, _mm256_mul_ps(db, db));
    _mm256_storeu_ps(out + i, _mm256_sqrt_ps(sum));
  }
  for (; i < n; ++i) {
    const float dr = r0[i] - r1[i];
    const float dg = g0[i] - g1[i];
    const float db = b0[i] - b1[i];
    out[i] = std::sqrt(dr * dr + dg * dg + db * db);
  }
}

}  // namespace

const Kernels& avx2_kernel_table() {
  static const Kernels k{Isa::kAvx2, symmetric_fir_avx2, color_distance_avx2};
  return k;
}

}  // namespace svx::simd
