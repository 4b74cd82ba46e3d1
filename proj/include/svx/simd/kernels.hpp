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

#include <cstddef>
#include <string_view>

// Data-parallel inner loops with a scalar reference and vector variants.
// Every variant must produce bit-identical results to the scalar one: the
// arithmetic is written as the same sequence of IEEE single-precision
// mul/add/sqrt operations in the same order, with contraction disabled.

namespace svx::simd {

enum class Isa { kScalar, kAvx2 };

struct Kernels {
  Isa isa;

  /// Normalized symmetric FIR in centered form:
  /// out[i] = center[i] + sum_{j=1..radius} taps[j-1] * ((minus[j-1][i] - center[i]) + (plus[j-1][i] - center[i]))
  /// Constant input is reproduced exactly.
  void (*symmetric_fir)(const float* center, const float* const* minus, const float* const* plus,
                        const float* taps, int radius, float* out, std::size_t n);

  /// out[i] = sqrt((r0-r1)^2 + (g0-g1)^2 + (b0-b1)^2)
  void (*color_distance)(const float* r0, const float* g0, const float* b0, const float* r1,
                         const float* g1, const float* b1, float* out, std::size_t n);
};

const Kernels& scalar_kernels();

/// Null when the variant was not compiled in or the CPU lacks the extension.
const Kernels* avx2_kernels();

bool available(Isa isa);
std::string_view name(Isa isa);

/// Kernel table in use. Defaults to the widest available variant; the
/// SVX_SIMD environment variable (scalar|avx2) overrides the default.
const Kernels& active();

/// Throws InvalidArgument when `isa` is unavailable.
void set_active(Isa isa);

}  // namespace svx::simd
