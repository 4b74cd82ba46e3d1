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

#include <atomic>
#include <cstdlib>
#include <string>

#include "svx/error.hpp"
#include "svx/simd/kernels.hpp"

namespace svx::simd {

#if defined(SVX_HAVE_AVX2)
const Kernels& avx2_kernel_table();
#endif

const Kernels* avx2_kernels() {
#if defined(SVX_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2: return avx2_kernels() != nullptr;
  }
  return false;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

namespace {

const Kernels* default_kernels() {
  if (const char* env = std::getenv("SVX_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  if (auto* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> k{default_kernels()};
  return k;
}

}  // namespace

const Kernels& active() { return *current().load(std::memory_order_acquire); }

void set_active(Isa isa) {
  const Kernels* k = isa == Isa::kScalar ? &scalar_kernels() : avx2_kernels();
  if (!k) throw InvalidArgument("kernel variant '" + std::string(name(isa)) + "' is not available");
  current().store(k, std::memory_order_release);
}

}  // namespace svx::simd
