// Copyright 2026 The poa-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string_view>

#include "kernels_internal.h"

namespace poalab::simd {

const KernelTable& ScalarKernels() { return internal::kScalarTable; }

const KernelTable* Avx2Kernels() {
#if defined(POALAB_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &internal::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* NeonKernels() {
#if defined(POALAB_HAVE_NEON)
  return &internal::kNeonTable;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& Select() {
  const char* env = std::getenv("POA_LAB_SIMD");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return ScalarKernels();
  if (want == "avx2" && Avx2Kernels()) return *Avx2Kernels();
  if (want == "neon" && NeonKernels()) return *NeonKernels();
  if (const KernelTable* t = Avx2Kernels()) return *t;
  if (const KernelTable* t = NeonKernels()) return *t;
  return ScalarKernels();
}

}  // namespace

const KernelTable& ActiveKernels() {
  static const KernelTable& table = Select();
  return table;
}

}  // namespace poalab::simd
