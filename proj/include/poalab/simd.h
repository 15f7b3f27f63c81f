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

#ifndef POALAB_SIMD_H_
#define POALAB_SIMD_H_

// Dense double-precision kernels behind the LP pricing loop and the basis
// updates. Each kernel has a scalar reference and vector variants selected at
// runtime; all variants produce bit-identical results.
//
// Reductions use a fixed order: four interleaved partial sums over the
// largest multiple-of-four prefix, combined as (s0 + s1) + (s2 + s3), then
// the tail added left to right. The scalar reference emulates that order.
// Builds must not contract a*b+c into FMA (-ffp-contract=off).
//
// POA_LAB_SIMD=scalar|avx2|neon overrides automatic selection.

#include <cstddef>
#include <span>

namespace poalab::simd {

struct ArgMin {
  std::size_t index = 0;
  double value = 0.0;
};

struct KernelTable {
  const char* name;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] += c
  void (*add_scalar)(double c, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // First index of the minimum; n must be > 0.
  ArgMin (*argmin)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& ScalarKernels();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* Avx2Kernels();
const KernelTable* NeonKernels();

// Kernel set used by the library, chosen once per process.
const KernelTable& ActiveKernels();

inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  ActiveKernels().axpy(a, x.data(), y.data(), y.size());
}
inline void AddScalar(double c, std::span<double> y) {
  ActiveKernels().add_scalar(c, y.data(), y.size());
}
inline double Dot(std::span<const double> x, std::span<const double> y) {
  return ActiveKernels().dot(x.data(), y.data(), x.size());
}
inline ArgMin ArgMinOf(std::span<const double> x) {
  return ActiveKernels().argmin(x.data(), x.size());
}
inline double MaxAbs(std::span<const double> x) {
  return ActiveKernels().max_abs(x.data(), x.size());
}

}  // namespace poalab::simd

#endif  // POALAB_SIMD_H_
