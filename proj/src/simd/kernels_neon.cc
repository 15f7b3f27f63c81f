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

#include <arm_neon.h>

#include <cmath>

#include "kernels_internal.h"

namespace poalab::simd::internal {
namespace {

void Axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void AddScalar(double c, double* y, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vc));
  for (; i < n; ++i) y[i] += c;
}

double Dot(const double* x, const double* y, std::size_t n) {
  // Two registers hold the four canonical lanes (0,1) and (2,3).
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double total = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
                 (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (std::size_t i = body; i < n; ++i) total += x[i] * y[i];
  return total;
}

ArgMin ArgMinVec(const double* x, std::size_t n) {
  double m = x[0];
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t vm = vld1q_f64(x);
    for (i = 2; i + 2 <= n; i += 2) vm = vminq_f64(vm, vld1q_f64(x + i));
    const double a = vgetq_lane_f64(vm, 0);
    const double b = vgetq_lane_f64(vm, 1);
    m = b < a ? b : a;
  }
  for (; i < n; ++i) m = x[i] < m ? x[i] : m;
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] == m) return {j, x[j]};
  }
  return {0, x[0]};
}

double MaxAbs(const double* x, std::size_t n) {
  float64x2_t vm = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vm = vmaxq_f64(vm, vabsq_f64(vld1q_f64(x + i)));
  double m = std::fmax(vgetq_lane_f64(vm, 0), vgetq_lane_f64(vm, 1));
  for (; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const KernelTable kNeonTable = {"neon", Axpy, AddScalar, Dot, ArgMinVec, MaxAbs};

}  // namespace poalab::simd::internal
