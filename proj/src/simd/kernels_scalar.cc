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

#include <cmath>

#include "kernels_internal.h"

namespace poalab::simd::internal {
namespace {

void Axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void AddScalar(double c, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += c;
}

double Dot(const double* x, const double* y, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) s[l] += x[i + l] * y[i + l];
  }
  double total = (s[0] + s[1]) + (s[2] + s[3]);
  for (std::size_t i = body; i < n; ++i) total += x[i] * y[i];
  return total;
}

ArgMin ArgMinScan(const double* x, std::size_t n) {
  ArgMin best{0, x[0]};
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] < best.value) best = {i, x[i]};
  }
  return best;
}

double MaxAbs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i]));
  return m;
}

}  // namespace

const KernelTable kScalarTable = {"scalar", Axpy, AddScalar, Dot, ArgMinScan,
                                  MaxAbs};

}  // namespace poalab::simd::internal
