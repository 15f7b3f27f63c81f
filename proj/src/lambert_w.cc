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

#include "poalab/lambert_w.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "poalab/errors.h"

namespace poalab {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

// Root of h(w) = w + log(-w) - log(-x) on (-inf, -1]. h is increasing there,
// h(-1) > 0 and h(2 log(-x) - 1) < 0, so the root is always bracketed.
double SolveLogForm(double x) {
  const double target = std::log(-x);
  double lo = 2.0 * target - 1.0;
  double hi = -1.0;

  double w;
  const double p2 = 2.0 * (1.0 + std::numbers::e * x);
  if (p2 < 0.5) {
    // Branch-point series in p = -sqrt(2 (1 + e x)).
    const double p = -std::sqrt(p2);
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    const double l2 = std::log(-target);
    w = target - l2 + l2 / target;
  }
  if (!(w > lo && w < hi)) w = 0.5 * (lo + hi);

  for (int iter = 0; iter < 100; ++iter) {
    const double h = w + std::log(-w) - target;
    if (h == 0.0) return w;
    if (h > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    const double d1 = 1.0 + 1.0 / w;
    const double d2 = -1.0 / (w * w);
    const double denom = 2.0 * d1 * d1 - h * d2;
    double next = denom != 0.0 ? w - 2.0 * h * d1 / denom : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::abs(w)) {
      return next;
    }
    w = next;
  }
  return w;
}

}  // namespace

double LambertWm1(double x) {
  if (std::abs(x + kInvE) < 1e-15) return -1.0;
  if (!(x > -kInvE && x < 0.0)) {
    throw DomainError("W_{-1} is defined on [-1/e, 0), got " + std::to_string(x));
  }
  double w = SolveLogForm(x);
  // One Halley polish on w e^w - x; it only helps near the branch point
  // where the log form is flat.
  const double ew = std::exp(w);
  const double f = w * ew - x;
  const double fp = ew * (w + 1.0);
  const double fpp = ew * (w + 2.0);
  const double denom = 2.0 * fp * fp - f * fpp;
  if (denom != 0.0) {
    const double polished = w - 2.0 * f * fp / denom;
    if (polished <= -1.0 &&
        std::abs(polished * std::exp(polished) - x) < std::abs(f)) {
      w = polished;
    }
  }
  return w;
}

}  // namespace poalab
