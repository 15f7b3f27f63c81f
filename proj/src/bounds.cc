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

#include "poalab/bounds.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "poalab/errors.h"
#include "poalab/lambert_w.h"

namespace poalab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCitedPneConstant = 2.1885;

void CheckGamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidInput("gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
}

// x log x with the continuous extension at 0.
double XLogX(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

template <typename F>
double Bisect(F f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int it = 0; it < iterations && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimization on [lo, hi]; returns the argmin.
template <typename F>
double GoldenMin(F f, double lo, double hi, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

double OverbidValue(double gamma) {
  return 1.0 / (gamma * -std::expm1(-1.0 / gamma));
}

// (1 + alpha - gamma) / (alpha (1 - e^{-1/alpha})) at the stationary alpha.
double LambertBound(double gamma) {
  const double z = (2.0 - gamma) / (1.0 - gamma);
  return -(1.0 - gamma) * LambertWm1(-std::exp(-z));
}

double ComputeSwitchGamma() {
  const double g = Bisect([](double x) { return NobLambertAlpha(x) - x; }, 0.5, 0.7);
  if (!(g > 0.60 && g < 0.61)) {
    throw InternalError("switch point of the no-overbidding bound is " +
                        std::to_string(g) + ", expected it in (0.60, 0.61)");
  }
  return g;
}

double ComputeLowThreshold() {
  return Bisect(
      [](double g) { return g - (1.0 - g) * std::exp(-1.0 / (1.0 - g)); }, 0.1,
      0.3);
}

BoundResult Min(BoundResult a, BoundResult b) {
  return b.value < a.value ? b : a;
}

}  // namespace

BoundResult SmoothnessPoa(SmoothnessParams params, double gamma, bool nob) {
  CheckGamma(gamma);
  if (!(params.lambda > 0.0)) throw InvalidInput("smoothness lambda must be > 0");
  if (!(params.mu >= 0.0)) throw InvalidInput("smoothness mu must be >= 0");
  if (params.mu > gamma && !nob) {
    throw InapplicableBound(
        "mu > gamma requires the no-overbidding assumption");
  }
  BoundResult r;
  r.value = std::max(1.0, 1.0 + params.mu - gamma) / params.lambda;
  r.source = kSrcSmoothness;
  r.internals.alpha = params.mu;
  return r;
}

BoundResult BoundOverbid(double gamma) {
  CheckGamma(gamma);
  BoundResult r;
  if (gamma == 0.0) {
    r.value = kInf;
    r.source = kSrcSpUnbounded;
    return r;
  }
  r.value = OverbidValue(gamma);
  r.source = kSrcOverbid;
  r.internals.alpha = gamma;
  return r;
}

double NobLambertAlpha(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidInput("the no-overbidding smoothness optimum needs gamma in [0, 1)");
  }
  const double z = (2.0 - gamma) / (1.0 - gamma);
  return -1.0 / (LambertWm1(-std::exp(-z)) + z);
}

double NobLambertSwitchGamma() {
  static const double value = ComputeSwitchGamma();
  return value;
}

BoundResult BoundNobMultiUnit(double gamma) {
  CheckGamma(gamma);
  if (gamma >= 1.0 || gamma > NobLambertSwitchGamma()) return BoundOverbid(gamma);
  const double alpha = NobLambertAlpha(gamma);
  if (alpha < gamma) return BoundOverbid(gamma);
  BoundResult r;
  r.value = LambertBound(gamma);
  r.source = kSrcNobLambert;
  r.internals.alpha = alpha;
  return r;
}

BoundResult BoundSingleItemNob(double gamma) {
  CheckGamma(gamma);
  BoundResult r;
  r.source = kSrcSingleItemNob;
  r.value = gamma == 1.0 ? kInf : 1.0 / (1.0 - gamma);
  return r;
}

double TwoPlayerWelfare(double gamma, double alpha, double beta) {
  const double g2 = 2.0 * gamma - 1.0;
  const double la = std::log(alpha);
  return 1.0 + gamma * beta + g2 * XLogX(alpha - beta) +
         (2.0 - 3.0 * gamma) * alpha * la + g2 * beta * la +
         gamma * XLogX(beta) - gamma * beta * std::log1p(-alpha);
}

double TwoPlayerBeta(double gamma, double alpha) {
  const double g2 = 2.0 * gamma - 1.0;
  // d/dbeta of TwoPlayerWelfare.
  auto slope = [&](double beta) {
    return g2 * std::log(alpha / (alpha - beta)) +
           gamma * std::log(beta / (1.0 - alpha)) + 1.0;
  };
  const double eps = 1e-15 * alpha;
  const double lo = eps;
  const double hi = alpha - eps;
  if (slope(lo) >= 0.0) return lo;
  if (slope(hi) <= 0.0) return hi;
  return Bisect(slope, lo, hi);
}

BoundResult BoundTwoPlayerHigh(double gamma) {
  if (!(gamma >= 0.5 && gamma <= 1.0)) {
    throw InapplicableBound("the two-player numeric bound needs gamma in [1/2, 1]");
  }
  auto profile = [gamma](double alpha) {
    return TwoPlayerWelfare(gamma, alpha, TwoPlayerBeta(gamma, alpha));
  };

  // The alpha-profile looks unimodal but that is not proven: scan first, then
  // refine around the best scan point and over the full interval.
  constexpr int kScan = 200;
  int best_j = 1;
  double best_val = profile(1.0 / kScan);
  for (int j = 2; j < kScan; ++j) {
    const double val = profile(static_cast<double>(j) / kScan);
    if (val < best_val) {
      best_val = val;
      best_j = j;
    }
  }
  double best_alpha = static_cast<double>(best_j) / kScan;
  const double local = GoldenMin(profile, static_cast<double>(best_j - 1) / kScan,
                                 static_cast<double>(best_j + 1) / kScan);
  const double global = GoldenMin(profile, 1e-9, 1.0 - 1e-9);
  for (double cand : {local, global}) {
    const double val = profile(cand);
    if (val < best_val) {
      best_val = val;
      best_alpha = cand;
    }
  }

  BoundResult r;
  r.value = 1.0 / best_val;
  r.source = kSrcTwoPlayerNumeric;
  r.internals.alpha = best_alpha;
  r.internals.beta = TwoPlayerBeta(gamma, best_alpha);
  r.internals.min_welfare = best_val;
  return r;
}

double TwoPlayerLowThreshold() {
  static const double value = ComputeLowThreshold();
  return value;
}

BoundResult BoundTwoPlayerLow(double gamma) {
  if (!(gamma > TwoPlayerLowThreshold() && gamma <= 0.5)) {
    throw InapplicableBound("the two-player closed form needs gamma in (" +
                            std::to_string(TwoPlayerLowThreshold()) + ", 1/2]");
  }
  const double e = std::exp(-1.0 / (1.0 - gamma));
  const double alpha = std::exp(-1.0 - e);
  BoundResult r;
  r.value = 1.0 / (1.0 - (1.0 - gamma) * (e + alpha));
  r.source = kSrcTwoPlayerClosedForm;
  r.internals.alpha = alpha;
  r.internals.beta = (1.0 - alpha) * e;
  r.internals.min_welfare = 1.0 / r.value;
  return r;
}

BoundResult PnePoa(double gamma, Setting /*setting*/, bool nob) {
  CheckGamma(gamma);
  if (!nob) {
    throw InapplicableBound(
        "pure equilibria with overbidding are not covered; use the CCE bounds");
  }
  BoundResult r;
  if (gamma == 0.0) {
    r.value = kCitedPneConstant;
    r.source = kSrcPneCited;
  } else {
    r.value = 1.0;
    r.source = kSrcPneEfficient;
  }
  return r;
}

BoundResult PanelBound(Panel panel, double gamma) {
  CheckGamma(gamma);
  switch (panel) {
    case Panel::kA:
      return BoundOverbid(gamma);
    case Panel::kB:
      return Min(BoundOverbid(gamma), BoundNobMultiUnit(gamma));
    case Panel::kC:
      return Min(PanelBound(Panel::kB, gamma), BoundSingleItemNob(gamma));
    case Panel::kD: {
      BoundResult r = BoundSingleItemNob(gamma);
      if (gamma > TwoPlayerLowThreshold() && gamma <= 0.5) {
        r = Min(r, BoundTwoPlayerLow(gamma));
      }
      if (gamma >= 0.5) r = Min(r, BoundTwoPlayerHigh(gamma));
      return r;
    }
  }
  throw InvalidInput("unknown panel");
}

Envelope ComputeEnvelope(Panel panel, std::span<const double> gammas) {
  Envelope env;
  env.gammas.assign(gammas.begin(), gammas.end());
  env.results.reserve(gammas.size());
  for (double g : gammas) env.results.push_back(PanelBound(panel, g));
  for (std::size_t i = 1; i < env.results.size(); ++i) {
    const std::string& left = env.results[i - 1].source;
    const std::string& right = env.results[i].source;
    if (left == right) continue;
    double lo = env.gammas[i - 1];
    double hi = env.gammas[i];
    // The unbounded case holds only at gamma = 0.
    if (left == kSrcSpUnbounded) {
      env.crossovers.push_back({lo, left, right});
      continue;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (PanelBound(panel, mid).source == left) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    env.crossovers.push_back({0.5 * (lo + hi), left, right});
  }
  return env;
}

Panel PanelFor(const BoundQuery& q) {
  if (!q.nob) return Panel::kA;
  if (q.setting == Setting::kMultiUnit) return Panel::kB;
  if (q.n && *q.n == 2) return Panel::kD;
  return Panel::kC;
}

BoundResult ApplicableBound(const BoundQuery& q) {
  CheckGamma(q.gamma);
  if (q.n && *q.n < 2) throw InvalidInput("bidder count must be at least 2");
  if (q.eq == EquilibriumClass::kPne && q.nob) {
    return PnePoa(q.gamma, q.setting, q.nob);
  }
  if (q.eq == EquilibriumClass::kCe && q.nob && q.setting == Setting::kSingleItem) {
    BoundResult r;
    r.value = 1.0;
    r.source = kSrcCeEfficient;
    return r;
  }
  // PNE and CE are special cases of CCE.
  return PanelBound(PanelFor(q), q.gamma);
}

std::vector<BoundResult> EnvelopeForQuery(const BoundQuery& query,
                                          std::span<const double> gammas) {
  std::vector<BoundResult> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    BoundQuery q = query;
    q.gamma = g;
    out.push_back(ApplicableBound(q));
  }
  return out;
}

}  // namespace poalab
