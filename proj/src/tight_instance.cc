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

#include "poalab/tight_instance.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "poalab/errors.h"
#include "poalab/parallel.h"

namespace poalab {

namespace {

constexpr std::size_t kShardSize = 1 << 14;

double UnitInterval(std::mt19937_64& rng) {
  // (0, 1] with 53 random bits.
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

TightInstance MakeTightInstance(double gamma, double v) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidInput("tight instance needs gamma in (0, 1]");
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput("tight instance needs a positive finite value");
  }
  TightInstance inst;
  inst.gamma = gamma;
  inst.v = v;
  const double e = std::exp(-1.0 / gamma);
  inst.support_max = -std::expm1(-1.0 / gamma) * v;
  inst.atom_mass = (1.0 - gamma) + gamma * e;
  return inst;
}

TieBreakRule TightTieRule() { return TieBreakRule::FavorAtZero(1); }

CdfValue Cdf(const TightInstance& inst, double t) {
  if (t < 0.0) return {0.0, true};
  if (t > inst.support_max) return {1.0, true};
  const double g = inst.gamma;
  return {(1.0 - g) + g * std::exp(-1.0 / g) * inst.v / (inst.v - t), false};
}

double Density(const TightInstance& inst, double t) {
  if (t <= 0.0 || t > inst.support_max) return 0.0;
  const double g = inst.gamma;
  const double r = inst.v - t;
  return g * inst.v * std::exp(-1.0 / g) / (r * r);
}

std::vector<double> Sample(const TightInstance& inst, std::uint64_t seed,
                           std::size_t count) {
  std::vector<double> out(count);
  const std::size_t shards = (count + kShardSize - 1) / kShardSize;
  const double g = inst.gamma;
  const double ge = g * std::exp(-1.0 / g);
  ParallelFor(shards, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed),
                        static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(s),
                        static_cast<std::uint32_t>(s >> 32)};
      std::mt19937_64 rng(seq);
      const std::size_t lo = s * kShardSize;
      const std::size_t hi = std::min(count, lo + kShardSize);
      for (std::size_t j = lo; j < hi; ++j) {
        const double u = UnitInterval(rng);
        out[j] = u <= inst.atom_mass
                     ? 0.0
                     : std::min(inst.support_max,
                                inst.v * (1.0 - ge / (u - (1.0 - g))));
      }
    }
  });
  return out;
}

double EquilibriumUtility(const TightInstance& inst) {
  return inst.v * std::exp(-1.0 / inst.gamma);
}

double DeviationUtility(const TightInstance& inst, double b) {
  if (!(b > 0.0 && b <= inst.support_max)) {
    throw DomainError("deviation bid must lie in (0, support_max]");
  }
  const double g = inst.gamma;
  const double e = std::exp(-1.0 / g);
  return b * g * g * e - (1.0 - g) * std::log((inst.v - b) / inst.v) * g *
                             inst.v * e;
}

double FullDeviationUtility(const TightInstance& inst, double b) {
  return inst.atom_mass * (inst.v - inst.gamma * b) + DeviationUtility(inst, b);
}

double Bidder2DeviationUtility(const TightInstance& inst, double b) {
  if (!(b > 0.0)) throw DomainError("deviation bid must be positive");
  const double g = inst.gamma;
  const double c = g * inst.v * std::exp(-1.0 / g);
  const double top = std::min(b, inst.support_max);
  // Integral of t dF(t) over (0, top).
  const double mean_part = c * (inst.v / (inst.v - top) - 1.0 +
                                std::log((inst.v - top) / inst.v));
  const double win = Cdf(inst, top).value;
  return -(g * b * win + (1.0 - g) * mean_part);
}

MonteCarloSummary SimulateTight(const TightInstance& inst, std::uint64_t seed,
                                std::size_t samples) {
  if (samples < 2) throw InvalidInput("need at least two samples");
  const auto ts = Sample(inst, seed, samples);
  const ValuationProfile vals({{inst.v}, {0.0}});
  const TieBreakRule tie = TightTieRule();
  double sw = 0.0;
  double sw2 = 0.0;
  double u = 0.0;
  double u2 = 0.0;
  std::size_t wins = 0;
  for (double t : ts) {
    const BidProfile b({{t}, {t}});
    const Allocation a = Allocate(vals, b, tie);
    const auto pay = PayHybrid(inst.gamma, b, a);
    const double w = vals.value(0, a.units[0]) + vals.value(1, a.units[1]);
    const double ui = vals.value(0, a.units[0]) - pay[0];
    sw += w;
    sw2 += w * w;
    u += ui;
    u2 += ui * ui;
    wins += a.units[0];
  }
  const double n = static_cast<double>(samples);
  MonteCarloSummary mc;
  mc.samples = samples;
  mc.welfare_mean = sw / n;
  mc.welfare_se =
      std::sqrt(std::max(0.0, sw2 / n - mc.welfare_mean * mc.welfare_mean) /
                (n - 1.0));
  mc.utility_mean = u / n;
  mc.utility_se =
      std::sqrt(std::max(0.0, u2 / n - mc.utility_mean * mc.utility_mean) /
                (n - 1.0));
  mc.bidder1_win_rate = static_cast<double>(wins) / n;
  mc.ratio = inst.v / mc.welfare_mean;
  const double analytic = inst.v * inst.gamma * -std::expm1(-1.0 / inst.gamma);
  mc.welfare_within_3se =
      std::abs(mc.welfare_mean - analytic) <= 3.0 * mc.welfare_se;
  return mc;
}

TightReport VerifyTight(const TightInstance& inst,
                        std::size_t deviation_grid_size) {
  if (deviation_grid_size < 2) throw InvalidInput("grid needs two points");
  TightReport rep;
  rep.grid_size = deviation_grid_size;
  const double eq = EquilibriumUtility(inst);
  const double g = inst.gamma;
  rep.max_gain = -std::numeric_limits<double>::infinity();
  rep.continuous_gain = -std::numeric_limits<double>::infinity();
  rep.monotone_on_grid = true;
  rep.bidder2_no_gain = true;
  double prev = 0.0;
  for (std::size_t j = 1; j <= deviation_grid_size; ++j) {
    const double b = j == deviation_grid_size
                         ? inst.support_max
                         : inst.support_max * static_cast<double>(j) /
                               static_cast<double>(deviation_grid_size);
    const double dev = DeviationUtility(inst, b);
    rep.continuous_gain = std::max(rep.continuous_gain, dev - eq);
    rep.max_gain = std::max(rep.max_gain, FullDeviationUtility(inst, b) - eq);
    if (j > 1 && dev < prev) rep.monotone_on_grid = false;
    prev = dev;
    if (Bidder2DeviationUtility(inst, b) > 0.0) rep.bidder2_no_gain = false;
  }
  // The closed form is increasing in b, so its supremum sits at support_max;
  // bids above it only raise the payment.
  const double endpoint = DeviationUtility(inst, inst.support_max);
  const double cap = (-std::expm1(-1.0 / g) * g * g + (1.0 - g)) * eq;
  rep.endpoint_bound_holds = endpoint <= cap * (1.0 + 1e-12) && cap <= eq;
  // The full deviation utility is convex in b, so its supremum over
  // (0, support_max] is at an end; the limit b -> 0+ is atom_mass * v.
  rep.max_gain = std::max(rep.max_gain, inst.atom_mass * inst.v - eq);
  rep.welfare = inst.v * g * -std::expm1(-1.0 / g);
  rep.welfare_ratio = inst.v / rep.welfare;
  rep.is_cce_analytic = rep.max_gain <= 1e-10 * inst.v &&
                        rep.monotone_on_grid && rep.endpoint_bound_holds &&
                        rep.bidder2_no_gain;
  return rep;
}

}  // namespace poalab
