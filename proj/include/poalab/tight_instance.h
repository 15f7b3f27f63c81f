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

#ifndef POALAB_TIGHT_INSTANCE_H_
#define POALAB_TIGHT_INSTANCE_H_

// Two bidders, one item, values (v, 0). Both bid the same t drawn from
//
//     F(t) = (1 - gamma) + gamma e^{-1/gamma} v / (v - t),
//     0 <= t <= (1 - e^{-1/gamma}) v,
//
// which has an atom at 0. A tie at zero goes to bidder 2; positive ties go to
// bidder 1. The distribution is a coarse correlated equilibrium whose welfare
// ratio is 1 / (gamma (1 - e^{-1/gamma})).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "poalab/auction.h"

namespace poalab {

struct TightInstance {
  double gamma = 1.0;
  double v = 1.0;
  double support_max = 0.0;
  double atom_mass = 0.0;
};

TightInstance MakeTightInstance(double gamma, double v);

// Tie rule of the construction: bidder index 1 wins ties at zero.
TieBreakRule TightTieRule();

struct CdfValue {
  double value = 0.0;
  bool clamped = false;
};

CdfValue Cdf(const TightInstance& inst, double t);
// Density of the continuous part on (0, support_max).
double Density(const TightInstance& inst, double t);

// Common bid t of each sampled profile (t, t). Reproducible for a seed and
// independent of the worker count.
std::vector<double> Sample(const TightInstance& inst, std::uint64_t seed,
                           std::size_t count);

double EquilibriumUtility(const TightInstance& inst);
// Closed form of bidder 1's expected utility from always bidding b in
// (0, support_max], integrated over draws t in (0, b] only.
double DeviationUtility(const TightInstance& inst, double b);
// Same deviation including draws at the atom t = 0, where b > 0 wins outright
// and pays gamma * b.
double FullDeviationUtility(const TightInstance& inst, double b);
// Bidder 2's expected utility from always bidding b > 0.
double Bidder2DeviationUtility(const TightInstance& inst, double b);

struct MonteCarloSummary {
  std::size_t samples = 0;
  double welfare_mean = 0.0;
  double welfare_se = 0.0;
  double ratio = 0.0;
  double bidder1_win_rate = 0.0;
  double utility_mean = 0.0;
  double utility_se = 0.0;
  bool welfare_within_3se = false;
};

struct TightReport {
  bool is_cce_analytic = false;
  double max_gain = 0.0;  // sup over bids of full deviation minus equilibrium
  double continuous_gain = 0.0;  // same for the closed form without the atom
  bool monotone_on_grid = false;
  bool endpoint_bound_holds = false;
  bool bidder2_no_gain = false;
  double welfare = 0.0;
  double welfare_ratio = 0.0;
  std::size_t grid_size = 0;
  std::optional<MonteCarloSummary> monte_carlo;
};

TightReport VerifyTight(const TightInstance& inst,
                        std::size_t deviation_grid_size = 10'000);

MonteCarloSummary SimulateTight(const TightInstance& inst, std::uint64_t seed,
                                std::size_t samples);

}  // namespace poalab

#endif  // POALAB_TIGHT_INSTANCE_H_
