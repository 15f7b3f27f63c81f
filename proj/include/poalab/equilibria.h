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

#ifndef POALAB_EQUILIBRIA_H_
#define POALAB_EQUILIBRIA_H_

// Equilibria of the discretized game: pure Nash enumeration, worst-welfare
// coarse correlated and correlated equilibria by linear programming, and an
// independent verifier for explicit distributions.
//
// Certificates are exact for the discretized game. Deviations range over the
// same grid as strategies, so for the continuous game they are lower bounds
// on the price of anarchy.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "poalab/auction.h"
#include "poalab/bounds.h"
#include "poalab/grid_game.h"
#include "poalab/simplex.h"

namespace poalab {

inline constexpr double kPneSlack = 1e-12;
inline constexpr double kVerifyRelativeEpsilon = 1e-7;

struct JointDistribution {
  std::vector<BidProfile> support;
  std::vector<double> mass;
};

struct EquilibriumCheck {
  bool passed = true;
  double epsilon = 0.0;
  double max_violation = 0.0;  // largest expected deviation gain, may be < 0
  std::optional<std::size_t> worst_deviator;
  Marginals worst_deviation;
  std::optional<Marginals> worst_held;  // conditioning row for CE/PNE
};

struct LpReport {
  std::string status;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t iterations = 0;
  std::size_t refactorizations = 0;
  std::size_t rounds = 0;  // constraint-generation rounds (CE)
  double primal_residual = 0.0;
  double dual_infeasibility = 0.0;
};

struct PoACertificate {
  std::string status;  // "optimal" or "no-pne-on-grid"
  double gamma = 0.0;
  EquilibriumClass eq_class = EquilibriumClass::kCce;
  double opt_welfare = 0.0;
  double worst_eq_welfare = 0.0;
  double ratio = 1.0;
  JointDistribution distribution;
  LpReport lp;
  EquilibriumCheck verification;
};

std::vector<BidProfile> EnumeratePne(const ValuationProfile& v,
                                     const StrategyGrid& grid, double gamma,
                                     const TieBreakRule& tie);

struct PneStructureReport {
  double d = 0.0;  // largest losing marginal bid
  bool winning_bids_flat = true;         // (i)
  bool lower_values_cover_d = true;      // (ii)
  bool next_values_bounded_by_d = true;  // (iii)
  bool all() const {
    return winning_bids_flat && lower_values_cover_d &&
           next_values_bounded_by_d;
  }
};

// grid_step > 0 widens the conditions by the bid levels a grid can hide: a
// winner may sit one level above d when dropping to d would lose the tie, and
// beating it may take one more level.
PneStructureReport CheckPneStructure(const ValuationProfile& v,
                                     const BidProfile& bids, double gamma,
                                     const TieBreakRule& tie,
                                     double grid_step = 0.0);

PoACertificate WorstPneWelfare(const ValuationProfile& v,
                               const StrategyGrid& grid, double gamma,
                               const TieBreakRule& tie);

PoACertificate WorstCceWelfare(const ValuationProfile& v,
                               const StrategyGrid& grid, double gamma,
                               const TieBreakRule& tie,
                               const lp::Options& options = {});

PoACertificate WorstCeWelfare(const ValuationProfile& v,
                              const StrategyGrid& grid, double gamma,
                              const TieBreakRule& tie,
                              const lp::Options& options = {});

// Profile count up to which WorstCeWelfare solves the dual of the full
// correlated LP; above it, violated rows are generated on the primal.
inline constexpr std::size_t kCeDualMaxProfiles = 5000;

PoACertificate WorstCeByRowGeneration(const ValuationProfile& v,
                                      const StrategyGrid& grid, double gamma,
                                      const TieBreakRule& tie,
                                      const lp::Options& options = {});

// Largest expected gain from a unilateral deviation to any row of
// `deviations`, evaluated through Allocate and PayHybrid. For kCce the
// deviation is unconditional; for kCe and kPne it is conditioned on the
// deviator's own recommended row.
EquilibriumCheck VerifyEquilibrium(const ValuationProfile& v,
                                   const JointDistribution& dist, double gamma,
                                   EquilibriumClass eq_class, double epsilon,
                                   const StrategyGrid& deviations,
                                   const TieBreakRule& tie);

std::string ToString(EquilibriumClass eq);

}  // namespace poalab

#endif  // POALAB_EQUILIBRIA_H_
