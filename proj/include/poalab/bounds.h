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

#ifndef POALAB_BOUNDS_H_
#define POALAB_BOUNDS_H_

// Upper bounds on the price of anarchy of hybrid / approximate first-price
// auctions as functions of the corruption fraction gamma.
//
// Every calculator returns a BoundResult whose `source` names the argument
// that produced it. A bound that does not apply throws InapplicableBound;
// a bound that applies but is vacuous returns +infinity.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace poalab {

enum class Setting { kSingleItem, kMultiUnit };
enum class EquilibriumClass { kPne, kCe, kCce };

// Source tags.
inline constexpr const char* kSrcSmoothness = "smoothness";
inline constexpr const char* kSrcOverbid = "overbid-smoothness";
inline constexpr const char* kSrcSpUnbounded = "sp-auction-unbounded";
inline constexpr const char* kSrcNobLambert = "nob-lambert";
inline constexpr const char* kSrcSingleItemNob = "single-item-nob";
inline constexpr const char* kSrcTwoPlayerNumeric = "two-player-numeric";
inline constexpr const char* kSrcTwoPlayerClosedForm = "two-player-closed-form";
inline constexpr const char* kSrcPneEfficient = "pne-efficient";
inline constexpr const char* kSrcPneCited = "pne-cited-constant";
inline constexpr const char* kSrcCeEfficient = "ce-efficient";

struct BoundQuery {
  double gamma = 1.0;
  Setting setting = Setting::kMultiUnit;
  bool nob = false;                 // no-overbidding assumed
  std::optional<std::size_t> n;     // bidder count, when known
  EquilibriumClass eq = EquilibriumClass::kCce;
};

struct BoundInternals {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> min_welfare;
};

struct BoundResult {
  double value = 1.0;
  std::string source;
  BoundInternals internals;
};

struct SmoothnessParams {
  double lambda = 1.0;
  double mu = 0.0;
};

// max{1, 1 + mu - gamma} / lambda. Requires lambda > 0, mu >= 0; when
// mu > gamma the bound only holds without overbidding.
BoundResult SmoothnessPoa(SmoothnessParams params, double gamma, bool nob);

// 1 / (gamma (1 - e^{-1/gamma})), tight with overbidding. gamma = 0 yields
// +infinity (second-price auctions have unbounded inefficiency).
BoundResult BoundOverbid(double gamma);

// -(1-gamma) W_{-1}(-e^{-(2-gamma)/(1-gamma)}) while the optimizing
// smoothness parameter stays >= gamma; BoundOverbid past that point.
BoundResult BoundNobMultiUnit(double gamma);

// gamma at which the optimizing smoothness parameter of BoundNobMultiUnit
// meets gamma (about 0.607). Computed once by bisection.
double NobLambertSwitchGamma();

// Optimizing smoothness parameter used by BoundNobMultiUnit.
double NobLambertAlpha(double gamma);

// 1 / (1 - gamma); +infinity at gamma = 1.
BoundResult BoundSingleItemNob(double gamma);

// Two bidders, single item, no overbidding, gamma in [1/2, 1]: one over the
// minimum of the welfare lower bound over the first bidder's utility alpha.
BoundResult BoundTwoPlayerHigh(double gamma);

// Welfare lower bound minimized by BoundTwoPlayerHigh, at bidder utilities
// (alpha, beta) with the second bidder's value set to 1 - alpha.
double TwoPlayerWelfare(double gamma, double alpha, double beta);

// Minimizer over beta in (0, alpha) of TwoPlayerWelfare for fixed alpha,
// found by bisection on the stationarity condition.
double TwoPlayerBeta(double gamma, double alpha);

// Closed form for two bidders on (threshold, 1/2].
BoundResult BoundTwoPlayerLow(double gamma);

// Root of gamma = (1 - gamma) e^{-1/(1-gamma)} (about 0.21781).
double TwoPlayerLowThreshold();

// 1 for gamma in (0, 1]; the cited constant 2.1885 at gamma = 0.
BoundResult PnePoa(double gamma, Setting setting, bool nob);

enum class Panel { kA, kB, kC, kD };

// a: multi-unit with overbidding; b: multi-unit without; c: single item
// without overbidding; d: as c with two bidders.
BoundResult PanelBound(Panel panel, double gamma);

struct Crossover {
  double gamma = 0.0;
  std::string from;
  std::string to;
};

struct Envelope {
  std::vector<double> gammas;
  std::vector<BoundResult> results;
  std::vector<Crossover> crossovers;
};

Envelope ComputeEnvelope(Panel panel, std::span<const double> gammas);

// Panel whose CCE envelope covers the query's setting and regime.
Panel PanelFor(const BoundQuery& query);

// Best bound for the query's equilibrium class.
BoundResult ApplicableBound(const BoundQuery& query);

// Evaluates ApplicableBound on every gamma in `gammas`.
std::vector<BoundResult> EnvelopeForQuery(const BoundQuery& query,
                                          std::span<const double> gammas);

}  // namespace poalab

#endif  // POALAB_BOUNDS_H_
