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

#ifndef POALAB_CORRUPTION_H_
#define POALAB_CORRUPTION_H_

// Corrupt-auctioneer payment schemes and checks for approximate first-price
// payment rules.
//
// In a corrupt auction each winner may lower all of their winning bids to the
// highest losing bid in exchange for a fee equal to a fraction gamma of the
// surplus. Accepting is weakly dominant, and the resulting totals coincide
// with the hybrid payment gamma*FP + (1-gamma)*SP.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poalab/auction.h"

namespace poalab {

struct CorruptPayments {
  std::vector<double> payments;  // total charged, identical to PayHybrid
  std::vector<double> base;      // x_i * p-bar
  std::vector<double> fees;      // gamma * sum_j (b_i(j) - p-bar)
};

// Throws InvalidInput unless gamma is in [0, 1].
CorruptPayments CorruptAuctionPayments(double gamma, const BidProfile& bids,
                                       const Allocation& alloc);

// Corruption fraction equivalent to rigging share alpha with fee share beta:
// alpha + beta - alpha * beta. Throws InvalidInput outside [0, 1]^2.
double RigMap(double alpha, double beta);

struct NonUniformPayments {
  std::vector<double> payments;  // identical to PayHybrid(RigMap(alpha, beta))
  std::vector<double> rigged;    // sum_j p-bar + alpha (b_i(j) - p-bar)
  std::vector<double> fees;      // beta (1 - alpha) sum_j (b_i(j) - p-bar)
};

// Camouflaged rigging: every winning bid is lowered to p-bar plus a fraction
// alpha of its surplus, and the auctioneer keeps a fraction beta of what is
// left over.
NonUniformPayments NonUniformRiggingPayments(double alpha, double beta,
                                             const BidProfile& bids,
                                             const Allocation& alloc);

// Hybrid payment with a bidder-specific fraction. This reading of
// heterogeneous corruption charges bidder i exactly the hybrid payment at
// gammas[i]; it is an interpretation, and only its approximation ratio
// min_i gammas[i] is checked.
std::vector<double> HeterogeneousPayments(const std::vector<double>& gammas,
                                          const BidProfile& bids,
                                          const Allocation& alloc);

struct CorruptionScheme {
  enum class Kind { kUniform, kNonUniform, kHeterogeneous };
  Kind kind = Kind::kUniform;
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> gammas;

  static CorruptionScheme Uniform(double gamma);
  static CorruptionScheme NonUniform(double alpha, double beta);
  static CorruptionScheme Heterogeneous(std::vector<double> gammas);

  // Fraction of first-price revenue this scheme is guaranteed to collect.
  double ApproximationRatio() const;
  std::string Describe() const;
};

// Opaque payment rule plus the fraction it claims to recover.
struct PaymentRuleHandle {
  std::string name;
  std::function<std::vector<double>(const BidProfile&, const Allocation&)> pay;
  double gamma_claim = 0.0;
};

PaymentRuleHandle MakePaymentRule(const CorruptionScheme& scheme);

struct FpaWitness {
  std::size_t profile_index = 0;
  double total_payment = 0.0;
  double winning_bid_sum = 0.0;
};

struct FpaReport {
  bool is_gamma_approx = true;
  bool is_first_price_dominated = true;
  std::size_t profiles_checked = 0;
  std::optional<FpaWitness> lower_violation;  // first profile below gamma*sum
  std::optional<FpaWitness> upper_violation;  // first profile above sum
};

// Sampling-based check of gamma * sum(beta_j) <= sum_i p_i <= sum(beta_j).
// Both sides tolerate a relative rounding slack of 1e-12. Throws
// NptViolation if the rule charges any bidder a negative amount.
FpaReport CheckGammaFpa(const PaymentRuleHandle& rule, double gamma,
                        std::size_t bidders, std::size_t items,
                        const std::vector<BidProfile>& profiles,
                        const TieBreakRule& tie = TieBreakRule::IndexOrder());

}  // namespace poalab

#endif  // POALAB_CORRUPTION_H_
