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

#include "poalab/corruption.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "poalab/errors.h"

namespace poalab {
namespace {

void CheckFraction(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidInput(std::string(name) + " must lie in [0, 1], got " +
                       std::to_string(x));
  }
}

// sum_{j <= x_i} (b_i(j) - p-bar) for every bidder.
std::vector<double> Surplus(const BidProfile& bids, const Allocation& alloc) {
  std::vector<double> out(bids.bidders(), 0.0);
  for (std::size_t i = 0; i < bids.bidders(); ++i) {
    const auto row = bids.row(i);
    for (std::size_t j = 0; j < alloc.units[i]; ++j) {
      out[i] += row[j] - alloc.highest_losing_bid;
    }
  }
  return out;
}

}  // namespace

CorruptPayments CorruptAuctionPayments(double gamma, const BidProfile& bids,
                                       const Allocation& alloc) {
  CheckFraction(gamma, "gamma");
  CorruptPayments out;
  out.payments = PayHybrid(gamma, bids, alloc);
  out.base = PaySecondPrice(bids, alloc);
  out.fees = Surplus(bids, alloc);
  for (double& f : out.fees) f *= gamma;
  return out;
}

double RigMap(double alpha, double beta) {
  CheckFraction(alpha, "alpha");
  CheckFraction(beta, "beta");
  return std::clamp(alpha + beta - alpha * beta, 0.0, 1.0);
}

NonUniformPayments NonUniformRiggingPayments(double alpha, double beta,
                                             const BidProfile& bids,
                                             const Allocation& alloc) {
  const double gamma = RigMap(alpha, beta);
  NonUniformPayments out;
  out.payments = PayHybrid(gamma, bids, alloc);
  out.rigged.assign(bids.bidders(), 0.0);
  out.fees.assign(bids.bidders(), 0.0);
  const double pbar = alloc.highest_losing_bid;
  for (std::size_t i = 0; i < bids.bidders(); ++i) {
    const auto row = bids.row(i);
    for (std::size_t j = 0; j < alloc.units[i]; ++j) {
      out.rigged[i] += pbar + alpha * (row[j] - pbar);
      out.fees[i] += beta * (1.0 - alpha) * (row[j] - pbar);
    }
  }
  return out;
}

std::vector<double> HeterogeneousPayments(const std::vector<double>& gammas,
                                          const BidProfile& bids,
                                          const Allocation& alloc) {
  if (gammas.size() != bids.bidders()) {
    throw InvalidInput("heterogeneous scheme needs one fraction per bidder");
  }
  for (double g : gammas) CheckFraction(g, "gamma_i");
  const auto first = PayFirstPrice(bids, alloc);
  const auto second = PaySecondPrice(bids, alloc);
  std::vector<double> pay(first.size());
  for (std::size_t i = 0; i < pay.size(); ++i) {
    pay[i] = gammas[i] * first[i] + (1.0 - gammas[i]) * second[i];
  }
  return pay;
}

CorruptionScheme CorruptionScheme::Uniform(double gamma) {
  CheckFraction(gamma, "gamma");
  CorruptionScheme s;
  s.kind = Kind::kUniform;
  s.gamma = gamma;
  return s;
}

CorruptionScheme CorruptionScheme::NonUniform(double alpha, double beta) {
  CheckFraction(alpha, "alpha");
  CheckFraction(beta, "beta");
  CorruptionScheme s;
  s.kind = Kind::kNonUniform;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

CorruptionScheme CorruptionScheme::Heterogeneous(std::vector<double> gammas) {
  if (gammas.empty()) throw InvalidInput("heterogeneous scheme needs fractions");
  for (double g : gammas) CheckFraction(g, "gamma_i");
  CorruptionScheme s;
  s.kind = Kind::kHeterogeneous;
  s.gammas = std::move(gammas);
  return s;
}

double CorruptionScheme::ApproximationRatio() const {
  switch (kind) {
    case Kind::kUniform:
      return gamma;
    case Kind::kNonUniform:
      return RigMap(alpha, beta);
    case Kind::kHeterogeneous:
      return *std::min_element(gammas.begin(), gammas.end());
  }
  return 0.0;
}

std::string CorruptionScheme::Describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kUniform:
      os << "hybrid:" << gamma;
      break;
    case Kind::kNonUniform:
      os << "nonuniform:" << alpha << "," << beta;
      break;
    case Kind::kHeterogeneous:
      os << "hetero:";
      for (std::size_t i = 0; i < gammas.size(); ++i) {
        os << (i ? "," : "") << gammas[i];
      }
      break;
  }
  return os.str();
}

PaymentRuleHandle MakePaymentRule(const CorruptionScheme& scheme) {
  PaymentRuleHandle rule;
  rule.name = scheme.Describe();
  rule.gamma_claim = scheme.ApproximationRatio();
  switch (scheme.kind) {
    case CorruptionScheme::Kind::kUniform:
      rule.pay = [g = scheme.gamma](const BidProfile& b, const Allocation& a) {
        return CorruptAuctionPayments(g, b, a).payments;
      };
      break;
    case CorruptionScheme::Kind::kNonUniform:
      rule.pay = [al = scheme.alpha, be = scheme.beta](const BidProfile& b,
                                                       const Allocation& a) {
        return NonUniformRiggingPayments(al, be, b, a).payments;
      };
      break;
    case CorruptionScheme::Kind::kHeterogeneous:
      rule.pay = [gs = scheme.gammas](const BidProfile& b, const Allocation& a) {
        return HeterogeneousPayments(gs, b, a);
      };
      break;
  }
  return rule;
}

FpaReport CheckGammaFpa(const PaymentRuleHandle& rule, double gamma,
                        std::size_t bidders, std::size_t items,
                        const std::vector<BidProfile>& profiles,
                        const TieBreakRule& tie) {
  CheckFraction(gamma, "gamma");
  FpaReport report;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    const Allocation alloc = Allocate(bidders, items, profiles[p], tie);
    const auto pay = rule.pay(profiles[p], alloc);
    double total = 0.0;
    for (std::size_t i = 0; i < pay.size(); ++i) {
      if (pay[i] < 0.0) {
        throw NptViolation("rule '" + rule.name + "' charges bidder " +
                           std::to_string(i) + " a negative amount on profile " +
                           std::to_string(p));
      }
      total += pay[i];
    }
    double winning = 0.0;
    for (double b : alloc.winning_bids) winning += b;
    const double slack = 1e-12 * std::max(1.0, winning);
    ++report.profiles_checked;
    if (total < gamma * winning - slack && !report.lower_violation) {
      report.is_gamma_approx = false;
      report.lower_violation = FpaWitness{p, total, winning};
    }
    if (total > winning + slack && !report.upper_violation) {
      report.is_first_price_dominated = false;
      report.upper_violation = FpaWitness{p, total, winning};
    }
  }
  return report;
}

}  // namespace poalab
