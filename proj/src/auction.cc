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

#include "poalab/auction.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "poalab/errors.h"

namespace poalab {
namespace {

void CheckRow(std::span<const double> row, const char* what, std::size_t i) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!std::isfinite(row[j]) || row[j] < 0.0) {
      throw InvalidInput(std::string(what) + " of bidder " + std::to_string(i) +
                         " has a negative or non-finite entry at unit " +
                         std::to_string(j + 1));
    }
    if (j > 0 && row[j] > row[j - 1]) {
      throw InvalidInput(std::string(what) + " of bidder " + std::to_string(i) +
                         " increase at unit " + std::to_string(j + 1));
    }
  }
}

bool EntryBefore(const AllocScratch::Entry& a, const AllocScratch::Entry& b) {
  if (a.bid != b.bid) return a.bid > b.bid;
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.unit < b.unit;
}

void CheckGamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidInput("gamma must lie in [0, 1], got " +
                       std::to_string(gamma));
  }
}

}  // namespace

ValuationProfile::ValuationProfile(std::vector<Marginals> marginals)
    : marginals_(std::move(marginals)) {
  if (marginals_.size() < 2) {
    throw InvalidInput("a valuation profile needs at least two bidders");
  }
  items_ = marginals_[0].size();
  if (items_ == 0) throw InvalidInput("a valuation profile needs k >= 1");
  cumulative_.reserve(marginals_.size());
  for (std::size_t i = 0; i < marginals_.size(); ++i) {
    if (marginals_[i].size() != items_) {
      throw InvalidInput("bidder " + std::to_string(i) + " has " +
                         std::to_string(marginals_[i].size()) +
                         " marginals, expected " + std::to_string(items_));
    }
    CheckRow(marginals_[i], "marginal values", i);
    std::vector<double> cum(items_ + 1, 0.0);
    for (std::size_t j = 0; j < items_; ++j) cum[j + 1] = cum[j] + marginals_[i][j];
    cumulative_.push_back(std::move(cum));
  }
}

double ValuationProfile::max_marginal() const {
  double best = 0.0;
  for (const auto& row : marginals_) best = std::max(best, row.front());
  return best;
}

BidProfile::BidProfile(std::vector<Marginals> bids) : bids_(std::move(bids)) {
  if (bids_.empty()) throw InvalidInput("a bid profile needs at least one bidder");
  const std::size_t k = bids_[0].size();
  if (k == 0) throw InvalidInput("bid rows must be non-empty");
  for (std::size_t i = 0; i < bids_.size(); ++i) {
    if (bids_[i].size() != k) {
      throw InvalidInput("bid row of bidder " + std::to_string(i) +
                         " has the wrong length");
    }
    CheckRow(bids_[i], "marginal bids", i);
  }
}

double AllocateFlat(std::size_t bidders, std::size_t items,
                    std::span<const double> flat_bids, const TieBreakRule& tie,
                    std::span<std::size_t> units, AllocScratch& scratch) {
  auto& entries = scratch.entries;
  entries.resize(bidders * items);
  for (std::size_t i = 0; i < bidders; ++i) {
    for (std::size_t j = 0; j < items; ++j) {
      const double bid = flat_bids[i * items + j];
      entries[i * items + j] = {bid, tie.rank(bid, i),
                                static_cast<std::uint32_t>(i),
                                static_cast<std::uint32_t>(j)};
    }
  }
  // Only the first k+1 positions matter.
  std::partial_sort(entries.begin(), entries.begin() + items + 1, entries.end(),
                    EntryBefore);
  std::fill(units.begin(), units.end(), std::size_t{0});
  for (std::size_t r = 0; r < items; ++r) ++units[entries[r].bidder];
  return entries[items].bid;
}

Allocation Allocate(std::size_t bidders, std::size_t items,
                    const BidProfile& bids, const TieBreakRule& tie) {
  if (bids.bidders() != bidders || bids.items() != items) {
    throw InvalidInput("bid profile shape (" + std::to_string(bids.bidders()) +
                       "x" + std::to_string(bids.items()) +
                       ") does not match instance (" + std::to_string(bidders) +
                       "x" + std::to_string(items) + ")");
  }
  std::vector<double> flat;
  flat.reserve(bidders * items);
  for (const auto& row : bids.rows()) flat.insert(flat.end(), row.begin(), row.end());

  Allocation out;
  out.units.assign(bidders, 0);
  AllocScratch scratch;
  out.highest_losing_bid =
      AllocateFlat(bidders, items, flat, tie, out.units, scratch);
  out.winning_bids.reserve(items);
  for (std::size_t r = items; r-- > 0;) {
    out.winning_bids.push_back(scratch.entries[r].bid);
  }
  return out;
}

std::vector<double> PayFirstPrice(const BidProfile& bids,
                                  const Allocation& alloc) {
  std::vector<double> pay(bids.bidders(), 0.0);
  for (std::size_t i = 0; i < bids.bidders(); ++i) {
    const auto row = bids.row(i);
    for (std::size_t j = 0; j < alloc.units[i]; ++j) pay[i] += row[j];
  }
  return pay;
}

std::vector<double> PaySecondPrice(const BidProfile& bids,
                                   const Allocation& alloc) {
  std::vector<double> pay(bids.bidders(), 0.0);
  for (std::size_t i = 0; i < bids.bidders(); ++i) {
    pay[i] = static_cast<double>(alloc.units[i]) * alloc.highest_losing_bid;
  }
  return pay;
}

std::vector<double> PayHybrid(double gamma, const BidProfile& bids,
                              const Allocation& alloc) {
  CheckGamma(gamma);
  const auto first = PayFirstPrice(bids, alloc);
  const auto second = PaySecondPrice(bids, alloc);
  std::vector<double> pay(first.size());
  for (std::size_t i = 0; i < pay.size(); ++i) {
    pay[i] = gamma * first[i] + (1.0 - gamma) * second[i];
  }
  return pay;
}

Outcome Evaluate(const ValuationProfile& v, Allocation alloc,
                 std::vector<double> payments) {
  Outcome out;
  out.utilities.resize(v.bidders());
  for (std::size_t i = 0; i < v.bidders(); ++i) {
    const double value = v.value(i, alloc.units[i]);
    out.utilities[i] = value - payments[i];
    out.welfare += value;
  }
  out.allocation = std::move(alloc);
  out.payments = std::move(payments);
  return out;
}

WelfareOptimum OptimalWelfare(const ValuationProfile& v) {
  struct Cand {
    double value;
    std::size_t bidder;
    std::size_t unit;
  };
  std::vector<Cand> cands;
  cands.reserve(v.bidders() * v.items());
  for (std::size_t i = 0; i < v.bidders(); ++i) {
    const auto m = v.marginals(i);
    for (std::size_t j = 0; j < v.items(); ++j) cands.push_back({m[j], i, j});
  }
  // Stable on (bidder, unit) so a bidder's units are taken in order.
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& a, const Cand& b) { return a.value > b.value; });
  WelfareOptimum best;
  best.units.assign(v.bidders(), 0);
  for (std::size_t r = 0; r < v.items(); ++r) {
    ++best.units[cands[r].bidder];
  }
  for (std::size_t i = 0; i < v.bidders(); ++i) best.value += v.value(i, best.units[i]);
  return best;
}

bool SatisfiesNob(std::span<const double> marginal_values,
                  std::span<const double> bid_row) {
  double bid_sum = 0.0;
  double value_sum = 0.0;
  for (std::size_t q = 0; q < bid_row.size(); ++q) {
    bid_sum += bid_row[q];
    value_sum += marginal_values[q];
    if (bid_sum > value_sum + 1e-12 * std::max(1.0, value_sum)) return false;
  }
  return true;
}

bool SatisfiesNob(const ValuationProfile& v, const BidProfile& bids) {
  if (bids.bidders() != v.bidders() || bids.items() != v.items()) {
    throw InvalidInput("bid profile shape does not match instance");
  }
  for (std::size_t i = 0; i < v.bidders(); ++i) {
    if (!SatisfiesNob(v.marginals(i), bids.row(i))) return false;
  }
  return true;
}

}  // namespace poalab
