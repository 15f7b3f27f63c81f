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

#ifndef POALAB_AUCTION_H_
#define POALAB_AUCTION_H_

// Multi-unit auctions with identical items and submodular bidders.
//
// Every bidder submits k non-increasing marginal bids; the k highest marginal
// bids win one unit each. Ties between equal marginal bids are resolved by a
// TieBreakRule, which is a strict total order and therefore never ambiguous.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace poalab {

using Marginals = std::vector<double>;

class ValuationProfile {
 public:
  // Throws InvalidInput unless n >= 2, k >= 1, every row has k non-negative,
  // non-increasing finite entries.
  explicit ValuationProfile(std::vector<Marginals> marginals);

  std::size_t bidders() const { return marginals_.size(); }
  std::size_t items() const { return items_; }
  std::span<const double> marginals(std::size_t bidder) const {
    return marginals_[bidder];
  }
  // v_i(q): value of bidder i for q units; value(i, 0) == 0.
  double value(std::size_t bidder, std::size_t units) const {
    return cumulative_[bidder][units];
  }
  // Largest single marginal value over all bidders.
  double max_marginal() const;

 private:
  std::size_t items_ = 0;
  std::vector<Marginals> marginals_;
  std::vector<std::vector<double>> cumulative_;
};

class BidProfile {
 public:
  // Throws InvalidInput unless all rows have the same positive length and
  // hold non-negative, non-increasing finite entries.
  explicit BidProfile(std::vector<Marginals> bids);

  std::size_t bidders() const { return bids_.size(); }
  std::size_t items() const { return bids_.empty() ? 0 : bids_[0].size(); }
  std::span<const double> row(std::size_t bidder) const {
    return bids_[bidder];
  }
  const std::vector<Marginals>& rows() const { return bids_; }

 private:
  std::vector<Marginals> bids_;
};

// Strict priority among equal marginal bids. Entries are ordered by bid
// (descending), then by bidder rank, then by unit index (ascending).
class TieBreakRule {
 public:
  enum class Kind { kIndex, kFavor, kFavorAtZero };

  // Lower bidder index first.
  static TieBreakRule IndexOrder() { return TieBreakRule(Kind::kIndex, 0); }
  // `bidder` beats everyone on ties, remaining bidders by index.
  static TieBreakRule Favor(std::size_t bidder) {
    return TieBreakRule(Kind::kFavor, bidder);
  }
  // `bidder` wins ties at a bid of exactly zero; index order otherwise.
  static TieBreakRule FavorAtZero(std::size_t bidder) {
    return TieBreakRule(Kind::kFavorAtZero, bidder);
  }

  Kind kind() const { return kind_; }
  std::size_t favored() const { return favored_; }

  // Smaller rank wins a tie at `bid`.
  std::ptrdiff_t rank(double bid, std::size_t bidder) const {
    const bool promoted =
        bidder == favored_ &&
        (kind_ == Kind::kFavor || (kind_ == Kind::kFavorAtZero && bid == 0.0));
    return promoted ? -1 : static_cast<std::ptrdiff_t>(bidder);
  }

  friend bool operator==(const TieBreakRule&, const TieBreakRule&) = default;

 private:
  TieBreakRule(Kind kind, std::size_t favored)
      : kind_(kind), favored_(favored) {}

  Kind kind_;
  std::size_t favored_;
};

struct Allocation {
  std::vector<std::size_t> units;        // x_i(b)
  double highest_losing_bid = 0.0;       // p-bar(b), the (k+1)-th marginal
  std::vector<double> winning_bids;      // beta_1 <= ... <= beta_k
};

struct Outcome {
  Allocation allocation;
  std::vector<double> payments;
  std::vector<double> utilities;
  double welfare = 0.0;
};

// Throws InvalidInput if `bids` does not have (bidders, items) shape.
Allocation Allocate(std::size_t bidders, std::size_t items,
                    const BidProfile& bids,
                    const TieBreakRule& tie = TieBreakRule::IndexOrder());
inline Allocation Allocate(const ValuationProfile& v, const BidProfile& bids,
                           const TieBreakRule& tie = TieBreakRule::IndexOrder()) {
  return Allocate(v.bidders(), v.items(), bids, tie);
}

std::vector<double> PayFirstPrice(const BidProfile& bids,
                                  const Allocation& alloc);
std::vector<double> PaySecondPrice(const BidProfile& bids,
                                   const Allocation& alloc);
// gamma * first price + (1 - gamma) * second price, evaluated per bidder with
// exactly that expression. Throws InvalidInput for gamma outside [0, 1].
std::vector<double> PayHybrid(double gamma, const BidProfile& bids,
                              const Allocation& alloc);

// Utilities and welfare for given payments.
Outcome Evaluate(const ValuationProfile& v, Allocation alloc,
                 std::vector<double> payments);

struct WelfareOptimum {
  double value = 0.0;
  std::vector<std::size_t> units;
};

// Greedy over the n*k marginal values; exact for submodular valuations.
WelfareOptimum OptimalWelfare(const ValuationProfile& v);

// Cumulative bids never exceed cumulative values. Comparison allows a
// relative slack of 1e-12 so that grid levels built by division still match
// the values they were built from.
bool SatisfiesNob(const ValuationProfile& v, const BidProfile& bids);
bool SatisfiesNob(std::span<const double> marginal_values,
                  std::span<const double> bid_row);

// Allocation kernel on a flat bidder-major array of n*k marginal bids with no
// validation and no heap traffic beyond `scratch`. Writes x_i into `units`
// and returns p-bar. Used by grid enumeration.
struct AllocScratch {
  struct Entry {
    double bid;
    std::ptrdiff_t rank;
    std::uint32_t bidder;
    std::uint32_t unit;
  };
  std::vector<Entry> entries;
};
double AllocateFlat(std::size_t bidders, std::size_t items,
                    std::span<const double> flat_bids, const TieBreakRule& tie,
                    std::span<std::size_t> units, AllocScratch& scratch);

}  // namespace poalab

#endif  // POALAB_AUCTION_H_
