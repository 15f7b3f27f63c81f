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

#ifndef POALAB_GRID_GAME_H_
#define POALAB_GRID_GAME_H_

// Discretized bid spaces and the finite normal-form game they induce.
//
// Joint profiles are indexed by p = sum_i r_i * stride_i with stride_0 = 1,
// where r_i is bidder i's row in the grid. All per-profile tables are laid
// out in that order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "poalab/auction.h"
#include "poalab/simplex.h"

namespace poalab {

inline constexpr std::size_t kMaxJointProfiles = 1'000'000;

class StrategyGrid {
 public:
  StrategyGrid(std::size_t items, std::vector<std::vector<Marginals>> rows,
               bool nob_filtered);

  // N+1 levels (j * vmax) / N per unit, vmax the largest marginal value;
  // rows are all non-increasing k-tuples of levels, NOB-filtered if asked.
  static StrategyGrid Uniform(const ValuationProfile& v, std::size_t steps,
                              bool nob);
  // Same construction over an explicit level set.
  static StrategyGrid FromLevels(const ValuationProfile& v,
                                 std::vector<double> levels, bool nob);

  std::size_t bidders() const { return rows_.size(); }
  std::size_t items() const { return items_; }
  std::size_t size(std::size_t bidder) const { return rows_[bidder].size(); }
  std::span<const double> row(std::size_t bidder, std::size_t r) const {
    return rows_[bidder][r];
  }
  bool nob_filtered() const { return nob_filtered_; }
  // Product of the per-bidder sizes, saturated at SIZE_MAX.
  std::size_t joint_size() const;
  // Index of `row` in bidder's list, or size(bidder) if absent.
  std::size_t Find(std::size_t bidder, std::span<const double> row) const;

 private:
  std::size_t items_;
  std::vector<std::vector<Marginals>> rows_;
  bool nob_filtered_;
};

// Largest step count whose uniform grid stays within kMaxJointProfiles, or 0.
std::size_t SuggestGridSteps(const ValuationProfile& v, bool nob);

class GridGame {
 public:
  // Throws ResourceGuard if the joint profile count exceeds
  // kMaxJointProfiles.
  GridGame(const ValuationProfile& v, const StrategyGrid& grid,
           const TieBreakRule& tie);

  const ValuationProfile& valuations() const { return *v_; }
  const StrategyGrid& grid() const { return *grid_; }
  const TieBreakRule& tie() const { return tie_; }
  std::size_t bidders() const { return n_; }
  std::size_t profiles() const { return profiles_; }
  std::size_t stride(std::size_t bidder) const { return stride_[bidder]; }
  std::size_t coordinate(std::size_t p, std::size_t bidder) const {
    return (p / stride_[bidder]) % grid_->size(bidder);
  }
  std::size_t WithRow(std::size_t p, std::size_t bidder, std::size_t r) const {
    return p + (r - coordinate(p, bidder)) * stride_[bidder];
  }
  std::size_t units(std::size_t p, std::size_t bidder) const {
    return units_[bidder * profiles_ + p];
  }
  double first_price(std::size_t p, std::size_t bidder) const {
    return first_[bidder * profiles_ + p];
  }
  double highest_losing_bid(std::size_t p) const { return pbar_[p]; }
  double welfare(std::size_t p) const { return welfare_[p]; }
  std::span<const double> welfare() const { return welfare_; }
  BidProfile Profile(std::size_t p) const;

  // Hybrid-payment utilities, bidder-major: u[i * profiles() + p].
  std::vector<double> Utilities(double gamma) const;

 private:
  const ValuationProfile* v_;
  const StrategyGrid* grid_;
  TieBreakRule tie_;
  std::size_t n_;
  std::size_t profiles_;
  std::vector<std::size_t> stride_;
  std::vector<std::uint8_t> units_;
  std::vector<double> first_;
  std::vector<double> pbar_;
  std::vector<double> welfare_;
};

// Coarse-correlated constraints: one row per (bidder, deviation row), then
// the normalization row. Costs are the profile welfares.
class CceOracle : public lp::ColumnOracle {
 public:
  CceOracle(const GridGame& game, std::span<const double> utilities);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return game_.profiles(); }
  std::span<const double> costs() const override { return game_.welfare(); }
  void Column(std::size_t j, std::span<double> out) const override;
  void TransposeProduct(std::span<const double> y,
                        std::span<double> out) const override;

  // Row of (bidder, deviation); the normalization row is rows() - 1.
  std::size_t RowOf(std::size_t bidder, std::size_t deviation) const {
    return offset_[bidder] + deviation;
  }

 private:
  const GridGame& game_;
  std::span<const double> util_;
  std::size_t rows_;
  std::vector<std::size_t> offset_;
  mutable std::vector<double> scratch_;
};

// Correlated constraints restricted to an active set of
// (bidder, held row, deviation row) triples, then the normalization row.
class CeOracle : public lp::ColumnOracle {
 public:
  struct Triple {
    std::uint32_t bidder;
    std::uint32_t held;
    std::uint32_t deviation;
  };

  CeOracle(const GridGame& game, std::span<const double> utilities,
           std::vector<Triple> active);

  std::size_t rows() const override { return active_.size() + 1; }
  std::size_t cols() const override { return game_.profiles(); }
  std::span<const double> costs() const override { return game_.welfare(); }
  void Column(std::size_t j, std::span<double> out) const override;
  void TransposeProduct(std::span<const double> y,
                        std::span<double> out) const override;

  const std::vector<Triple>& active() const { return active_; }

 private:
  const GridGame& game_;
  std::span<const double> util_;
  std::vector<Triple> active_;
  // Active rows grouped by (bidder, held row).
  std::vector<std::vector<std::size_t>> by_held_;
  std::vector<std::size_t> held_offset_;
};

// Transpose of the full correlated constraint set, for solving the dual
//
//     maximize t  s.t.  sum_r y_r G_r(p) + t <= SW(p) for every profile p,
//                       y >= 0,
//
// as a minimization of -t with t = t_plus - t_minus. Columns are the
// (bidder, held, deviation) triples with held != deviation, then t_plus and
// t_minus; rows are the joint profiles.
class CeDualOracle : public lp::ColumnOracle {
 public:
  CeDualOracle(const GridGame& game, std::span<const double> utilities);

  std::size_t rows() const override { return game_.profiles(); }
  std::size_t cols() const override { return costs_.size(); }
  std::span<const double> costs() const override { return costs_; }
  void Column(std::size_t j, std::span<double> out) const override;
  void TransposeProduct(std::span<const double> y,
                        std::span<double> out) const override;

  const std::vector<CeOracle::Triple>& triples() const { return triples_; }

 private:
  const GridGame& game_;
  std::span<const double> util_;
  std::vector<CeOracle::Triple> triples_;
  // Column index of (bidder, held, deviation); SIZE_MAX when held == dev.
  std::vector<std::size_t> first_col_;
  std::vector<double> costs_;
  std::size_t ColumnOf(std::size_t bidder, std::size_t held,
                       std::size_t dev) const;
};

}  // namespace poalab

#endif  // POALAB_GRID_GAME_H_
