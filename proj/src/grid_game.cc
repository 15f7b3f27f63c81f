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

#include "poalab/grid_game.h"

#include <algorithm>
#include <limits>
#include <string>

#include "poalab/errors.h"
#include "poalab/parallel.h"
#include "poalab/simd.h"

namespace poalab {

namespace {

// Appends every non-increasing k-tuple over `levels` (ascending), in
// lexicographic order of level indices.
void EnumerateRows(std::span<const double> levels, std::size_t items,
                   std::vector<std::size_t>& idx, std::size_t pos,
                   std::vector<Marginals>& out) {
  if (pos == items) {
    Marginals row(items);
    for (std::size_t j = 0; j < items; ++j) row[j] = levels[idx[j]];
    out.push_back(std::move(row));
    return;
  }
  const std::size_t top = pos == 0 ? levels.size() - 1 : idx[pos - 1];
  for (std::size_t a = 0; a <= top; ++a) {
    idx[pos] = a;
    EnumerateRows(levels, items, idx, pos + 1, out);
  }
}

}  // namespace

StrategyGrid::StrategyGrid(std::size_t items,
                           std::vector<std::vector<Marginals>> rows,
                           bool nob_filtered)
    : items_(items), rows_(std::move(rows)), nob_filtered_(nob_filtered) {
  if (rows_.size() < 2) throw InvalidInput("grid needs at least two bidders");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].empty()) {
      throw InvalidInput("grid for bidder " + std::to_string(i) + " is empty");
    }
    for (const auto& r : rows_[i]) {
      if (r.size() != items_) throw InvalidInput("grid row has wrong length");
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (r[j] < 0.0 || (j > 0 && r[j] > r[j - 1])) {
          throw InvalidInput("grid row is not a non-increasing bid vector");
        }
      }
    }
  }
}

StrategyGrid StrategyGrid::FromLevels(const ValuationProfile& v,
                                      std::vector<double> levels, bool nob) {
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty()) throw InvalidInput("grid has no levels");
  std::vector<Marginals> all;
  std::vector<std::size_t> idx(v.items());
  EnumerateRows(levels, v.items(), idx, 0, all);
  std::vector<std::vector<Marginals>> rows(v.bidders());
  for (std::size_t i = 0; i < v.bidders(); ++i) {
    for (const auto& r : all) {
      if (!nob || SatisfiesNob(v.marginals(i), r)) rows[i].push_back(r);
    }
  }
  return StrategyGrid(v.items(), std::move(rows), nob);
}

StrategyGrid StrategyGrid::Uniform(const ValuationProfile& v,
                                   std::size_t steps, bool nob) {
  if (steps == 0) throw InvalidInput("grid step count must be positive");
  const double vmax = v.max_marginal();
  std::vector<double> levels;
  if (vmax == 0.0) {
    levels.push_back(0.0);
  } else {
    for (std::size_t j = 0; j <= steps; ++j) {
      levels.push_back(static_cast<double>(j) * vmax /
                       static_cast<double>(steps));
    }
  }
  return FromLevels(v, std::move(levels), nob);
}

std::size_t StrategyGrid::joint_size() const {
  std::size_t total = 1;
  for (const auto& r : rows_) {
    if (total > std::numeric_limits<std::size_t>::max() / r.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= r.size();
  }
  return total;
}

std::size_t StrategyGrid::Find(std::size_t bidder,
                               std::span<const double> row) const {
  const auto& rs = rows_[bidder];
  for (std::size_t r = 0; r < rs.size(); ++r) {
    if (std::equal(rs[r].begin(), rs[r].end(), row.begin(), row.end())) {
      return r;
    }
  }
  return rs.size();
}

std::size_t SuggestGridSteps(const ValuationProfile& v, bool nob) {
  std::size_t best = 0;
  for (std::size_t steps = 1; steps <= 4096; ++steps) {
    if (StrategyGrid::Uniform(v, steps, nob).joint_size() > kMaxJointProfiles) {
      break;
    }
    best = steps;
  }
  return best;
}

GridGame::GridGame(const ValuationProfile& v, const StrategyGrid& grid,
                   const TieBreakRule& tie)
    : v_(&v), grid_(&grid), tie_(tie), n_(v.bidders()) {
  if (grid.bidders() != v.bidders() || grid.items() != v.items()) {
    throw InvalidInput("grid shape does not match the instance");
  }
  if (v.items() > 255) throw InvalidInput("at most 255 items are supported");
  const std::size_t joint = grid.joint_size();
  if (joint > kMaxJointProfiles) {
    throw ResourceGuard("grid has " +
                        (joint == std::numeric_limits<std::size_t>::max()
                             ? std::string("too many")
                             : std::to_string(joint)) +
                        " joint profiles, limit is " +
                        std::to_string(kMaxJointProfiles));
  }
  profiles_ = joint;
  stride_.resize(n_);
  std::size_t s = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    stride_[i] = s;
    s *= grid.size(i);
  }
  units_.assign(n_ * profiles_, 0);
  first_.assign(n_ * profiles_, 0.0);
  pbar_.assign(profiles_, 0.0);
  welfare_.assign(profiles_, 0.0);
  const std::size_t k = v.items();
  ParallelFor(profiles_, [&](std::size_t begin, std::size_t end) {
    AllocScratch scratch;
    std::vector<double> flat(n_ * k);
    std::vector<std::size_t> units(n_);
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t i = 0; i < n_; ++i) {
        auto row = grid.row(i, coordinate(p, i));
        std::copy(row.begin(), row.end(), flat.begin() + i * k);
      }
      pbar_[p] = AllocateFlat(n_, k, flat, tie_, units, scratch);
      double w = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        units_[i * profiles_ + p] = static_cast<std::uint8_t>(units[i]);
        double fp = 0.0;
        for (std::size_t j = 0; j < units[i]; ++j) fp += flat[i * k + j];
        first_[i * profiles_ + p] = fp;
        w += v.value(i, units[i]);
      }
      welfare_[p] = w;
    }
  });
}

BidProfile GridGame::Profile(std::size_t p) const {
  std::vector<Marginals> rows(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    auto r = grid_->row(i, coordinate(p, i));
    rows[i].assign(r.begin(), r.end());
  }
  return BidProfile(std::move(rows));
}

std::vector<double> GridGame::Utilities(double gamma) const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidInput("gamma must lie in [0, 1]");
  }
  std::vector<double> u(n_ * profiles_);
  ParallelFor(profiles_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t p = begin; p < end; ++p) {
        const std::size_t x = units_[i * profiles_ + p];
        const double second = static_cast<double>(x) * pbar_[p];
        const double pay =
            gamma * first_[i * profiles_ + p] + (1.0 - gamma) * second;
        u[i * profiles_ + p] = v_->value(i, x) - pay;
      }
    }
  });
  return u;
}

CceOracle::CceOracle(const GridGame& game, std::span<const double> utilities)
    : game_(game), util_(utilities) {
  offset_.resize(game.bidders());
  std::size_t r = 0;
  std::size_t widest = 0;
  for (std::size_t i = 0; i < game.bidders(); ++i) {
    offset_[i] = r;
    r += game.grid().size(i);
    widest = std::max(widest, game.profiles() / game.grid().size(i));
  }
  rows_ = r + 1;
  scratch_.resize(widest);
}

void CceOracle::Column(std::size_t j, std::span<double> out) const {
  const std::size_t P = game_.profiles();
  for (std::size_t i = 0; i < game_.bidders(); ++i) {
    const double* u = util_.data() + i * P;
    for (std::size_t d = 0; d < game_.grid().size(i); ++d) {
      out[offset_[i] + d] = u[j] - u[game_.WithRow(j, i, d)];
    }
  }
  out[rows_ - 1] = 1.0;
}

// (y^T A)_p = y_norm + sum_i (Y_i u_i[p] - W_i[others(p)]) with
// Y_i = sum_d y_{i,d} and W_i[o] = sum_d y_{i,d} u_i[(d, o)].
void CceOracle::TransposeProduct(std::span<const double> y,
                                 std::span<double> out) const {
  const std::size_t P = game_.profiles();
  std::fill(out.begin(), out.end(), y[rows_ - 1]);
  for (std::size_t i = 0; i < game_.bidders(); ++i) {
    const std::size_t s = game_.grid().size(i);
    const std::size_t st = game_.stride(i);
    const std::span<const double> yi = y.subspan(offset_[i], s);
    double total = 0.0;
    for (double t : yi) total += t;
    const std::span<const double> ui = util_.subspan(i * P, P);
    simd::Axpy(total, ui, out);
    const std::size_t blocks = P / (st * s);
    if (st == 1) {
      for (std::size_t b = 0; b < blocks; ++b) {
        const double w = simd::Dot(yi, ui.subspan(b * s, s));
        simd::AddScalar(-w, out.subspan(b * s, s));
      }
      continue;
    }
    std::span<double> w(scratch_.data(), st);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t base = b * st * s;
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t d = 0; d < s; ++d) {
        if (yi[d] != 0.0) simd::Axpy(yi[d], ui.subspan(base + d * st, st), w);
      }
      for (std::size_t d = 0; d < s; ++d) {
        simd::Axpy(-1.0, w, out.subspan(base + d * st, st));
      }
    }
  }
}

CeOracle::CeOracle(const GridGame& game, std::span<const double> utilities,
                   std::vector<Triple> active)
    : game_(game), util_(utilities), active_(std::move(active)) {
  held_offset_.resize(game.bidders());
  std::size_t total = 0;
  for (std::size_t i = 0; i < game.bidders(); ++i) {
    held_offset_[i] = total;
    total += game.grid().size(i);
  }
  by_held_.resize(total);
  for (std::size_t r = 0; r < active_.size(); ++r) {
    const Triple& t = active_[r];
    by_held_[held_offset_[t.bidder] + t.held].push_back(r);
  }
}

void CeOracle::Column(std::size_t j, std::span<double> out) const {
  const std::size_t P = game_.profiles();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < game_.bidders(); ++i) {
    const double* u = util_.data() + i * P;
    const std::size_t h = game_.coordinate(j, i);
    for (std::size_t r : by_held_[held_offset_[i] + h]) {
      out[r] = u[j] - u[game_.WithRow(j, i, active_[r].deviation)];
    }
  }
  out[active_.size()] = 1.0;
}

void CeOracle::TransposeProduct(std::span<const double> y,
                                std::span<double> out) const {
  const std::size_t P = game_.profiles();
  std::fill(out.begin(), out.end(), y[active_.size()]);
  for (std::size_t r = 0; r < active_.size(); ++r) {
    const double yr = y[r];
    if (yr == 0.0) continue;
    const Triple& t = active_[r];
    const std::size_t s = game_.grid().size(t.bidder);
    const std::size_t st = game_.stride(t.bidder);
    const double* u = util_.data() + t.bidder * P;
    for (std::size_t base = 0; base < P; base += st * s) {
      const std::size_t p0 = base + t.held * st;
      const std::size_t q0 = base + t.deviation * st;
      for (std::size_t lo = 0; lo < st; ++lo) {
        out[p0 + lo] += yr * (u[p0 + lo] - u[q0 + lo]);
      }
    }
  }
}

CeDualOracle::CeDualOracle(const GridGame& game,
                           std::span<const double> utilities)
    : game_(game), util_(utilities) {
  for (std::size_t i = 0; i < game.bidders(); ++i) {
    const std::size_t s = game.grid().size(i);
    first_col_.push_back(triples_.size());
    for (std::size_t h = 0; h < s; ++h) {
      for (std::size_t d = 0; d < s; ++d) {
        if (d == h) continue;
        triples_.push_back({static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(h),
                            static_cast<std::uint32_t>(d)});
      }
    }
  }
  costs_.assign(triples_.size() + 2, 0.0);
  costs_[triples_.size()] = -1.0;
  costs_[triples_.size() + 1] = 1.0;
}

std::size_t CeDualOracle::ColumnOf(std::size_t bidder, std::size_t held,
                                   std::size_t dev) const {
  const std::size_t s = game_.grid().size(bidder);
  return first_col_[bidder] + held * (s - 1) + (dev < held ? dev : dev - 1);
}

void CeDualOracle::Column(std::size_t j, std::span<double> out) const {
  const std::size_t P = game_.profiles();
  if (j >= triples_.size()) {
    std::fill(out.begin(), out.end(), j == triples_.size() ? 1.0 : -1.0);
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  const CeOracle::Triple& t = triples_[j];
  const std::size_t s = game_.grid().size(t.bidder);
  const std::size_t st = game_.stride(t.bidder);
  const double* u = util_.data() + t.bidder * P;
  for (std::size_t base = 0; base < P; base += st * s) {
    const std::size_t p0 = base + t.held * st;
    const std::size_t q0 = base + t.deviation * st;
    for (std::size_t lo = 0; lo < st; ++lo) {
      out[p0 + lo] = u[p0 + lo] - u[q0 + lo];
    }
  }
}

void CeDualOracle::TransposeProduct(std::span<const double> y,
                                    std::span<double> out) const {
  const std::size_t P = game_.profiles();
  std::fill(out.begin(), out.end(), 0.0);
  double total = 0.0;
  for (std::size_t p = 0; p < P; ++p) {
    const double yp = y[p];
    total += yp;
    if (yp == 0.0) continue;
    for (std::size_t i = 0; i < game_.bidders(); ++i) {
      const double* u = util_.data() + i * P;
      const std::size_t h = game_.coordinate(p, i);
      for (std::size_t d = 0; d < game_.grid().size(i); ++d) {
        if (d == h) continue;
        out[ColumnOf(i, h, d)] += yp * (u[p] - u[game_.WithRow(p, i, d)]);
      }
    }
  }
  out[triples_.size()] = total;
  out[triples_.size() + 1] = -total;
}

}  // namespace poalab
