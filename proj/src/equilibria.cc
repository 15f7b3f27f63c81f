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

#include "poalab/equilibria.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "poalab/errors.h"

namespace poalab {

namespace {

constexpr double kSupportFloor = 1e-13;

void CheckGamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidInput("gamma must lie in [0, 1]");
  }
}

double UtilityOf(const ValuationProfile& v, const BidProfile& bids,
                 double gamma, const TieBreakRule& tie, std::size_t bidder) {
  Allocation alloc = Allocate(v, bids, tie);
  auto pay = PayHybrid(gamma, bids, alloc);
  return v.value(bidder, alloc.units[bidder]) - pay[bidder];
}

BidProfile Replace(const BidProfile& b, std::size_t bidder,
                   std::span<const double> row) {
  std::vector<Marginals> rows = b.rows();
  rows[bidder].assign(row.begin(), row.end());
  return BidProfile(std::move(rows));
}

bool IsPne(const GridGame& game, std::span<const double> u, std::size_t p) {
  const std::size_t P = game.profiles();
  for (std::size_t i = 0; i < game.bidders(); ++i) {
    const double cur = u[i * P + p];
    for (std::size_t d = 0; d < game.grid().size(i); ++d) {
      if (u[i * P + game.WithRow(p, i, d)] > cur + kPneSlack) return false;
    }
  }
  return true;
}

LpReport ReportOf(const lp::Solution& sol, std::size_t rows,
                  std::size_t cols) {
  LpReport r;
  r.status = lp::ToString(sol.status);
  r.rows = rows;
  r.cols = cols;
  r.iterations = sol.stats.iterations;
  r.refactorizations = sol.stats.refactorizations;
  r.primal_residual = sol.stats.primal_residual;
  r.dual_infeasibility = sol.stats.dual_infeasibility;
  return r;
}

void FillDistribution(const GridGame& game, const std::vector<double>& x,
                      PoACertificate& cert) {
  double worst = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (x[p] <= kSupportFloor) continue;
    cert.distribution.support.push_back(game.Profile(p));
    cert.distribution.mass.push_back(x[p]);
    worst += x[p] * game.welfare(p);
  }
  cert.worst_eq_welfare = worst;
}

void Finalize(const ValuationProfile& v, const StrategyGrid& grid,
              const TieBreakRule& tie, PoACertificate& cert) {
  cert.opt_welfare = OptimalWelfare(v).value;
  cert.ratio = cert.worst_eq_welfare > 0.0
                   ? cert.opt_welfare / cert.worst_eq_welfare
                   : (cert.opt_welfare > 0.0
                          ? std::numeric_limits<double>::infinity()
                          : 1.0);
  const double eps =
      kVerifyRelativeEpsilon * std::max(cert.opt_welfare, 1e-300);
  cert.verification = VerifyEquilibrium(v, cert.distribution, cert.gamma,
                                        cert.eq_class, eps, grid, tie);
}

}  // namespace

std::string ToString(EquilibriumClass eq) {
  switch (eq) {
    case EquilibriumClass::kPne:
      return "pne";
    case EquilibriumClass::kCe:
      return "ce";
    case EquilibriumClass::kCce:
      return "cce";
  }
  return "unknown";
}

std::vector<BidProfile> EnumeratePne(const ValuationProfile& v,
                                     const StrategyGrid& grid, double gamma,
                                     const TieBreakRule& tie) {
  CheckGamma(gamma);
  GridGame game(v, grid, tie);
  const auto u = game.Utilities(gamma);
  std::vector<BidProfile> out;
  for (std::size_t p = 0; p < game.profiles(); ++p) {
    if (IsPne(game, u, p)) out.push_back(game.Profile(p));
  }
  return out;
}

PneStructureReport CheckPneStructure(const ValuationProfile& v,
                                     const BidProfile& bids, double gamma,
                                     const TieBreakRule& tie,
                                     double grid_step) {
  CheckGamma(gamma);
  if (!(grid_step >= 0.0) || !std::isfinite(grid_step)) {
    throw InvalidInput("grid step must be finite and non-negative");
  }
  const Allocation alloc = Allocate(v, bids, tie);
  const std::size_t k = v.items();
  PneStructureReport rep;
  for (std::size_t i = 0; i < v.bidders(); ++i) {
    for (std::size_t j = alloc.units[i]; j < k; ++j) {
      rep.d = std::max(rep.d, bids.row(i)[j]);
    }
  }
  const double d = rep.d;
  for (std::size_t i = 0; i < v.bidders(); ++i) {
    const std::size_t x = alloc.units[i];
    const auto m = v.marginals(i);
    const auto b = bids.row(i);
    for (std::size_t j = 0; j < x; ++j) {
      if (std::abs(b[j] - d) > grid_step + kPneSlack * std::max(1.0, d)) {
        rep.winning_bids_flat = false;
      }
    }
    double tail = 0.0;
    for (std::size_t l = 1; l <= x; ++l) {
      tail += m[x - l];
      const double ld = static_cast<double>(l) * d;
      if (ld > tail + static_cast<double>(l) * grid_step + kPneSlack) {
        rep.lower_values_cover_d = false;
      }
    }
    double next = 0.0;
    for (std::size_t l = 1; l + x <= k; ++l) {
      next += m[x + l - 1];
      // On a grid the price of l more units can sit two levels above d (a
      // winner one level up, beaten one level higher), and the x winning
      // bids may rise a level too.
      const double reach = static_cast<double>(l) * (d + 2.0 * grid_step) +
                           static_cast<double>(x) * grid_step;
      if (next > reach + kPneSlack) {
        rep.next_values_bounded_by_d = false;
      }
    }
  }
  return rep;
}

PoACertificate WorstPneWelfare(const ValuationProfile& v,
                               const StrategyGrid& grid, double gamma,
                               const TieBreakRule& tie) {
  CheckGamma(gamma);
  GridGame game(v, grid, tie);
  const auto u = game.Utilities(gamma);
  PoACertificate cert;
  cert.gamma = gamma;
  cert.eq_class = EquilibriumClass::kPne;
  std::optional<std::size_t> worst;
  for (std::size_t p = 0; p < game.profiles(); ++p) {
    if (!IsPne(game, u, p)) continue;
    if (!worst || game.welfare(p) < game.welfare(*worst)) worst = p;
  }
  cert.lp.cols = game.profiles();
  if (!worst) {
    cert.status = "no-pne-on-grid";
    cert.opt_welfare = OptimalWelfare(v).value;
    cert.ratio = std::numeric_limits<double>::quiet_NaN();
    cert.verification.passed = false;
    return cert;
  }
  cert.status = "optimal";
  cert.lp.status = "enumerated";
  std::vector<double> x(game.profiles(), 0.0);
  x[*worst] = 1.0;
  FillDistribution(game, x, cert);
  Finalize(v, grid, tie, cert);
  return cert;
}

PoACertificate WorstCceWelfare(const ValuationProfile& v,
                               const StrategyGrid& grid, double gamma,
                               const TieBreakRule& tie,
                               const lp::Options& options) {
  CheckGamma(gamma);
  GridGame game(v, grid, tie);
  const auto u = game.Utilities(gamma);
  CceOracle oracle(game, u);
  lp::Problem prob;
  prob.matrix = &oracle;
  prob.sense.assign(oracle.rows(), lp::RowSense::kGreaterEqual);
  prob.rhs.assign(oracle.rows(), 0.0);
  prob.sense.back() = lp::RowSense::kEqual;
  prob.rhs.back() = 1.0;
  const lp::Solution sol = lp::Solve(prob, options);
  if (sol.status != lp::Status::kOptimal) {
    throw InternalError("coarse correlated LP ended with status " +
                        lp::ToString(sol.status));
  }
  PoACertificate cert;
  cert.status = "optimal";
  cert.gamma = gamma;
  cert.eq_class = EquilibriumClass::kCce;
  cert.lp = ReportOf(sol, oracle.rows(), oracle.cols());
  cert.lp.rounds = 1;
  FillDistribution(game, sol.x, cert);
  Finalize(v, grid, tie, cert);
  return cert;
}

namespace {

// Solves the dual of the full correlated LP; the distribution is read off
// the multipliers of the profile rows.
PoACertificate WorstCeByDual(const ValuationProfile& v,
                             const StrategyGrid& grid, double gamma,
                             const TieBreakRule& tie,
                             const lp::Options& options) {
  GridGame game(v, grid, tie);
  const auto u = game.Utilities(gamma);
  CeDualOracle oracle(game, u);
  lp::Problem prob;
  prob.matrix = &oracle;
  prob.sense.assign(oracle.rows(), lp::RowSense::kLessEqual);
  prob.rhs.assign(game.welfare().begin(), game.welfare().end());
  const lp::Solution sol = lp::Solve(prob, options);
  if (sol.status != lp::Status::kOptimal) {
    throw InternalError("correlated dual LP ended with status " +
                        lp::ToString(sol.status));
  }
  std::vector<double> x(game.profiles());
  for (std::size_t p = 0; p < x.size(); ++p) x[p] = std::max(0.0, -sol.duals[p]);
  PoACertificate cert;
  cert.status = "optimal";
  cert.gamma = gamma;
  cert.eq_class = EquilibriumClass::kCe;
  cert.lp = ReportOf(sol, oracle.rows(), oracle.cols());
  cert.lp.rounds = 1;
  FillDistribution(game, x, cert);
  Finalize(v, grid, tie, cert);
  return cert;
}

}  // namespace

PoACertificate WorstCeWelfare(const ValuationProfile& v,
                              const StrategyGrid& grid, double gamma,
                              const TieBreakRule& tie,
                              const lp::Options& options) {
  CheckGamma(gamma);
  if (grid.joint_size() <= kCeDualMaxProfiles) {
    return WorstCeByDual(v, grid, gamma, tie, options);
  }
  return WorstCeByRowGeneration(v, grid, gamma, tie, options);
}

PoACertificate WorstCeByRowGeneration(const ValuationProfile& v,
                                      const StrategyGrid& grid, double gamma,
                                      const TieBreakRule& tie,
                                      const lp::Options& options) {
  CheckGamma(gamma);
  GridGame game(v, grid, tie);
  const auto u = game.Utilities(gamma);
  const std::size_t P = game.profiles();
  const std::size_t n = game.bidders();
  const double tol = 1e-9 * std::max(1.0, OptimalWelfare(v).value);

  std::vector<CeOracle::Triple> active;
  std::vector<std::vector<bool>> is_active(n);
  for (std::size_t i = 0; i < n; ++i) {
    is_active[i].assign(grid.size(i) * grid.size(i), false);
  }
  LpReport total;
  lp::Solution sol;
  std::size_t rows = 0;
  while (true) {
    CeOracle oracle(game, u, active);
    lp::Problem prob;
    prob.matrix = &oracle;
    prob.sense.assign(oracle.rows(), lp::RowSense::kGreaterEqual);
    prob.rhs.assign(oracle.rows(), 0.0);
    prob.sense.back() = lp::RowSense::kEqual;
    prob.rhs.back() = 1.0;
    sol = lp::Solve(prob, options);
    if (sol.status != lp::Status::kOptimal) {
      throw InternalError("correlated LP ended with status " +
                          lp::ToString(sol.status));
    }
    rows = oracle.rows();
    ++total.rounds;
    total.iterations += sol.stats.iterations;
    total.refactorizations += sol.stats.refactorizations;

    // Conditional gains of every (bidder, held, deviation) triple.
    bool added = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = grid.size(i);
      std::vector<double> gain(s * s, 0.0);
      for (std::size_t p = 0; p < P; ++p) {
        if (sol.x[p] == 0.0) continue;
        const std::size_t h = game.coordinate(p, i);
        const double cur = u[i * P + p];
        for (std::size_t d = 0; d < s; ++d) {
          gain[h * s + d] += sol.x[p] * (u[i * P + game.WithRow(p, i, d)] - cur);
        }
      }
      for (std::size_t h = 0; h < s; ++h) {
        for (std::size_t d = 0; d < s; ++d) {
          if (d == h || is_active[i][h * s + d] || gain[h * s + d] <= tol) {
            continue;
          }
          is_active[i][h * s + d] = true;
          active.push_back({static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(h),
                            static_cast<std::uint32_t>(d)});
          added = true;
        }
      }
    }
    if (!added) break;
  }
  PoACertificate cert;
  cert.status = "optimal";
  cert.gamma = gamma;
  cert.eq_class = EquilibriumClass::kCe;
  cert.lp = ReportOf(sol, rows, P);
  cert.lp.iterations = total.iterations;
  cert.lp.refactorizations = total.refactorizations;
  cert.lp.rounds = total.rounds;
  FillDistribution(game, sol.x, cert);
  Finalize(v, grid, tie, cert);
  return cert;
}

EquilibriumCheck VerifyEquilibrium(const ValuationProfile& v,
                                   const JointDistribution& dist, double gamma,
                                   EquilibriumClass eq_class, double epsilon,
                                   const StrategyGrid& deviations,
                                   const TieBreakRule& tie) {
  CheckGamma(gamma);
  if (dist.support.size() != dist.mass.size()) {
    throw InvalidInput("distribution support and mass differ in length");
  }
  EquilibriumCheck out;
  out.epsilon = epsilon;
  out.max_violation = -std::numeric_limits<double>::infinity();
  const std::size_t n = v.bidders();
  for (std::size_t i = 0; i < n; ++i) {
    // Group support points by the deviator's own row; CCE uses one group.
    std::map<Marginals, std::vector<std::size_t>> groups;
    for (std::size_t s = 0; s < dist.support.size(); ++s) {
      const auto row = dist.support[s].row(i);
      Marginals key = eq_class == EquilibriumClass::kCce
                          ? Marginals{}
                          : Marginals(row.begin(), row.end());
      groups[key].push_back(s);
    }
    for (const auto& [held, members] : groups) {
      std::vector<double> current(members.size());
      for (std::size_t t = 0; t < members.size(); ++t) {
        current[t] = UtilityOf(v, dist.support[members[t]], gamma, tie, i);
      }
      for (std::size_t d = 0; d < deviations.size(i); ++d) {
        const auto dev = deviations.row(i, d);
        double gain = 0.0;
        for (std::size_t t = 0; t < members.size(); ++t) {
          const BidProfile& b = dist.support[members[t]];
          const double alt = UtilityOf(v, Replace(b, i, dev), gamma, tie, i);
          gain += dist.mass[members[t]] * (alt - current[t]);
        }
        if (gain > out.max_violation) {
          out.max_violation = gain;
          out.worst_deviator = i;
          out.worst_deviation.assign(dev.begin(), dev.end());
          if (eq_class == EquilibriumClass::kCce) {
            out.worst_held.reset();
          } else {
            out.worst_held = held;
          }
        }
      }
    }
  }
  if (dist.support.empty()) out.max_violation = 0.0;
  out.passed = out.max_violation <= epsilon;
  return out;
}

}  // namespace poalab
