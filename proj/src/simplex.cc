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

#include "poalab/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "poalab/errors.h"
#include "poalab/simd.h"

namespace poalab::lp {

void ColumnOracle::TransposeProduct(std::span<const double> y,
                                    std::span<double> out) const {
  std::vector<double> col(rows());
  for (std::size_t j = 0; j < cols(); ++j) {
    Column(j, col);
    out[j] = simd::Dot(y, col);
  }
}

DenseOracle::DenseOracle(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0), costs_(cols, 0.0) {}

void DenseOracle::Column(std::size_t j, std::span<double> out) const {
  std::copy_n(data_.begin() + j * rows_, rows_, out.begin());
}

void DenseOracle::TransposeProduct(std::span<const double> y,
                                   std::span<double> out) const {
  for (std::size_t j = 0; j < cols_; ++j) {
    out[j] = simd::Dot(y, std::span<const double>(data_).subspan(j * rows_,
                                                                  rows_));
  }
}

std::string ToString(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kBlandSwitchesBeforeSticky = 5;

enum class Kind { kStructural, kSlack, kArtificial };

// Solver state over the normalized system S A x + slacks + artificials = S b,
// where S flips rows with negative right-hand side.
class Solver {
 public:
  Solver(const Problem& p, const Options& o) : p_(p), o_(o) {
    const ColumnOracle& a = *p.matrix;
    m_ = a.rows();
    n_ = a.cols();
    if (p.sense.size() != m_ || p.rhs.size() != m_) {
      throw InvalidInput("LP row data does not match the matrix");
    }
    if (a.costs().size() != n_) {
      throw InvalidInput("LP costs do not match the matrix");
    }
    sign_.assign(m_, 1.0);
    b_.resize(m_);
    sense_ = p.sense;
    for (std::size_t r = 0; r < m_; ++r) {
      // Rows with zero right-hand side are stated as <= so that their slack
      // can start basic.
      if (p.rhs[r] < 0.0 ||
          (p.rhs[r] == 0.0 && sense_[r] == RowSense::kGreaterEqual)) {
        sign_[r] = -1.0;
        if (sense_[r] == RowSense::kGreaterEqual) {
          sense_[r] = RowSense::kLessEqual;
        } else if (sense_[r] == RowSense::kLessEqual) {
          sense_[r] = RowSense::kGreaterEqual;
        }
      }
      b_[r] = sign_[r] * p.rhs[r];
    }
    // Layout: structurals, one slack per inequality row, one artificial per
    // GE/EQ row.
    slack_of_row_.assign(m_, kNone);
    art_of_row_.assign(m_, kNone);
    std::size_t next = n_;
    for (std::size_t r = 0; r < m_; ++r) {
      if (sense_[r] != RowSense::kEqual) {
        slack_of_row_[r] = next++;
        aux_row_.push_back(r);
        aux_coef_.push_back(sense_[r] == RowSense::kLessEqual ? 1.0 : -1.0);
        aux_kind_.push_back(Kind::kSlack);
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (sense_[r] != RowSense::kLessEqual) {
        art_of_row_[r] = next++;
        aux_row_.push_back(r);
        aux_coef_.push_back(1.0);
        aux_kind_.push_back(Kind::kArtificial);
      }
    }
    total_ = next;
    basis_.resize(m_);
    is_basic_.assign(total_, false);
    for (std::size_t r = 0; r < m_; ++r) {
      basis_[r] = sense_[r] == RowSense::kLessEqual ? slack_of_row_[r]
                                                     : art_of_row_[r];
      is_basic_[basis_[r]] = true;
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
    // Bounded perturbation of the slack rows against degeneracy; removed
    // before the solution is reported.
    b_true_ = b_;
    if (o_.perturbation > 0.0) {
      std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
      const double scale = o_.perturbation * std::max(1.0, simd::MaxAbs(b_));
      for (std::size_t r = 0; r < m_; ++r) {
        if (sense_[r] != RowSense::kLessEqual) continue;
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        b_[r] += scale * (1.0 + u);
        perturbed_ = true;
      }
    }
    xb_ = b_;
    cost_.assign(total_, 0.0);
    d_.assign(total_, 0.0);
    y_.assign(m_, 0.0);
    sy_.assign(m_, 0.0);
    col_.assign(m_, 0.0);
    w_.assign(m_, 0.0);
  }

  Solution Run() {
    // Phase 1.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    bool any_art = false;
    for (std::size_t j = n_; j < total_; ++j) {
      if (kind(j) == Kind::kArtificial) {
        cost_[j] = 1.0;
        any_art = true;
      }
    }
    Status st = Status::kOptimal;
    if (any_art) {
      phase1_ = true;
      st = Iterate();
      stats_.phase1_iterations = stats_.iterations;
      phase1_ = false;
      if (st == Status::kIterationLimit) return Finish(st);
      double infeas = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        if (kind(basis_[r]) == Kind::kArtificial) infeas += std::max(0.0, xb_[r]);
      }
      double scale = std::max(1.0, simd::MaxAbs(b_));
      if (infeas > 1e3 * o_.feasibility_tol * scale) {
        return Finish(Status::kInfeasible);
      }
      DriveOutArtificials();
    }
    // Phase 2.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    auto c = p_.matrix->costs();
    std::copy(c.begin(), c.end(), cost_.begin());
    st = Iterate();
    if (st == Status::kOptimal && perturbed_) {
      b_ = b_true_;
      perturbed_ = false;
      Refactor();
      st = DualCleanup();
      if (st == Status::kOptimal) st = Iterate();
    }
    return Finish(st);
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  Kind kind(std::size_t j) const {
    return j < n_ ? Kind::kStructural : aux_kind_[j - n_];
  }

  void LoadColumn(std::size_t j, std::span<double> out) const {
    if (j < n_) {
      p_.matrix->Column(j, out);
      for (std::size_t r = 0; r < m_; ++r) out[r] *= sign_[r];
    } else {
      std::fill(out.begin(), out.end(), 0.0);
      out[aux_row_[j - n_]] = aux_coef_[j - n_];
    }
  }

  std::span<double> BinvRow(std::size_t r) {
    return std::span<double>(binv_).subspan(r * m_, m_);
  }

  void ComputeDuals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double cb = cost_[basis_[r]];
      if (cb != 0.0) simd::Axpy(cb, BinvRow(r), y_);
    }
  }

  // Reduced costs of every column; basic columns and columns barred from
  // entering get +inf.
  void Price() {
    for (std::size_t r = 0; r < m_; ++r) sy_[r] = sign_[r] * y_[r];
    std::span<double> ds(d_.data(), n_);
    p_.matrix->TransposeProduct(sy_, ds);
    for (std::size_t j = 0; j < n_; ++j) d_[j] = cost_[j] - d_[j];
    for (std::size_t j = n_; j < total_; ++j) {
      d_[j] = cost_[j] - aux_coef_[j - n_] * y_[aux_row_[j - n_]];
    }
    dual_infeas_ = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      bool barred = is_basic_[j] ||
                    (!phase1_ && kind(j) == Kind::kArtificial);
      if (barred) {
        d_[j] = kInf;
      } else {
        dual_infeas_ = std::max(dual_infeas_, -d_[j]);
      }
    }
  }

  std::size_t ChooseEntering(bool bland) const {
    if (bland) {
      for (std::size_t j = 0; j < total_; ++j) {
        if (d_[j] < -o_.optimality_tol) return j;
      }
      return kNone;
    }
    simd::ArgMin am = simd::ArgMinOf(d_);
    return am.value < -o_.optimality_tol ? am.index : kNone;
  }

  // Keeps the structural columns with the most negative reduced costs from
  // the last full pricing pass, with their columns cached.
  void BuildCandidates() {
    minor_ = 0;
    cand_.clear();
    if (o_.partial_candidates == 0) return;
    for (std::size_t j = 0; j < n_; ++j) {
      if (d_[j] < -o_.optimality_tol) cand_.push_back(j);
    }
    if (cand_.size() > o_.partial_candidates) {
      std::nth_element(cand_.begin(), cand_.begin() + o_.partial_candidates,
                       cand_.end(), [&](std::size_t a, std::size_t b) {
                         return d_[a] < d_[b] || (d_[a] == d_[b] && a < b);
                       });
      cand_.resize(o_.partial_candidates);
    }
    std::sort(cand_.begin(), cand_.end());
    cand_cols_.resize(cand_.size() * m_);
    for (std::size_t c = 0; c < cand_.size(); ++c) {
      p_.matrix->Column(cand_[c],
                        std::span<double>(cand_cols_).subspan(c * m_, m_));
    }
  }

  // Dantzig choice among the cached candidates and the auxiliary columns.
  std::size_t ChooseCandidate() {
    ++minor_;
    for (std::size_t r = 0; r < m_; ++r) sy_[r] = sign_[r] * y_[r];
    std::size_t best = kNone;
    double best_d = -o_.optimality_tol;
    for (std::size_t c = 0; c < cand_.size(); ++c) {
      const std::size_t j = cand_[c];
      if (is_basic_[j]) continue;
      const double d =
          cost_[j] -
          simd::Dot(sy_, std::span<const double>(cand_cols_).subspan(c * m_, m_));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    for (std::size_t j = n_; j < total_; ++j) {
      if (is_basic_[j] || (!phase1_ && kind(j) == Kind::kArtificial)) continue;
      const double d = cost_[j] - aux_coef_[j - n_] * y_[aux_row_[j - n_]];
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  }

  void ComputeDirection(std::size_t q) {
    LoadColumn(q, col_);
    for (std::size_t r = 0; r < m_; ++r) {
      w_[r] = simd::Dot(BinvRow(r), col_);
    }
  }

  // Returns the leaving row or kNone when the direction is unbounded.
  std::size_t ChooseLeaving(bool bland, double* theta) const {
    // Artificials kept basic at zero on redundant rows block any move.
    for (std::size_t r = 0; r < m_; ++r) {
      if (!phase1_ && kind(basis_[r]) == Kind::kArtificial &&
          std::abs(w_[r]) > o_.pivot_tol) {
        *theta = 0.0;
        return r;
      }
    }
    std::size_t leave = kNone;
    if (bland) {
      double best = kInf;
      for (std::size_t r = 0; r < m_; ++r) {
        if (w_[r] <= o_.pivot_tol) continue;
        double ratio = std::max(0.0, xb_[r]) / w_[r];
        if (ratio < best ||
            (ratio == best && leave != kNone && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      *theta = best;
      return leave;
    }
    double bound = kInf;
    for (std::size_t r = 0; r < m_; ++r) {
      if (w_[r] <= o_.pivot_tol) continue;
      bound = std::min(bound, (std::max(0.0, xb_[r]) + o_.feasibility_tol) /
                                  w_[r]);
    }
    if (bound == kInf) return kNone;
    double best_w = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (w_[r] <= o_.pivot_tol) continue;
      double ratio = std::max(0.0, xb_[r]) / w_[r];
      if (ratio <= bound && w_[r] > best_w) {
        best_w = w_[r];
        leave = r;
      }
    }
    *theta = std::max(0.0, xb_[leave]) / w_[leave];
    return leave;
  }

  void Pivot(std::size_t q, std::size_t leave, double theta) {
    simd::Axpy(-theta, w_, xb_);
    xb_[leave] = theta;
    std::span<double> prow = BinvRow(leave);
    double inv = 1.0 / w_[leave];
    for (double& v : prow) v *= inv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == leave || w_[r] == 0.0) continue;
      simd::Axpy(-w_[r], prow, BinvRow(r));
    }
    is_basic_[basis_[leave]] = false;
    basis_[leave] = q;
    is_basic_[q] = true;
    ++since_refactor_;
  }

  // Rebuilds the basis inverse by Gauss-Jordan elimination with partial
  // pivoting and recomputes the basic values.
  void Refactor() {
    std::vector<double> a(m_ * m_);  // row-major copy of B
    for (std::size_t c = 0; c < m_; ++c) {
      LoadColumn(basis_[c], col_);
      for (std::size_t r = 0; r < m_; ++r) a[r * m_ + c] = col_[r];
    }
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) binv_[r * m_ + r] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(a[r * m_ + c]) > std::abs(a[piv * m_ + c])) piv = r;
      }
      if (std::abs(a[piv * m_ + c]) < 1e-13) {
        throw InternalError("LP basis became singular");
      }
      if (piv != c) {
        std::swap_ranges(a.begin() + piv * m_, a.begin() + (piv + 1) * m_,
                         a.begin() + c * m_);
        std::swap_ranges(binv_.begin() + piv * m_,
                         binv_.begin() + (piv + 1) * m_,
                         binv_.begin() + c * m_);
      }
      double inv = 1.0 / a[c * m_ + c];
      std::span<double> arow(a.data() + c * m_, m_);
      std::span<double> brow = BinvRow(c);
      for (double& v : arow) v *= inv;
      for (double& v : brow) v *= inv;
      for (std::size_t r = 0; r < m_; ++r) {
        double f = a[r * m_ + c];
        if (r == c || f == 0.0) continue;
        simd::Axpy(-f, arow, std::span<double>(a.data() + r * m_, m_));
        simd::Axpy(-f, brow, BinvRow(r));
      }
    }
    for (std::size_t r = 0; r < m_; ++r) xb_[r] = simd::Dot(BinvRow(r), b_);
    since_refactor_ = 0;
    ++stats_.refactorizations;
  }

  Status Iterate() {
    std::size_t stall = 0;
    std::size_t switches = 0;
    bool bland = false;
    double last_obj = kInf;
    while (true) {
      if (since_refactor_ >= o_.refactor_interval) Refactor();
      ComputeDuals();
      std::size_t q = kNone;
      if (!bland && minor_ < o_.partial_candidates) q = ChooseCandidate();
      if (q == kNone) {
        Price();
        q = ChooseEntering(bland);
        BuildCandidates();
      }
      if (q == kNone) {
        if (since_refactor_ > 0) {
          Refactor();
          continue;
        }
        return Status::kOptimal;
      }
      if (stats_.iterations >= o_.max_iterations) {
        return Status::kIterationLimit;
      }
      ComputeDirection(q);
      double theta = 0.0;
      std::size_t leave = ChooseLeaving(bland, &theta);
      if (leave == kNone) {
        if (phase1_) throw InternalError("phase 1 LP reported unbounded");
        return Status::kUnbounded;
      }
      Pivot(q, leave, theta);
      ++stats_.iterations;
      if (bland) ++stats_.bland_iterations;
      double obj = 0.0;
      for (std::size_t r = 0; r < m_; ++r) obj += cost_[basis_[r]] * xb_[r];
      bool improved = obj < last_obj - o_.optimality_tol * 1e-3;
      last_obj = std::min(last_obj, obj);
      if (improved) {
        stall = 0;
        if (bland && switches < kBlandSwitchesBeforeSticky) bland = false;
      } else if (!bland && ++stall >= o_.stall_limit) {
        bland = true;
        ++switches;
        stall = 0;
      }
    }
  }

  // Dual simplex iterations from a dual feasible basis until the basic
  // values are non-negative.
  Status DualCleanup() {
    std::vector<double> rho(m_);
    std::vector<double> alpha(n_);
    while (true) {
      std::size_t r = 0;
      for (std::size_t i = 1; i < m_; ++i) {
        if (xb_[i] < xb_[r]) r = i;
      }
      if (m_ == 0 || xb_[r] >= -o_.feasibility_tol) return Status::kOptimal;
      if (stats_.iterations >= o_.max_iterations) {
        return Status::kIterationLimit;
      }
      if (since_refactor_ >= o_.refactor_interval) {
        Refactor();
        continue;
      }
      ComputeDuals();
      Price();
      auto br = BinvRow(r);
      for (std::size_t i = 0; i < m_; ++i) rho[i] = sign_[i] * br[i];
      p_.matrix->TransposeProduct(rho, alpha);
      std::size_t q = kNone;
      double best = kInf;
      double best_abs = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (d_[j] == kInf) continue;
        const double a = j < n_ ? alpha[j]
                                : aux_coef_[j - n_] * br[aux_row_[j - n_]];
        if (a >= -o_.pivot_tol) continue;
        const double ratio = std::max(0.0, d_[j]) / -a;
        if (ratio < best || (ratio == best && -a > best_abs)) {
          best = ratio;
          best_abs = -a;
          q = j;
        }
      }
      if (q == kNone) return Status::kInfeasible;
      ComputeDirection(q);
      Pivot(q, r, xb_[r] / w_[r]);
      ++stats_.iterations;
    }
  }

  void DriveOutArtificials() {
    std::vector<double> rho(m_);
    std::vector<double> row(n_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (kind(basis_[r]) != Kind::kArtificial) continue;
      auto br = BinvRow(r);
      for (std::size_t i = 0; i < m_; ++i) rho[i] = sign_[i] * br[i];
      p_.matrix->TransposeProduct(rho, row);
      std::size_t best = kNone;
      double best_abs = o_.pivot_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!is_basic_[j] && std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      for (std::size_t j = n_; j < total_; ++j) {
        if (is_basic_[j] || kind(j) != Kind::kSlack) continue;
        double v = aux_coef_[j - n_] * br[aux_row_[j - n_]];
        if (std::abs(v) > best_abs) {
          best_abs = std::abs(v);
          best = j;
        }
      }
      if (best == kNone) continue;  // redundant row
      ComputeDirection(best);
      Pivot(best, r, std::max(0.0, xb_[r]) / w_[r]);
    }
    Refactor();
  }

  Solution Finish(Status st) {
    Solution sol;
    sol.status = st;
    sol.x.assign(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) sol.x[basis_[r]] = std::max(0.0, xb_[r]);
    }
    auto c = p_.matrix->costs();
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += c[j] * sol.x[j];
    sol.duals.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) sol.duals[r] = sign_[r] * y_[r];
    // Residual in the original rows.
    std::vector<double> ax(m_, 0.0);
    std::vector<double> col(m_);
    for (std::size_t j = 0; j < n_; ++j) {
      if (sol.x[j] == 0.0) continue;
      p_.matrix->Column(j, col);
      simd::Axpy(sol.x[j], col, ax);
    }
    double res = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      double diff = ax[r] - p_.rhs[r];
      switch (p_.sense[r]) {
        case RowSense::kEqual:
          res = std::max(res, std::abs(diff));
          break;
        case RowSense::kGreaterEqual:
          res = std::max(res, -diff);
          break;
        case RowSense::kLessEqual:
          res = std::max(res, diff);
          break;
      }
    }
    stats_.primal_residual = res;
    stats_.dual_infeasibility = dual_infeas_;
    sol.stats = stats_;
    return sol;
  }

  const Problem& p_;
  const Options& o_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t total_ = 0;
  std::vector<double> sign_;
  std::vector<double> b_;
  std::vector<RowSense> sense_;
  std::vector<std::size_t> slack_of_row_;
  std::vector<std::size_t> art_of_row_;
  std::vector<std::size_t> aux_row_;
  std::vector<double> aux_coef_;
  std::vector<Kind> aux_kind_;
  std::vector<std::size_t> basis_;
  std::vector<bool> is_basic_;
  std::vector<double> binv_;  // row-major
  std::vector<double> xb_;
  std::vector<double> cost_;
  std::vector<double> d_;
  std::vector<double> y_;
  std::vector<double> sy_;
  std::vector<double> col_;
  std::vector<double> w_;
  std::vector<double> b_true_;
  std::vector<std::size_t> cand_;
  std::vector<double> cand_cols_;
  std::size_t minor_ = 0;
  bool perturbed_ = false;
  bool phase1_ = false;
  double dual_infeas_ = 0.0;
  std::size_t since_refactor_ = 0;
  Stats stats_;
};

}  // namespace

Solution Solve(const Problem& problem, const Options& options) {
  if (problem.matrix == nullptr) throw InvalidInput("LP has no matrix");
  Solver solver(problem, options);
  return solver.Run();
}

}  // namespace poalab::lp
