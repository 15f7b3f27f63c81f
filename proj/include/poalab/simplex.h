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

#ifndef POALAB_SIMPLEX_H_
#define POALAB_SIMPLEX_H_

// Revised primal simplex for
//
//     minimize c^T x  subject to  A x (>=, <=, =) b,  x >= 0
//
// with a dense explicit basis inverse. The constraint matrix is reached only
// through a ColumnOracle, so problems with hundreds of thousands of columns
// never materialize A. Pricing uses Dantzig's rule and falls back to Bland's
// rule after a run of degenerate pivots.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace poalab::lp {

class ColumnOracle {
 public:
  virtual ~ColumnOracle() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual std::span<const double> costs() const = 0;
  // Writes column j (all `rows()` entries).
  virtual void Column(std::size_t j, std::span<double> out) const = 0;
  // out[j] = y . A_j for every column.
  virtual void TransposeProduct(std::span<const double> y,
                                std::span<double> out) const;
};

// Column-major dense matrix.
class DenseOracle : public ColumnOracle {
 public:
  DenseOracle(std::size_t rows, std::size_t cols);
  double& at(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  std::vector<double>& mutable_costs() { return costs_; }

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }
  std::span<const double> costs() const override { return costs_; }
  void Column(std::size_t j, std::span<double> out) const override;
  void TransposeProduct(std::span<const double> y,
                        std::span<double> out) const override;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<double> costs_;
};

enum class RowSense { kGreaterEqual, kLessEqual, kEqual };

struct Problem {
  const ColumnOracle* matrix = nullptr;
  std::vector<RowSense> sense;
  std::vector<double> rhs;
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-7;
  // Relative size of the right-hand-side perturbation on inequality rows;
  // 0 disables it.
  double perturbation = 1e-7;
  std::size_t max_iterations = 2'000'000;
  std::size_t refactor_interval = 100;
  // Columns kept from a full pricing pass and repriced on their own until
  // none improves or this many iterations pass; 0 prices everything each
  // iteration.
  std::size_t partial_candidates = 256;
  // Consecutive non-improving pivots before switching to Bland's rule.
  std::size_t stall_limit = 50;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string ToString(Status s);

struct Stats {
  std::size_t iterations = 0;
  std::size_t phase1_iterations = 0;
  std::size_t bland_iterations = 0;
  std::size_t refactorizations = 0;
  double primal_residual = 0.0;     // max |A x - b| on equality rows and
                                    // max violation on inequality rows
  double dual_infeasibility = 0.0;  // max(0, -min reduced cost)
};

struct Solution {
  Status status = Status::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;      // structural values
  std::vector<double> duals;  // one per row, sign as in the original rows
  Stats stats;
};

Solution Solve(const Problem& problem, const Options& options = {});

}  // namespace poalab::lp

#endif  // POALAB_SIMPLEX_H_
