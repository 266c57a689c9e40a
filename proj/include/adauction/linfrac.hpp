// Copyright 2026 The adauction Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Linear-fractional winner determination as a linear program.
//
// The MNL objective sum_i b_i pi_i(x) is a ratio of two affine functions of
// the matching x. Substituting y = x / (1 + sum x e^rho) and
// z = 1 / (1 + sum x e^rho) (Charnes-Cooper) gives
//
//   max  sum_ij b_i e^rho_ij y_ij
//   s.t. sum_j y_ij <= z            for every advertiser i
//        sum_i y_ij <= z            for every position j
//        sum_ij y_ij <= K z
//        sum_ij e^rho_ij y_ij + z = 1
//        y, z >= 0
//
// Basic optimal solutions of this LP are scaled vertices of the bipartite
// matching polytope, so x = y / z is an integral optimal matching.
//
// solve_lp is a small dense two-phase tableau simplex with Bland's rule. It
// is meant for desk-size problems (tens of variables), not for general use.

#ifndef ADAUCTION_LINFRAC_HPP_
#define ADAUCTION_LINFRAC_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "adauction/core.hpp"

namespace adauction {

enum class RowSense { kLessEqual, kEqual };

struct LpProblem {
  std::vector<double> objective;  // maximized
  Matrix constraints;             // rows x variables
  std::vector<double> rhs;
  std::vector<RowSense> senses;

  // Shape of the y block when the LP came from build_charnes_cooper:
  // variables are y_ij at i * positions + j followed by z.
  std::size_t advertisers = 0;
  std::size_t positions = 0;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;  // all structural variables
  Matrix y;                    // advertisers x positions (Charnes-Cooper LPs)
  double z = 0.0;
  double objective = 0.0;
  std::size_t iterations = 0;
};

inline LpProblem build_charnes_cooper(const Instance& inst,
                                      std::span<const double> bids) {
  if (inst.model != Model::kMnl) {
    throw InvalidArgument("Charnes-Cooper LP needs an MNL instance");
  }
  require_valid(inst);
  require_length(bids, inst.n, "bids");
  bool any_positive = false;
  for (double b : bids) {
    if (!(b >= 0.0)) throw InvalidArgument("bids must be non-negative");
    any_positive = any_positive || b > 0.0;
  }
  if (!any_positive) throw InvalidArgument("bids must not be all zero");

  const std::size_t n = inst.n;
  const std::size_t m = inst.m;
  const std::size_t nv = n * m + 1;
  const std::size_t z = n * m;
  const std::size_t rows = n + m + 2;

  LpProblem lp;
  lp.advertisers = n;
  lp.positions = m;
  lp.objective.assign(nv, 0.0);
  lp.constraints = Matrix(rows, nv);
  lp.rhs.assign(rows, 0.0);
  lp.senses.assign(rows, RowSense::kLessEqual);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      lp.objective[i * m + j] = bids[i] * inst.attraction(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) lp.constraints(i, i * m + j) = 1.0;
    lp.constraints(i, z) = -1.0;
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) lp.constraints(n + j, i * m + j) = 1.0;
    lp.constraints(n + j, z) = -1.0;
  }
  const std::size_t card = n + m;
  for (std::size_t v = 0; v < n * m; ++v) lp.constraints(card, v) = 1.0;
  lp.constraints(card, z) = -static_cast<double>(inst.k);

  const std::size_t norm = n + m + 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      lp.constraints(norm, i * m + j) = inst.attraction(i, j);
    }
  }
  lp.constraints(norm, z) = 1.0;
  lp.rhs[norm] = 1.0;
  lp.senses[norm] = RowSense::kEqual;
  return lp;
}

namespace detail {

inline constexpr double kPivotTol = 1e-9;
inline constexpr double kCostTol = 1e-9;
inline constexpr std::size_t kMaxPivots = 20000;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : t_(rows, cols + 1), basis_(rows) {}

  std::size_t rows() const { return t_.rows(); }
  std::size_t cols() const { return t_.cols() - 1; }
  double& at(std::size_t r, std::size_t c) { return t_(r, c); }
  double at(std::size_t r, std::size_t c) const { return t_(r, c); }
  double& rhs(std::size_t r) { return t_(r, cols()); }
  double rhs(std::size_t r) const { return t_(r, cols()); }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t width = t_.cols();
    const double inv = 1.0 / t_(pr, pc);
    for (std::size_t c = 0; c < width; ++c) t_(pr, c) *= inv;
    t_(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == pr) continue;
      const double f = t_(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) {
        t_(r, c) -= f * t_(pr, c);
        if (std::abs(t_(r, c)) < 1e-14) t_(r, c) = 0.0;
      }
      t_(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  void drop_row(std::size_t r) {
    Matrix next(t_.rows() - 1, t_.cols());
    for (std::size_t a = 0, b = 0; a < t_.rows(); ++a) {
      if (a == r) continue;
      for (std::size_t c = 0; c < t_.cols(); ++c) next(b, c) = t_(a, c);
      ++b;
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  Matrix t_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Maximizes cost . x over the columns flagged in `allowed`, Bland's rule.
inline PhaseResult run_phase(Tableau& tab, const std::vector<double>& cost,
                             const std::vector<bool>& allowed,
                             std::size_t& iterations) {
  const std::size_t cols = tab.cols();
  for (std::size_t iter = 0;; ++iter) {
    if (iter >= kMaxPivots) {
      throw SolverError("simplex exceeded " + std::to_string(kMaxPivots) +
                        " pivots without converging");
    }
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols && enter == cols; ++c) {
      if (!allowed[c]) continue;
      double reduced = cost[c];
      for (std::size_t r = 0; r < tab.rows(); ++r) {
        reduced -= cost[tab.basis()[r]] * tab.at(r, c);
      }
      if (reduced > kCostTol) enter = c;
    }
    if (enter == cols) return PhaseResult::kOptimal;

    std::size_t leave = tab.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      const double a = tab.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tab.rhs(r) / a;
      if (leave == tab.rows()) {
        best_ratio = ratio;
        leave = r;
        continue;
      }
      // Ties go to the lowest basic variable index (Bland).
      const double slack = 1e-12 * std::max(1.0, std::abs(best_ratio));
      const bool tie = std::abs(ratio - best_ratio) <= slack;
      if ((!tie && ratio < best_ratio) ||
          (tie && tab.basis()[r] < tab.basis()[leave])) {
        best_ratio = std::min(ratio, best_ratio);
        leave = r;
      }
    }
    if (leave == tab.rows()) return PhaseResult::kUnbounded;
    tab.pivot(leave, enter);
    ++iterations;
  }
}

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& lp) {
  const std::size_t nv = lp.num_variables();
  const std::size_t rows = lp.num_rows();
  if (lp.constraints.rows() != rows || lp.constraints.cols() != nv ||
      lp.senses.size() != rows) {
    throw InvalidArgument("LP dimensions are inconsistent");
  }

  // Column layout: structural | one slack per <= row | one artificial per row
  // lacking a usable slack.
  std::vector<std::size_t> slack_col(rows, SIZE_MAX);
  std::size_t cols = nv;
  for (std::size_t r = 0; r < rows; ++r) {
    if (lp.senses[r] == RowSense::kLessEqual) slack_col[r] = cols++;
  }
  std::vector<std::size_t> art_col(rows, SIZE_MAX);
  std::vector<double> sign(rows, 1.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (lp.rhs[r] < 0.0) sign[r] = -1.0;
    const bool slack_basic = slack_col[r] != SIZE_MAX && sign[r] > 0.0;
    if (!slack_basic) art_col[r] = cols++;
  }
  const std::size_t first_art = nv + static_cast<std::size_t>(std::count_if(
                                         slack_col.begin(), slack_col.end(),
                                         [](std::size_t c) { return c != SIZE_MAX; }));

  detail::Tableau tab(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < nv; ++c) tab.at(r, c) = sign[r] * lp.constraints(r, c);
    if (slack_col[r] != SIZE_MAX) tab.at(r, slack_col[r]) = sign[r];
    tab.rhs(r) = sign[r] * lp.rhs[r];
    if (art_col[r] != SIZE_MAX) {
      tab.at(r, art_col[r]) = 1.0;
      tab.basis()[r] = art_col[r];
    } else {
      tab.basis()[r] = slack_col[r];
    }
  }

  LpSolution sol;
  std::vector<bool> allowed(cols, true);

  // Phase 1: drive the artificials to zero.
  if (first_art < cols) {
    std::vector<double> cost(cols, 0.0);
    for (std::size_t c = first_art; c < cols; ++c) cost[c] = -1.0;
    detail::run_phase(tab, cost, allowed, sol.iterations);
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (tab.basis()[r] >= first_art) infeasibility += tab.rhs(r);
    }
    if (infeasibility > tol::kFeasibility) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Pivot zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basis()[r] < first_art) {
        ++r;
        continue;
      }
      std::size_t pc = first_art;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (std::abs(tab.at(r, c)) > detail::kPivotTol) {
          pc = c;
          break;
        }
      }
      if (pc == first_art) {
        tab.drop_row(r);
      } else {
        tab.pivot(r, pc);
        ++r;
      }
    }
    for (std::size_t c = first_art; c < cols; ++c) allowed[c] = false;
  }

  // Phase 2.
  std::vector<double> cost(cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
  if (detail::run_phase(tab, cost, allowed, sol.iterations) ==
      detail::PhaseResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  sol.status = LpStatus::kOptimal;
  sol.values.assign(nv, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    const std::size_t b = tab.basis()[r];
    if (b < nv) sol.values[b] = std::max(0.0, tab.rhs(r));
  }
  sol.objective = 0.0;
  for (std::size_t c = 0; c < nv; ++c) sol.objective += lp.objective[c] * sol.values[c];

  if (lp.advertisers > 0 && lp.advertisers * lp.positions + 1 == nv) {
    sol.y = Matrix(lp.advertisers, lp.positions);
    for (std::size_t i = 0; i < lp.advertisers; ++i) {
      for (std::size_t j = 0; j < lp.positions; ++j) {
        sol.y(i, j) = sol.values[i * lp.positions + j];
      }
    }
    sol.z = sol.values[nv - 1];
  }
  return sol;
}

// x = y / z, which must be a 0/1 matching. Anything else means the simplex
// returned a non-vertex point and is reported, not rounded away.
inline Allocation recover_allocation(const LpSolution& sol) {
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("cannot recover an allocation from an ") +
                      lp_status_name(sol.status) + " LP");
  }
  if (!(sol.z > tol::kFeasibility)) {
    throw SolverError("z-degenerate LP solution (z = " + std::to_string(sol.z) + ")");
  }
  Allocation x;
  for (std::size_t i = 0; i < sol.y.rows(); ++i) {
    for (std::size_t j = 0; j < sol.y.cols(); ++j) {
      const double ratio = sol.y(i, j) / sol.z;
      const double rounded = std::round(ratio);
      if (std::abs(ratio - rounded) > tol::kIntegrality ||
          (rounded != 0.0 && rounded != 1.0)) {
        throw SolverError("non-integral LP solution: x(" + std::to_string(i) +
                          "," + std::to_string(j) + ") = " + std::to_string(ratio));
      }
      if (rounded == 1.0) x.assign(i, j);
    }
  }
  return x;
}

}  // namespace adauction

#endif  // ADAUCTION_LINFRAC_HPP_
