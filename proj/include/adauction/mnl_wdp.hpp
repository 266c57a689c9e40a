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

// Exact winner determination under the MNL click model.

#ifndef ADAUCTION_MNL_WDP_HPP_
#define ADAUCTION_MNL_WDP_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "adauction/core.hpp"
#include "adauction/linfrac.hpp"
#include "adauction/matching.hpp"

namespace adauction {

struct WdpResult {
  Allocation allocation;
  double objective = 0.0;  // sum_i b_i pi_i
  CtrVector ctrs;
  std::size_t iterations = 0;
};

inline WdpResult make_wdp_result(const Instance& inst, std::span<const double> bids,
                                 Allocation x) {
  WdpResult r;
  r.ctrs = mnl_ctr(inst, x);
  r.objective = welfare(bids, r.ctrs);
  r.allocation = std::move(x);
  return r;
}

// Non-positive bidders are dropped (they can only dilute the denominator),
// then the Charnes-Cooper LP is solved and its vertex mapped back to x.
inline WdpResult solve_mnl_wdp(const Instance& inst, std::span<const double> bids) {
  if (inst.model != Model::kMnl) throw InvalidArgument("solve_mnl_wdp needs an MNL instance");
  require_valid(inst);
  const SubInstance sub = positive_bidders(inst, bids);
  if (sub.instance.n == 0) return make_wdp_result(inst, bids, Allocation{});

  const std::vector<double> local_bids = sub.project(bids);
  const LpSolution sol = solve_lp(build_charnes_cooper(sub.instance, local_bids));
  if (sol.status != LpStatus::kOptimal) {
    throw SolverError(std::string("MNL LP ended ") + lp_status_name(sol.status));
  }
  Allocation x = sub.lift(recover_allocation(sol));
  check_feasible(inst, x);
  WdpResult r = make_wdp_result(inst, bids, std::move(x));
  r.iterations = sol.iterations;
  return r;
}

// Dinkelbach iteration on the same ratio objective, with an augmenting-path
// matching as the inner solver. Shares no code with the simplex path.
inline WdpResult dinkelbach_check(const Instance& inst, std::span<const double> bids,
                                  std::size_t max_iterations = 100) {
  if (inst.model != Model::kMnl) {
    throw InvalidArgument("dinkelbach_check needs an MNL instance");
  }
  require_valid(inst);
  require_length(bids, inst.n, "bids");

  auto ratio = [&](const Allocation& x) {
    double num = 0.0;
    double den = 1.0;
    for (const auto& [i, j] : x) {
      num += bids[i] * inst.attraction(i, j);
      den += inst.attraction(i, j);
    }
    return num / den;
  };
  auto best_response = [&](double lambda) {
    Matrix w(inst.n, inst.m);
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (std::size_t j = 0; j < inst.m; ++j) {
        w(i, j) = (bids[i] - lambda) * inst.attraction(i, j);
      }
    }
    return max_weight_matching(w, inst.k);
  };

  Allocation x = best_response(0.0).allocation;
  double lambda = ratio(x);
  for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
    const WeightedMatching next = best_response(lambda);
    // F(lambda) = max_x [N(x) - lambda D(x)] = weight - lambda; zero at the optimum.
    const double gap = next.weight - lambda;
    if (gap <= 1e-12 * std::max(1.0, std::abs(lambda))) {
      WdpResult r = make_wdp_result(inst, bids, std::move(x));
      r.iterations = iter;
      return r;
    }
    x = next.allocation;
    lambda = ratio(x);
  }
  throw SolverError("Dinkelbach did not converge in " +
                    std::to_string(max_iterations) + " iterations");
}

}  // namespace adauction

#endif  // ADAUCTION_MNL_WDP_HPP_
