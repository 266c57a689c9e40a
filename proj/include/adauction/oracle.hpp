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

// Brute-force reference solvers. Exponential; only for desk-size instances.

#ifndef ADAUCTION_ORACLE_HPP_
#define ADAUCTION_ORACLE_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "adauction/cascade_wdp.hpp"
#include "adauction/core.hpp"
#include "adauction/mnl_wdp.hpp"

namespace adauction {

inline constexpr std::size_t kMaxEnumerationCells = 30;

// Callers that know the instance is still cheap (e.g. 6 x 6, about 13k
// matchings) may raise `max_cells` explicitly.
inline void require_enumerable(const Instance& inst,
                               std::size_t max_cells = kMaxEnumerationCells) {
  if (inst.n * inst.m > max_cells) {
    throw SizeLimitExceeded("matching enumeration limited to n*m <= " +
                            std::to_string(max_cells) + ", got " +
                            std::to_string(inst.n * inst.m));
  }
}

// Calls f(const Allocation&) once for every matching with at most `cap`
// pairs. Order: positions ascending; at each position first leave it empty,
// then try free advertisers ascending.
template <class F>
void for_each_matching(std::size_t n, std::size_t m, std::size_t cap, F&& f) {
  Allocation x;
  std::vector<bool> used(n, false);
  auto recurse = [&](auto& self, std::size_t j) -> void {
    if (j == m) {
      f(static_cast<const Allocation&>(x));
      return;
    }
    self(self, j + 1);
    if (x.size() == cap) return;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      x.assign(i, j);
      self(self, j + 1);
      x.unassign(i);
      used[i] = false;
    }
  };
  recurse(recurse, 0);
}

template <class F>
void for_each_matching(const Instance& inst, F&& f,
                       std::size_t max_cells = kMaxEnumerationCells) {
  require_enumerable(inst, max_cells);
  for_each_matching(inst.n, inst.m, inst.k, std::forward<F>(f));
}

inline std::vector<Allocation> enumerate_matchings(const Instance& inst) {
  std::vector<Allocation> out;
  for_each_matching(inst, [&](const Allocation& x) { out.push_back(x); });
  return out;
}

inline WdpResult brute_force_wdp_mnl(const Instance& inst, std::span<const double> bids,
                                     std::size_t max_cells = kMaxEnumerationCells) {
  if (inst.model != Model::kMnl) throw InvalidArgument("brute_force_wdp_mnl needs an MNL instance");
  require_valid(inst);
  require_length(bids, inst.n, "bids");
  Allocation best;
  double best_value = 0.0;  // the empty matching
  for_each_matching(
      inst,
      [&](const Allocation& x) {
        const double v = welfare(bids, mnl_ctr(inst, x));
        if (v > best_value) {
          best_value = v;
          best = x;
        }
      },
      max_cells);
  return make_wdp_result(inst, bids, std::move(best));
}

// Highest cascade welfare of a fixed matching over every rank order.
inline double best_permutation_welfare(const Instance& inst, std::span<const double> values,
                                       const Allocation& x) {
  std::vector<std::size_t> positions;
  for (const auto& [i, j] : x) positions.push_back(j);
  std::sort(positions.begin(), positions.end());
  double best = -std::numeric_limits<double>::infinity();
  do {
    AugmentedAllocation chi{x, Permutation::from_order(positions)};
    best = std::max(best, cascade_welfare(inst, values, chi));
  } while (std::next_permutation(positions.begin(), positions.end()));
  return best;
}

struct CascadeOptimum {
  AugmentedAllocation best;
  double welfare = 0.0;
};

// Exact cascade WDP. Only matchings are enumerated; each is rendered with
// the value-sorted permutation. In paranoid mode every permutation of every
// matching is tried as well and the true maximum is reported.
inline CascadeOptimum brute_force_wdp_cascade(const Instance& inst, std::span<const double> values,
                                              bool paranoid = false) {
  if (inst.model != Model::kCascade) {
    throw InvalidArgument("brute_force_wdp_cascade needs a cascade instance");
  }
  require_valid(inst);
  require_length(values, inst.n, "values");
  CascadeOptimum out;
  for_each_matching(inst, [&](const Allocation& x) {
    const AugmentedAllocation chi = with_optimal_permutation(x, values);
    double w = cascade_welfare(inst, values, chi);
    if (paranoid) w = std::max(w, best_permutation_welfare(inst, values, x));
    if (w > out.welfare) {
      out.welfare = w;
      out.best = chi;
    }
  });
  return out;
}

struct RestrictedOptimum {
  Allocation best;
  double welfare = 0.0;
};

inline RestrictedOptimum brute_force_restricted(const Instance& inst, std::span<const double> values) {
  if (inst.model != Model::kCascade) {
    throw InvalidArgument("brute_force_restricted needs a cascade instance");
  }
  require_valid(inst);
  require_length(values, inst.n, "values");
  RestrictedOptimum out;
  for_each_matching(inst, [&](const Allocation& x) {
    const double w = restricted_welfare(inst, values, x);
    if (w > out.welfare) {
      out.welfare = w;
      out.best = x;
    }
  });
  return out;
}

// Best base (raw-CTR) welfare among matchings with at most `cap` pairs.
inline RestrictedOptimum brute_force_base(const Instance& inst, std::span<const double> values,
                                          std::size_t cap) {
  require_enumerable(inst);
  require_length(values, inst.n, "values");
  RestrictedOptimum out;
  for_each_matching(inst.n, inst.m, std::min(cap, inst.k), [&](const Allocation& x) {
    const double w = base_welfare(inst, values, x);
    if (w > out.welfare) {
      out.welfare = w;
      out.best = x;
    }
  });
  return out;
}

// Budgeted matching by plain enumeration; reference for the branch and bound.
inline RestrictedOptimum brute_force_budgeted(const Instance& inst, std::span<const double> values,
                                              const Matrix& scaled_ctr, double budget,
                                              std::size_t cap) {
  require_enumerable(inst);
  RestrictedOptimum out;
  for_each_matching(inst.n, inst.m, cap, [&](const Allocation& x) {
    double spent = 0.0;
    double w = 0.0;
    for (const auto& [i, j] : x) {
      spent += scaled_ctr(i, j);
      w += values[i] * scaled_ctr(i, j);
    }
    if (spent <= budget + kBudgetSlack && w > out.welfare) {
      out.welfare = w;
      out.best = x;
    }
  });
  return out;
}

}  // namespace adauction

#endif  // ADAUCTION_ORACLE_HPP_
