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

// Winner determination under the cascade click model.
//
// Exact cascade WDP is hard, so this header works through two proxies that
// avoid the product-form discounting:
//
//  * restricted CTR: advertisers in value order take min(p, remaining mass)
//    until cumulative CTR reaches 1. Restricted welfare is within a factor 4
//    of cascade welfare for any matching under the value-sorted permutation.
//  * budgeted / base CTR: raw matched p, no truncation at all.
//
// Two algorithms are built on them:
//
//  * algorithm1_restricted: (1 - eps)-approximation of restricted welfare by
//    guessing the single discounted advertiser and its discount factor, then
//    solving a budgeted matching for each guess. Not known to be monotone.
//  * combined_cascade_solver: dyadic CTR buckets, greedy capped matching per
//    bucket, uniformly random bucket. Monotone, O(log m)-approximate in
//    expectation.
//
// The global capacity K is enforced by every algorithm here.

#ifndef ADAUCTION_CASCADE_WDP_HPP_
#define ADAUCTION_CASCADE_WDP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adauction/core.hpp"
#include "adauction/random.hpp"

namespace adauction {

// ---------------------------------------------------------------------------
// Value order and the welfare-optimal rendering permutation

// Advertiser indices by value descending, ties by index ascending.
struct SortedView {
  std::vector<std::size_t> order;

  explicit SortedView(std::span<const double> values) : order(values.size()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] > values[b];
    });
  }
};

// Ranks matched positions by their advertiser's value (descending, ties by
// advertiser index). Maximizes cascade welfare for the fixed matching.
inline Permutation optimal_permutation(const Allocation& x, std::span<const double> values) {
  std::vector<std::size_t> positions;
  for (std::size_t i : SortedView(values).order) {
    if (auto j = x.position_of(i)) positions.push_back(*j);
  }
  return Permutation::from_order(positions);
}

inline AugmentedAllocation with_optimal_permutation(Allocation x,
                                                    std::span<const double> values) {
  Permutation sigma = optimal_permutation(x, values);
  return {std::move(x), std::move(sigma)};
}

inline double cascade_welfare(const Instance& inst, std::span<const double> values,
                              const AugmentedAllocation& chi) {
  return welfare(values, cascade_ctr(inst, chi));
}

// Cascade welfare of a matching under the optimal permutation.
inline double cascade_welfare(const Instance& inst, std::span<const double> values,
                              const Allocation& x) {
  return cascade_welfare(inst, values, with_optimal_permutation(x, values));
}

// ---------------------------------------------------------------------------
// Restricted and budgeted CTRs

inline CtrVector restricted_ctr(const Instance& inst, const Allocation& x,
                                std::span<const double> values) {
  if (inst.model != Model::kCascade) {
    throw InvalidArgument("restricted_ctr needs a cascade instance");
  }
  require_length(values, inst.n, "values");
  check_feasible(inst, x);
  CtrVector pi(inst.n, 0.0);
  double used = 0.0;
  std::size_t discounted = 0;
  for (std::size_t i : SortedView(values).order) {
    const auto j = x.position_of(i);
    if (!j) continue;
    const double q = inst.p(i, *j);
    const double remaining = std::max(0.0, 1.0 - used);
    if (q < remaining) {
      pi[i] = q;
      used += q;
    } else {
      // Truncated: mass is exhausted from here on. Saturating `used` keeps
      // later advertisers at exactly zero instead of rounding noise.
      pi[i] = remaining;
      used = 1.0;
      if (remaining > 0.0 && remaining < q) ++discounted;
    }
  }
  if (discounted > 1) {
    throw std::logic_error("restricted_ctr: more than one discounted advertiser");
  }
  return pi;
}

inline double restricted_welfare(const Instance& inst, std::span<const double> values,
                                 const Allocation& x) {
  return welfare(values, restricted_ctr(inst, x, values));
}

// Raw matched CTR per advertiser; no truncation, no cascading.
inline CtrVector budgeted_ctr(const Instance& inst, const Allocation& x) {
  check_feasible(inst, x);
  CtrVector pi(inst.n, 0.0);
  for (const auto& [i, j] : x) pi[i] = inst.p(i, j);
  return pi;
}

inline double base_welfare(const Instance& inst, std::span<const double> values,
                           const Allocation& x) {
  return welfare(values, budgeted_ctr(inst, x));
}

// The advertiser whose restricted CTR is positive but strictly below its raw
// CTR, if any. There is at most one.
inline std::optional<std::size_t> discounted_advertiser(const Instance& inst,
                                                        const Allocation& x,
                                                        std::span<const double> values) {
  const CtrVector r = restricted_ctr(inst, x, values);
  const CtrVector b = budgeted_ctr(inst, x);
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (r[i] > 0.0 && r[i] < b[i]) return i;
  }
  return std::nullopt;
}

// Unmatches every advertiser whose restricted CTR is zero. Restricted CTRs
// and welfare are unchanged.
inline Allocation zero_suppress(const Instance& inst, const Allocation& x,
                                std::span<const double> values) {
  const CtrVector r = restricted_ctr(inst, x, values);
  Allocation out;
  for (const auto& [i, j] : x) {
    if (r[i] > 0.0) out.assign(i, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Budgeted matching

inline constexpr std::size_t kMaxExactBudgetedEdges = 24;
inline constexpr double kBudgetSlack = 1e-9;

// Exact budgeted matching by depth-first branch and bound:
//   max sum v_i w_ij x_ij  s.t.  sum w_ij x_ij <= budget, |x| <= cap,
// where w = `scaled_ctr`. Edges with zero weight or w > budget are pruned
// before the size guard is applied.
inline Allocation exact_budgeted_matching(const Instance& inst,
                                          std::span<const double> values,
                                          const Matrix& scaled_ctr, double budget,
                                          std::size_t cap) {
  require_length(values, inst.n, "values");
  if (scaled_ctr.rows() != inst.n || scaled_ctr.cols() != inst.m) {
    throw InvalidArgument("scaled CTR matrix shape does not match the instance");
  }

  struct Edge {
    std::size_t position;
    double cost;
    double gain;
  };
  std::vector<std::vector<Edge>> edges(inst.n);
  std::size_t edge_count = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      const double w = scaled_ctr(i, j);
      const double gain = values[i] * w;
      if (gain > 0.0 && w <= budget + kBudgetSlack) {
        edges[i].push_back({j, w, gain});
        ++edge_count;
      }
    }
  }
  if (edge_count > kMaxExactBudgetedEdges) {
    throw SizeLimitExceeded("exact budgeted matching limited to " +
                            std::to_string(kMaxExactBudgetedEdges) + " edges, got " +
                            std::to_string(edge_count));
  }

  // Optimistic completion bound: best edge of every remaining advertiser.
  std::vector<double> suffix_bound(inst.n + 1, 0.0);
  for (std::size_t i = inst.n; i-- > 0;) {
    double best = 0.0;
    for (const Edge& e : edges[i]) best = std::max(best, e.gain);
    suffix_bound[i] = suffix_bound[i + 1] + best;
  }

  std::vector<bool> taken(inst.m, false);
  std::vector<std::size_t> current(inst.n, SIZE_MAX);
  std::vector<std::size_t> best_choice(inst.n, SIZE_MAX);
  double best_value = 0.0;

  std::function<void(std::size_t, double, double, std::size_t)> search =
      [&](std::size_t i, double value, double spent, std::size_t used) {
        if (value > best_value) {
          best_value = value;
          best_choice = current;
        }
        if (i == inst.n || used == cap) return;
        if (value + suffix_bound[i] <= best_value) return;
        for (const Edge& e : edges[i]) {
          if (taken[e.position] || spent + e.cost > budget + kBudgetSlack) continue;
          taken[e.position] = true;
          current[i] = e.position;
          search(i + 1, value + e.gain, spent + e.cost, used + 1);
          current[i] = SIZE_MAX;
          taken[e.position] = false;
        }
        search(i + 1, value, spent, used);
      };
  search(0, 0.0, 0.0, 0);

  Allocation out;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (best_choice[i] != SIZE_MAX) out.assign(i, best_choice[i]);
  }
  return out;
}

// Pluggable inner solver for algorithm1_restricted. Any (1 - eps/2)
// approximation keeps the overall guarantee.
using BudgetedMatchingSolver =
    std::function<Allocation(const Instance&, std::span<const double> values,
                             const Matrix& scaled_ctr, double budget, std::size_t cap)>;

inline BudgetedMatchingSolver exact_budgeted_solver() {
  return [](const Instance& inst, std::span<const double> values, const Matrix& w,
            double budget, std::size_t cap) {
    return exact_budgeted_matching(inst, values, w, budget, cap);
  };
}

// Discount guesses eps/2, eps, ..., floor(2/eps) * eps/2, and finally 1.
inline std::vector<double> discount_grid(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const auto steps = static_cast<std::size_t>(std::floor(2.0 / eps + 1e-9));
  std::vector<double> grid;
  for (std::size_t t = 1; t <= steps; ++t) grid.push_back(static_cast<double>(t) * eps / 2.0);
  grid.push_back(1.0);
  return grid;
}

// Called once per (advertiser, discount) guess with the scaled CTRs and the
// inner solver's matching.
using Algorithm1Observer = std::function<void(std::size_t advertiser, double alpha,
                                              const Matrix& scaled_ctr,
                                              const Allocation& candidate)>;

inline Allocation algorithm1_restricted(const Instance& inst, std::span<const double> values,
                                        double eps,
                                        const BudgetedMatchingSolver& inner = exact_budgeted_solver(),
                                        const Algorithm1Observer& observer = {}) {
  if (inst.model != Model::kCascade) {
    throw InvalidArgument("algorithm1_restricted needs a cascade instance");
  }
  require_valid(inst);
  require_length(values, inst.n, "values");
  const std::vector<double> alphas = discount_grid(eps);

  Allocation best;
  double best_welfare = 0.0;
  for (std::size_t k = 0; k < inst.n; ++k) {
    for (double alpha : alphas) {
      Matrix scaled = inst.p;
      for (std::size_t j = 0; j < inst.m; ++j) scaled(k, j) *= alpha;
      Allocation cand = inner(inst, values, scaled, 1.0, inst.k);
      if (observer) observer(k, alpha, scaled, cand);
      const double w = restricted_welfare(inst, values, cand);
      if (w >= best_welfare) {
        best_welfare = w;
        best = std::move(cand);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Dyadic buckets and greedy matching

struct BucketEdge {
  std::size_t advertiser;
  std::size_t position;
  double ctr;
};

struct Bucket {
  std::size_t index = 1;  // 1-based; bucket 1 holds the largest CTRs
  std::vector<BucketEdge> edges;
  std::size_t cap = 1;
};

// ceil(log2(4m)): smallest L with 2^L >= 4m.
inline std::size_t bucket_count(std::size_t m) {
  std::size_t levels = 0;
  while ((std::size_t{1} << levels) < 4 * m) ++levels;
  return levels;
}

// Bucket l < L holds 2^-l < p <= 2^-(l-1); bucket L holds everything below.
// Zero-CTR edges are dropped.
inline std::vector<Bucket> bucketize(const Instance& inst) {
  const std::size_t levels = bucket_count(inst.m);
  std::vector<Bucket> buckets(levels);
  for (std::size_t l = 1; l <= levels; ++l) {
    buckets[l - 1].index = l;
    const std::size_t pow = l < 63 ? (std::size_t{1} << l) : SIZE_MAX;
    buckets[l - 1].cap = std::min({pow, inst.m, inst.k});
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      const double q = inst.p(i, j);
      if (!(q > 0.0)) continue;
      std::size_t l = 1;
      while (l < levels && !(q > std::ldexp(1.0, -static_cast<int>(l)))) ++l;
      buckets[l - 1].edges.push_back({i, j, q});
    }
  }
  return buckets;
}

// Greedy maximal matching by weight v_i * p_ij (ties by (advertiser,
// position) ascending), stopping at the bucket cap. Positions are ranked in
// insertion order, which is what makes the rule monotone; do not replace it
// with the value-sorted permutation. Edges of advertisers with v <= 0 are
// skipped.
inline AugmentedAllocation greedy_bucket(const Bucket& bucket, std::span<const double> values) {
  std::vector<BucketEdge> order;
  for (const BucketEdge& e : bucket.edges) {
    if (e.advertiser >= values.size()) {
      throw InvalidArgument("bucket edge refers to advertiser " +
                            std::to_string(e.advertiser) + " without a value");
    }
    if (values[e.advertiser] > 0.0) order.push_back(e);
  }
  std::sort(order.begin(), order.end(), [&](const BucketEdge& a, const BucketEdge& b) {
    const double wa = values[a.advertiser] * a.ctr;
    const double wb = values[b.advertiser] * b.ctr;
    if (wa != wb) return wa > wb;
    if (a.advertiser != b.advertiser) return a.advertiser < b.advertiser;
    return a.position < b.position;
  });

  Allocation x;
  std::vector<std::size_t> ranked;
  for (const BucketEdge& e : order) {
    if (ranked.size() >= bucket.cap) break;
    if (x.position_of(e.advertiser) || x.advertiser_at(e.position)) continue;
    x.assign(e.advertiser, e.position);
    ranked.push_back(e.position);
  }
  return {std::move(x), Permutation::from_order(ranked)};
}

// One greedy candidate per bucket, in bucket order.
inline std::vector<AugmentedAllocation> greedy_bucket_candidates(const Instance& inst,
                                                                 std::span<const double> values) {
  if (inst.model != Model::kCascade) {
    throw InvalidArgument("bucketized greedy needs a cascade instance");
  }
  require_valid(inst);
  require_length(values, inst.n, "values");
  std::vector<AugmentedAllocation> out;
  for (const Bucket& b : bucketize(inst)) out.push_back(greedy_bucket(b, values));
  return out;
}

// Expected CTRs of the uniform mixture over bucket candidates.
inline CtrVector combined_expected_ctr(const Instance& inst, std::span<const double> values) {
  const auto candidates = greedy_bucket_candidates(inst, values);
  CtrVector mean(inst.n, 0.0);
  for (const auto& chi : candidates) {
    const CtrVector pi = cascade_ctr(inst, chi);
    for (std::size_t i = 0; i < inst.n; ++i) mean[i] += pi[i];
  }
  for (double& x : mean) x /= static_cast<double>(candidates.size());
  return mean;
}

template <class URBG>
AugmentedAllocation combined_cascade_solver(const Instance& inst, std::span<const double> values,
                                            URBG& rng) {
  auto candidates = greedy_bucket_candidates(inst, values);
  return std::move(candidates[uniform_index(rng, candidates.size())]);
}

}  // namespace adauction

#endif  // ADAUCTION_CASCADE_WDP_HPP_
