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

// Truthful mechanisms on top of the WDP solvers: VCG, a virtual-value
// (Myerson) auction with envelope payments, and a monotonicity audit.

#ifndef ADAUCTION_MECHANISMS_HPP_
#define ADAUCTION_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adauction/cascade_wdp.hpp"
#include "adauction/core.hpp"
#include "adauction/distributions.hpp"
#include "adauction/mnl_wdp.hpp"
#include "adauction/oracle.hpp"

namespace adauction {

enum class SolverKind { kExactMnl, kBruteCascade, kGreedyCascade };

inline const char* solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kExactMnl: return "exact_mnl";
    case SolverKind::kBruteCascade: return "brute_cascade";
    case SolverKind::kGreedyCascade: return "greedy_cascade";
  }
  return "unknown";
}

// Solver output. Deterministic solvers return a one-element lottery. The
// bucketized greedy returns one candidate per bucket, each drawn with equal
// probability, and `ctrs` holds the expected CTRs of that mixture.
struct SolveResult {
  std::vector<AugmentedAllocation> lottery;
  CtrVector ctrs;
};

struct SolverHandle {
  SolverKind kind = SolverKind::kExactMnl;
  std::string name;
  std::function<SolveResult(const Instance&, std::span<const double>)> solve;

  bool exact() const { return kind != SolverKind::kGreedyCascade; }
};

inline SolverHandle exact_mnl_solver() {
  return {SolverKind::kExactMnl, "exact_mnl", [](const Instance& inst, std::span<const double> bids) {
            WdpResult r = solve_mnl_wdp(inst, bids);
            SolveResult out;
            out.ctrs = std::move(r.ctrs);
            out.lottery.push_back(with_optimal_permutation(std::move(r.allocation), bids));
            return out;
          }};
}

inline SolverHandle brute_cascade_solver() {
  return {SolverKind::kBruteCascade, "brute_cascade",
          [](const Instance& inst, std::span<const double> bids) {
            require_valid(inst);
            const SubInstance sub = positive_bidders(inst, bids);
            AugmentedAllocation chi;
            if (sub.instance.n > 0) {
              const std::vector<double> local = sub.project(bids);
              const CascadeOptimum opt = brute_force_wdp_cascade(sub.instance, local);
              chi = with_optimal_permutation(sub.lift(opt.best.allocation), bids);
            }
            SolveResult out;
            out.ctrs = cascade_ctr(inst, chi);
            out.lottery.push_back(std::move(chi));
            return out;
          }};
}

inline SolverHandle greedy_cascade_solver() {
  return {SolverKind::kGreedyCascade, "greedy_cascade",
          [](const Instance& inst, std::span<const double> bids) {
            require_valid(inst);
            const SubInstance sub = positive_bidders(inst, bids);
            SolveResult out;
            out.ctrs.assign(inst.n, 0.0);
            if (sub.instance.n == 0) {
              out.lottery.emplace_back();
              return out;
            }
            const std::vector<double> local = sub.project(bids);
            for (const AugmentedAllocation& c : greedy_bucket_candidates(sub.instance, local)) {
              // Keep the greedy insertion order; re-sorting by value breaks monotonicity.
              AugmentedAllocation chi{sub.lift(c.allocation), c.permutation};
              const CtrVector pi = cascade_ctr(inst, chi);
              for (std::size_t i = 0; i < inst.n; ++i) out.ctrs[i] += pi[i];
              out.lottery.push_back(std::move(chi));
            }
            for (double& x : out.ctrs) x /= static_cast<double>(out.lottery.size());
            return out;
          }};
}

// Test fixture with a planted monotonicity bug: whenever the top bid exceeds
// `threshold`, that bidder is thrown out before calling `base`.
inline SolverHandle threshold_dropping_solver(SolverHandle base, double threshold) {
  SolverHandle out;
  out.kind = SolverKind::kGreedyCascade;  // not exact: must be audited
  out.name = base.name + "+threshold_drop";
  out.solve = [base = std::move(base), threshold](const Instance& inst,
                                                   std::span<const double> bids) {
    std::vector<double> b(bids.begin(), bids.end());
    if (!b.empty()) {
      auto top = std::max_element(b.begin(), b.end());
      if (*top > threshold) *top = 0.0;
    }
    return base.solve(inst, b);
  };
  return out;
}

struct MechanismOutcome {
  std::vector<AugmentedAllocation> lottery;
  CtrVector ctrs;
  std::vector<double> payments;
  std::vector<double> utilities;  // v_i * pi_i - t_i at the given values
  double welfare = 0.0;
  double revenue = 0.0;

  const AugmentedAllocation& allocation() const { return lottery.front(); }
};

namespace detail {

inline double others_welfare(std::span<const double> values, const CtrVector& pi,
                             std::size_t skip) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != skip) total += values[i] * pi[i];
  }
  return total;
}

inline void finish_outcome(MechanismOutcome& out, std::span<const double> values) {
  out.utilities.resize(values.size());
  out.welfare = welfare(values, out.ctrs);
  out.revenue = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.utilities[i] = values[i] * out.ctrs[i] - out.payments[i];
    out.revenue += out.payments[i];
  }
}

}  // namespace detail

// VCG with n + 1 solver calls. Round-off in (-1e-9, 0) is snapped to zero.
inline MechanismOutcome vcg(const Instance& inst, std::span<const double> values,
                            const SolverHandle& solver) {
  if (!solver.exact()) throw InvalidArgument("vcg needs an exact solver, got " + solver.name);
  require_length(values, inst.n, "values");
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("values must be finite and >= 0");
  }
  SolveResult main = solver.solve(inst, values);
  MechanismOutcome out;
  out.payments.assign(inst.n, 0.0);
  std::vector<double> without(values.begin(), values.end());
  for (std::size_t i = 0; i < inst.n; ++i) {
    without[i] = 0.0;
    const SolveResult alt = solver.solve(inst, without);
    without[i] = values[i];
    double t = detail::others_welfare(values, alt.ctrs, i) -
               detail::others_welfare(values, main.ctrs, i);
    if (t < 0.0 && t > -tol::kFeasibility) t = 0.0;
    if (t < 0.0) {
      throw SolverError("negative VCG payment " + std::to_string(t) + " for advertiser " +
                        std::to_string(i) + ": solver is not exact");
    }
    out.payments[i] = t;
  }
  out.lottery = std::move(main.lottery);
  out.ctrs = std::move(main.ctrs);
  detail::finish_outcome(out, values);
  return out;
}

// Bid entered into the WDP for value z: phi(z), with non-positive virtual
// values excluded (bid 0). Below the support the bidder is excluded; above a
// bounded support phi(z) = z.
inline double virtual_bid(const ValueDistribution& dist, double z) {
  if (z < dist.lower()) return 0.0;
  if (z > dist.upper()) return z;
  return std::max(dist.virtual_value(z), 0.0);
}

struct MyersonOptions {
  std::size_t grid_size = 1024;
  // Evaluate y_i at every grid point even for exact solvers.
  bool exhaustive = false;
};

struct MonotonicityViolation {
  std::size_t advertiser = 0;
  double low_bid = 0.0;
  double high_bid = 0.0;
  double low_ctr = 0.0;
  double high_ctr = 0.0;
};

inline std::string describe(const MonotonicityViolation& v) {
  return "advertiser " + std::to_string(v.advertiser) + ": ctr " + std::to_string(v.low_ctr) +
         " at bid " + std::to_string(v.low_bid) + " drops to " + std::to_string(v.high_ctr) +
         " at bid " + std::to_string(v.high_bid);
}

// Sweeps b_i over `grid` (sorted ascending first) and reports the first drop
// of pi_i larger than 1e-9.
inline std::optional<MonotonicityViolation> monotonicity_audit(const SolverHandle& solver,
                                                               const Instance& inst,
                                                               std::span<const double> bids_template,
                                                               std::size_t i,
                                                               std::vector<double> grid) {
  require_length(bids_template, inst.n, "bids");
  if (i >= inst.n) throw InvalidArgument("advertiser index out of range");
  std::sort(grid.begin(), grid.end());
  std::vector<double> bids(bids_template.begin(), bids_template.end());
  std::optional<double> prev_bid;
  double prev_ctr = 0.0;
  for (double b : grid) {
    bids[i] = b;
    const double ctr = solver.solve(inst, bids).ctrs[i];
    if (prev_bid && ctr < prev_ctr - tol::kMonotonicity) {
      return MonotonicityViolation{i, *prev_bid, b, prev_ctr, ctr};
    }
    prev_bid = b;
    prev_ctr = ctr;
  }
  return std::nullopt;
}

// Virtual-value auction. The allocation maximizes sum phi_i pi_i over the
// advertisers with phi_i > 0; advertiser i pays
//   t_i = v_i y_i(v) - (v_i / G) * sum_{k=1..G} y_i(k v_i / G, v_-i).
// Exact solvers have monotone y_i, so the sum is found by bisection on the
// step function; other solvers are evaluated at every grid point and
// rejected if y_i ever decreases.
inline MechanismOutcome myerson(const Instance& inst, std::span<const double> values,
                                std::span<const ValueDistribution> dists,
                                const SolverHandle& solver, MyersonOptions options = {}) {
  require_length(values, inst.n, "values");
  if (dists.size() != inst.n) throw InvalidArgument("need one distribution per advertiser");
  if (options.grid_size == 0) throw InvalidArgument("grid_size must be positive");
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (!dists[i].regular()) {
      throw InvalidArgument("distribution of advertiser " + std::to_string(i) + " (" +
                            dists[i].name() + ") is not regular");
    }
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw InvalidArgument("values must be finite and >= 0");
    }
  }

  std::vector<double> bids(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) bids[i] = virtual_bid(dists[i], values[i]);
  SolveResult main = solver.solve(inst, bids);

  const bool scan_all = options.exhaustive || !solver.exact();
  const std::size_t grid = options.grid_size;
  MechanismOutcome out;
  out.payments.assign(inst.n, 0.0);
  std::vector<double> probe = bids;
  for (std::size_t i = 0; i < inst.n; ++i) {
    const double v = values[i];
    const double y_top = main.ctrs[i];
    if (!scan_all && y_top <= 0.0) continue;  // y_i = 0 on all of [0, v_i]

    auto point = [&](std::size_t k) { return k == grid ? v : v * static_cast<double>(k) / grid; };
    auto y_at = [&](std::size_t k) {
      if (k == grid) return y_top;
      probe[i] = virtual_bid(dists[i], point(k));
      const double y = solver.solve(inst, probe).ctrs[i];
      probe[i] = bids[i];
      return y;
    };

    double sum = 0.0;
    if (scan_all) {
      double prev = 0.0;
      for (std::size_t k = 1; k <= grid; ++k) {
        const double y = y_at(k);
        if (y < prev - tol::kMonotonicity) {
          throw SolverError("non-monotone allocation rule in " + solver.name + ": " +
                            describe({i, point(k - 1), point(k), prev, y}));
        }
        sum += y;
        prev = y;
      }
    } else {
      // Sum of y over grid points lo..hi given y(lo), y(hi); equal ends mean
      // a flat stretch.
      auto flat_sum = [&](auto& self, std::size_t lo, double y_lo, std::size_t hi,
                          double y_hi) -> double {
        if (y_lo == y_hi) return y_lo * static_cast<double>(hi - lo + 1);
        if (hi - lo == 1) return y_lo + y_hi;
        const std::size_t mid = lo + (hi - lo) / 2;
        const double y_mid = y_at(mid);
        return self(self, lo, y_lo, mid, y_mid) + self(self, mid, y_mid, hi, y_hi) - y_mid;
      };
      sum = flat_sum(flat_sum, 1, y_at(1), grid, y_top);
    }
    const double t = v * y_top - v / static_cast<double>(grid) * sum;
    out.payments[i] = std::max(t, 0.0);
  }

  out.lottery = std::move(main.lottery);
  out.ctrs = std::move(main.ctrs);
  detail::finish_outcome(out, values);
  return out;
}

}  // namespace adauction

#endif  // ADAUCTION_MECHANISMS_HPP_
