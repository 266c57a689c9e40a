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

// Domain model for position auctions: instances, (augmented) allocations,
// the MNL and cascade click models, and welfare evaluation.
//
// Advertisers and positions are 0-based everywhere in the library.

#ifndef ADAUCTION_CORE_HPP_
#define ADAUCTION_CORE_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adauction {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad instance, mismatched lengths, out-of-range parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An allocation that violates the matching / capacity constraints.
class InfeasibleAllocation : public Error {
 public:
  using Error::Error;
};

// A solver could not produce an answer (numerical failure, iteration cap).
class SolverError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance exceeds its size guard.
class SizeLimitExceeded : public SolverError {
 public:
  using SolverError::SolverError;
};

// ---------------------------------------------------------------------------
// Tolerances

namespace tol {
inline constexpr double kFeasibility = 1e-9;
inline constexpr double kIntegrality = 1e-6;
// MNL rejects CTRs this close to 1; e^rho = p / (1 - p) would exceed 1e9.
inline constexpr double kMnlMaxCtrGap = 1e-9;
inline constexpr double kMonotonicity = 1e-9;
}  // namespace tol

// ---------------------------------------------------------------------------
// Dense row-major matrix, just enough for CTR tables and LP tableaus.

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix out(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) {
        throw InvalidArgument("ragged matrix: row " + std::to_string(i) +
                              " has " + std::to_string(rows[i].size()) +
                              " entries, expected " + std::to_string(c));
      }
      std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + i * c);
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Instance

enum class Model { kMnl, kCascade };

inline const char* model_name(Model model) {
  return model == Model::kMnl ? "mnl" : "cascade";
}

struct Instance {
  std::size_t n = 0;  // advertisers
  std::size_t m = 0;  // positions
  std::size_t k = 0;  // max matched pairs
  Matrix p;           // standalone CTRs, n x m
  Model model = Model::kMnl;

  double ctr(std::size_t i, std::size_t j) const { return p(i, j); }

  // exp(logit(p)) = p / (1 - p). Derived on demand so p stays the only state.
  double attraction(std::size_t i, std::size_t j) const {
    const double q = p(i, j);
    return q / (1.0 - q);
  }
};

// Returns the first violated invariant, or nullopt when the instance is valid.
inline std::optional<std::string> validate_instance(const Instance& inst) {
  if (inst.n < 1) return "n must be at least 1";
  if (inst.m < 1) return "m must be at least 1";
  if (inst.k < 1 || inst.k > inst.m) {
    return "K out of bounds: need 1 <= K <= m, got K=" + std::to_string(inst.k);
  }
  if (inst.p.rows() != inst.n || inst.p.cols() != inst.m) {
    return "CTR matrix is " + std::to_string(inst.p.rows()) + "x" +
           std::to_string(inst.p.cols()) + ", expected " +
           std::to_string(inst.n) + "x" + std::to_string(inst.m);
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      const double q = inst.p(i, j);
      const std::string where =
          " at (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!(q >= 0.0 && q <= 1.0)) return "CTR out of range" + where;
      if (inst.model == Model::kMnl) {
        if (q == 1.0) return "infinite log-odds" + where;
        if (q > 1.0 - tol::kMnlMaxCtrGap) return "log-odds too large" + where;
      }
    }
  }
  return std::nullopt;
}

inline void require_valid(const Instance& inst) {
  if (auto err = validate_instance(inst)) throw InvalidArgument(*err);
}

inline Instance make_instance(const std::vector<std::vector<double>>& p,
                              std::size_t k, Model model) {
  Instance inst;
  inst.p = Matrix::from_rows(p);
  inst.n = inst.p.rows();
  inst.m = inst.p.cols();
  inst.k = k;
  inst.model = model;
  require_valid(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Allocation: a partial matching stored sparsely as advertiser -> position.

class Allocation {
 public:
  using Pairs = std::map<std::size_t, std::size_t>;

  Allocation() = default;
  Allocation(std::initializer_list<std::pair<const std::size_t, std::size_t>> pairs) {
    for (const auto& [i, j] : pairs) assign(i, j);
  }

  // Throws InfeasibleAllocation if either endpoint is already matched.
  void assign(std::size_t advertiser, std::size_t position) {
    if (by_advertiser_.count(advertiser) != 0) {
      throw InfeasibleAllocation("advertiser " + std::to_string(advertiser) +
                                 " matched twice");
    }
    if (advertiser_at(position)) {
      throw InfeasibleAllocation("position " + std::to_string(position) +
                                 " matched twice");
    }
    by_advertiser_.emplace(advertiser, position);
  }

  void unassign(std::size_t advertiser) { by_advertiser_.erase(advertiser); }

  std::optional<std::size_t> position_of(std::size_t advertiser) const {
    auto it = by_advertiser_.find(advertiser);
    if (it == by_advertiser_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> advertiser_at(std::size_t position) const {
    for (const auto& [i, j] : by_advertiser_) {
      if (j == position) return i;
    }
    return std::nullopt;
  }

  bool contains(std::size_t advertiser, std::size_t position) const {
    auto it = by_advertiser_.find(advertiser);
    return it != by_advertiser_.end() && it->second == position;
  }

  std::size_t size() const { return by_advertiser_.size(); }
  bool empty() const { return by_advertiser_.empty(); }

  Pairs::const_iterator begin() const { return by_advertiser_.begin(); }
  Pairs::const_iterator end() const { return by_advertiser_.end(); }

  bool operator==(const Allocation&) const = default;

 private:
  Pairs by_advertiser_;
};

inline void check_feasible(const Instance& inst, const Allocation& x) {
  if (x.size() > inst.k) {
    throw InfeasibleAllocation("allocation has " + std::to_string(x.size()) +
                               " pairs, capacity K=" + std::to_string(inst.k));
  }
  for (const auto& [i, j] : x) {
    if (i >= inst.n || j >= inst.m) {
      throw InfeasibleAllocation("pair (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") outside the instance");
    }
  }
}

// ---------------------------------------------------------------------------
// Permutation: rank (1-based) of every matched position. Unmatched positions
// carry no rank and are implicitly rendered after all matched ones.

class Permutation {
 public:
  Permutation() = default;

  // Ranks positions in the given order: order[0] gets rank 1.
  static Permutation from_order(std::span<const std::size_t> positions) {
    Permutation out;
    std::size_t rank = 1;
    for (std::size_t j : positions) {
      if (!out.rank_.emplace(j, rank++).second) {
        throw InvalidArgument("position " + std::to_string(j) +
                              " ranked twice");
      }
    }
    return out;
  }

  std::optional<std::size_t> rank_of(std::size_t position) const {
    auto it = rank_.find(position);
    if (it == rank_.end()) return std::nullopt;
    return it->second;
  }

  // Matched positions from rank 1 upward.
  std::vector<std::size_t> order() const {
    std::vector<std::size_t> out(rank_.size());
    for (const auto& [j, r] : rank_) out[r - 1] = j;
    return out;
  }

  std::size_t size() const { return rank_.size(); }

  bool operator==(const Permutation&) const = default;

 private:
  std::map<std::size_t, std::size_t> rank_;
};

struct AugmentedAllocation {
  Allocation allocation;
  Permutation permutation;

  bool operator==(const AugmentedAllocation&) const = default;
};

inline void check_feasible(const Instance& inst, const AugmentedAllocation& chi) {
  check_feasible(inst, chi.allocation);
  if (chi.permutation.size() != chi.allocation.size()) {
    throw InfeasibleAllocation("permutation ranks " +
                               std::to_string(chi.permutation.size()) +
                               " positions but allocation matches " +
                               std::to_string(chi.allocation.size()));
  }
  for (const auto& [i, j] : chi.allocation) {
    if (!chi.permutation.rank_of(j)) {
      throw InfeasibleAllocation("matched position " + std::to_string(j) +
                                 " has no rank");
    }
  }
}

// Per-advertiser click probabilities.
using CtrVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Click models

inline CtrVector mnl_ctr(const Instance& inst, const Allocation& x) {
  if (inst.model != Model::kMnl) throw InvalidArgument("mnl_ctr on a cascade instance");
  check_feasible(inst, x);
  double denom = 1.0;
  for (const auto& [i, j] : x) denom += inst.attraction(i, j);
  CtrVector pi(inst.n, 0.0);
  for (const auto& [i, j] : x) pi[i] = inst.attraction(i, j) / denom;
  return pi;
}

// Cascade CTRs under an explicit rendering order.
inline CtrVector cascade_ctr(const Instance& inst, const AugmentedAllocation& chi) {
  if (inst.model != Model::kCascade) {
    throw InvalidArgument("cascade_ctr on an MNL instance");
  }
  check_feasible(inst, chi);
  CtrVector pi(inst.n, 0.0);
  double survive = 1.0;
  for (std::size_t j : chi.permutation.order()) {
    const std::size_t i = *chi.allocation.advertiser_at(j);
    const double q = inst.p(i, j);
    pi[i] = q * survive;
    survive *= 1.0 - q;
  }
  return pi;
}

inline double welfare(std::span<const double> values, std::span<const double> pi) {
  if (values.size() != pi.size()) {
    throw InvalidArgument("welfare: " + std::to_string(values.size()) +
                          " values vs " + std::to_string(pi.size()) + " CTRs");
  }
  return std::inner_product(values.begin(), values.end(), pi.begin(), 0.0);
}

inline void require_length(std::span<const double> v, std::size_t n,
                           const char* what) {
  if (v.size() != n) {
    throw InvalidArgument(std::string(what) + " has length " +
                          std::to_string(v.size()) + ", expected " +
                          std::to_string(n));
  }
}

// Instance over a subset of advertisers, plus the map back to the original
// indices (`original[local] = global`).
struct SubInstance {
  Instance instance;
  std::vector<std::size_t> original;

  Allocation lift(const Allocation& local) const {
    Allocation out;
    for (const auto& [i, j] : local) out.assign(original[i], j);
    return out;
  }

  std::vector<double> project(std::span<const double> global) const {
    std::vector<double> out;
    out.reserve(original.size());
    for (std::size_t g : original) out.push_back(global[g]);
    return out;
  }
};

// Keeps advertisers with a strictly positive bid. The result may have n = 0.
inline SubInstance positive_bidders(const Instance& inst, std::span<const double> bids) {
  require_length(bids, inst.n, "bids");
  SubInstance sub;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (bids[i] > 0.0) sub.original.push_back(i);
  }
  sub.instance.n = sub.original.size();
  sub.instance.m = inst.m;
  sub.instance.k = inst.k;
  sub.instance.model = inst.model;
  sub.instance.p = Matrix(sub.instance.n, inst.m);
  for (std::size_t a = 0; a < sub.original.size(); ++a) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      sub.instance.p(a, j) = inst.p(sub.original[a], j);
    }
  }
  return sub;
}

}  // namespace adauction

#endif  // ADAUCTION_CORE_HPP_
