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

// Batch commands behind the command-line tool. Each command returns a Report
// holding the primary output (JSON or CSV), a diagnostic log and an exit code.

#ifndef ADAUCTION_COMMANDS_HPP_
#define ADAUCTION_COMMANDS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "adauction/cascade_wdp.hpp"
#include "adauction/core.hpp"
#include "adauction/distributions.hpp"
#include "adauction/io.hpp"
#include "adauction/mechanisms.hpp"
#include "adauction/mnl_wdp.hpp"
#include "adauction/oracle.hpp"
#include "adauction/random.hpp"

namespace adauction {

class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitSolver = 2, kExitAudit = 3 };

struct RunConfig {
  std::string command;  // solve | mechanism | simulate | audit
  std::string instance_path;
  std::string values_path;
  std::string dist_path;
  std::string algorithm;  // lp | dinkelbach | greedy | ptas | brute; empty picks by model
  std::string mechanism = "vcg";  // vcg | myerson | both
  double epsilon = 0.1;
  std::size_t grid = 1024;
  std::optional<std::size_t> samples;  // simulate: 10000, audit: 100
  std::uint64_t seed = 0;
  std::string out_path;
  bool planted_bug = false;  // audit only: swap in a solver with a known violation
};

struct Report {
  int status = kExitOk;
  std::string output;
  std::string log;
};

inline void validate_config(const RunConfig& c) {
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw UsageError("--epsilon must lie in (0, 1)");
  if (c.grid == 0) throw UsageError("--grid must be positive");
  static const std::array<const char*, 6> algorithms = {"", "lp", "dinkelbach", "greedy", "ptas",
                                                        "brute"};
  if (std::find(algorithms.begin(), algorithms.end(), c.algorithm) == algorithms.end()) {
    throw UsageError("unknown algorithm '" + c.algorithm +
                     "' (expected lp, dinkelbach, greedy, ptas or brute)");
  }
  if (c.mechanism != "vcg" && c.mechanism != "myerson" && c.mechanism != "both") {
    throw UsageError("unknown mechanism '" + c.mechanism + "' (expected vcg, myerson or both)");
  }
}

inline std::string resolved_algorithm(const RunConfig& c, const Instance& inst) {
  if (!c.algorithm.empty()) return c.algorithm;
  return inst.model == Model::kMnl ? "lp" : "brute";
}

inline Instance require_instance(const RunConfig& c) {
  if (c.instance_path.empty()) throw UsageError("--instance is required");
  return load_instance(c.instance_path);
}

inline std::vector<double> require_values(const RunConfig& c, const Instance& inst) {
  if (c.values_path.empty()) throw UsageError("--values is required");
  return load_values(c.values_path, inst.n);
}

inline std::vector<ValueDistribution> require_dists(const RunConfig& c, const Instance& inst) {
  if (c.dist_path.empty()) throw UsageError("--dist is required");
  return load_distributions(c.dist_path, inst.n);
}

inline SolverHandle dinkelbach_solver() {
  return {SolverKind::kExactMnl, "dinkelbach",
          [](const Instance& inst, std::span<const double> bids) {
            WdpResult r = dinkelbach_check(inst, bids);
            SolveResult out;
            out.ctrs = std::move(r.ctrs);
            out.lottery.push_back(with_optimal_permutation(std::move(r.allocation), bids));
            return out;
          }};
}

// Solver used inside the mechanisms for this model and algorithm.
inline SolverHandle mechanism_solver(const std::string& algorithm, const Instance& inst) {
  if (inst.model == Model::kMnl) {
    if (algorithm == "lp") return exact_mnl_solver();
    if (algorithm == "dinkelbach") return dinkelbach_solver();
    throw UsageError("algorithm '" + algorithm + "' cannot drive a mechanism on MNL instances");
  }
  if (algorithm == "brute") return brute_cascade_solver();
  if (algorithm == "greedy") return greedy_cascade_solver();
  throw UsageError("algorithm '" + algorithm +
                   "' cannot drive a mechanism on cascade instances (use brute or greedy)");
}

inline void require_model(const Instance& inst, Model model, const std::string& algorithm) {
  if (inst.model != model) {
    throw UsageError("algorithm '" + algorithm + "' needs a " + model_name(model) + " instance");
  }
}

inline Report cmd_solve(const RunConfig& c) {
  validate_config(c);
  const Instance inst = require_instance(c);
  const std::vector<double> bids = require_values(c, inst);
  const std::string algorithm = resolved_algorithm(c, inst);

  AugmentedAllocation chi;
  CtrVector ctrs;
  Json extra = Json::object();
  if (algorithm == "lp" || algorithm == "dinkelbach") {
    require_model(inst, Model::kMnl, algorithm);
    WdpResult r = algorithm == "lp" ? solve_mnl_wdp(inst, bids) : dinkelbach_check(inst, bids);
    extra["iterations"] = r.iterations;
    ctrs = std::move(r.ctrs);
    chi = with_optimal_permutation(std::move(r.allocation), bids);
  } else if (algorithm == "brute") {
    if (inst.model == Model::kMnl) {
      WdpResult r = brute_force_wdp_mnl(inst, bids);
      ctrs = std::move(r.ctrs);
      chi = with_optimal_permutation(std::move(r.allocation), bids);
    } else {
      chi = brute_force_wdp_cascade(inst, bids).best;
      ctrs = cascade_ctr(inst, chi);
    }
  } else if (algorithm == "ptas") {
    require_model(inst, Model::kCascade, algorithm);
    const Allocation x = algorithm1_restricted(inst, bids, c.epsilon);
    extra["restricted_objective"] = restricted_welfare(inst, bids, x);
    chi = with_optimal_permutation(x, bids);
    ctrs = cascade_ctr(inst, chi);
  } else {  // greedy
    require_model(inst, Model::kCascade, algorithm);
    Rng rng(c.seed);
    chi = combined_cascade_solver(inst, bids, rng);
    ctrs = cascade_ctr(inst, chi);
    const CtrVector expected = combined_expected_ctr(inst, bids);
    extra["expected_ctr"] = expected;
    extra["expected_objective"] = welfare(bids, expected);
  }

  Json j = allocation_to_json(chi);
  j["algorithm"] = algorithm;
  j["model"] = model_name(inst.model);
  j["ctr"] = ctrs;
  j["objective"] = welfare(bids, ctrs);
  j.update(extra);
  return {kExitOk, j.dump(2) + "\n", ""};
}

inline std::vector<std::string> mechanisms_of(const RunConfig& c) {
  if (c.mechanism == "both") return {"vcg", "myerson"};
  return {c.mechanism};
}

inline MechanismOutcome run_mechanism(const std::string& mechanism, const Instance& inst,
                                      std::span<const double> values,
                                      std::span<const ValueDistribution> dists,
                                      const SolverHandle& solver, std::size_t grid) {
  if (mechanism == "vcg") return vcg(inst, values, solver);
  MyersonOptions opts;
  opts.grid_size = grid;
  return myerson(inst, values, dists, solver, opts);
}

inline Report cmd_mechanism(const RunConfig& c) {
  validate_config(c);
  const Instance inst = require_instance(c);
  const std::vector<double> values = require_values(c, inst);
  const SolverHandle solver = mechanism_solver(resolved_algorithm(c, inst), inst);
  std::vector<ValueDistribution> dists;
  if (c.mechanism != "vcg") dists = require_dists(c, inst);

  CsvWriter csv({"mechanism", "advertiser", "value", "ctr", "payment", "utility"});
  for (const std::string& mech : mechanisms_of(c)) {
    const MechanismOutcome o = run_mechanism(mech, inst, values, dists, solver, c.grid);
    for (std::size_t i = 0; i < inst.n; ++i) {
      csv.row({mech, std::to_string(i), format_double(values[i]), format_double(o.ctrs[i]),
               format_double(o.payments[i]), format_double(o.utilities[i])});
    }
  }
  return {kExitOk, csv.str(), ""};
}

// Per-sample values come from derive_seed(seed, sample) alone, so every row
// can be recomputed in isolation.
inline Report cmd_simulate(const RunConfig& c) {
  validate_config(c);
  const Instance inst = require_instance(c);
  const std::vector<ValueDistribution> dists = require_dists(c, inst);
  const SolverHandle solver = mechanism_solver(resolved_algorithm(c, inst), inst);
  const std::size_t samples = c.samples.value_or(10000);
  if (samples == 0) throw UsageError("--samples must be positive");
  const std::vector<std::string> mechs = mechanisms_of(c);

  struct Moments {
    double welfare = 0.0, welfare_sq = 0.0, revenue = 0.0, revenue_sq = 0.0;
  };
  std::vector<Moments> moments(mechs.size());
  CsvWriter csv({"sample", "mechanism", "welfare", "revenue", "seed"});
  std::vector<double> values(inst.n);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::uint64_t sample_seed = derive_seed(c.seed, s);
    Rng rng(sample_seed);
    for (std::size_t i = 0; i < inst.n; ++i) values[i] = dists[i].sample(rng);
    for (std::size_t k = 0; k < mechs.size(); ++k) {
      const MechanismOutcome o = run_mechanism(mechs[k], inst, values, dists, solver, c.grid);
      moments[k].welfare += o.welfare;
      moments[k].welfare_sq += o.welfare * o.welfare;
      moments[k].revenue += o.revenue;
      moments[k].revenue_sq += o.revenue * o.revenue;
      csv.row({std::to_string(s), mechs[k], format_double(o.welfare), format_double(o.revenue),
               std::to_string(sample_seed)});
    }
  }
  const double count = static_cast<double>(samples);
  auto stderr_of = [&](double sum, double sq) {
    if (samples < 2) return 0.0;
    const double mean = sum / count;
    const double var = std::max(0.0, (sq - count * mean * mean) / (count - 1.0));
    return std::sqrt(var / count);
  };
  for (std::size_t k = 0; k < mechs.size(); ++k) {
    const Moments& m = moments[k];
    csv.row({"mean", mechs[k], format_double(m.welfare / count), format_double(m.revenue / count),
             std::to_string(c.seed)});
    csv.row({"stderr", mechs[k], format_double(stderr_of(m.welfare, m.welfare_sq)),
             format_double(stderr_of(m.revenue, m.revenue_sq)), std::to_string(c.seed)});
  }
  return {kExitOk, csv.str(), ""};
}

namespace detail {

template <class URBG>
Allocation random_allocation(const Instance& inst, URBG& rng) {
  std::vector<std::size_t> ads(inst.n);
  for (std::size_t i = 0; i < inst.n; ++i) ads[i] = i;
  for (std::size_t i = inst.n; i > 1; --i) std::swap(ads[i - 1], ads[uniform_index(rng, i)]);
  Allocation x;
  std::size_t next = 0;
  for (std::size_t j = 0; j < inst.m && next < inst.n && x.size() < inst.k; ++j) {
    if (uniform_index(rng, 2) == 1) x.assign(ads[next++], j);
  }
  return x;
}

class RatioHistogram {
 public:
  static constexpr std::size_t kBins = 20;

  void add(const std::string& algorithm, double ratio) {
    auto it = std::find(names_.begin(), names_.end(), algorithm);
    if (it == names_.end()) {
      names_.push_back(algorithm);
      counts_.emplace_back(kBins, 0);
      it = names_.end() - 1;
    }
    const double r = std::clamp(ratio, 0.0, 1.0);
    const auto bin = std::min(kBins - 1, static_cast<std::size_t>(r * kBins));
    ++counts_[static_cast<std::size_t>(it - names_.begin())][bin];
  }

  std::string csv() const {
    CsvWriter w({"algorithm", "bin_lo", "bin_hi", "count"});
    for (std::size_t a = 0; a < names_.size(); ++a) {
      for (std::size_t b = 0; b < kBins; ++b) {
        w.row({names_[a], format_double(static_cast<double>(b) / kBins),
               format_double(static_cast<double>(b + 1) / kBins), std::to_string(counts_[a][b])});
      }
    }
    return w.str();
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> counts_;
};

}  // namespace detail

// Property suite over random desk-size instances: LP exactness, solver
// monotonicity, the restricted-welfare sandwich and the approximation bounds
// of the cascade algorithms. Emits a histogram of ALG / OPT ratios.
inline Report cmd_audit(const RunConfig& c) {
  validate_config(c);
  const std::size_t count = c.samples.value_or(100);
  std::ostringstream log;
  std::size_t failures = 0;
  auto fail = [&](std::size_t trial, const std::string& what, const Instance& inst) {
    ++failures;
    log << "FAIL trial " << trial << ": " << what << "\n  instance " << instance_to_json(inst).dump()
        << "\n";
  };
  detail::RatioHistogram hist;
  std::vector<double> sweep;
  for (std::size_t k = 1; k <= 16; ++k) sweep.push_back(10.0 * static_cast<double>(k) / 16.0);

  const SolverHandle mnl_solver = exact_mnl_solver();
  const SolverHandle cascade_solver = c.planted_bug
                                          ? threshold_dropping_solver(greedy_cascade_solver(), 5.0)
                                          : greedy_cascade_solver();

  for (std::size_t t = 0; t < count; ++t) {
    Rng rng(derive_seed(c.seed, t));

    RandomInstanceSpec mnl_spec;
    const Instance mnl = random_instance(rng, mnl_spec);
    const std::vector<double> bids = random_values(rng, mnl.n, 0.0, 10.0);
    const double lp = solve_mnl_wdp(mnl, bids).objective;
    const double opt = brute_force_wdp_mnl(mnl, bids).objective;
    if (std::abs(lp - opt) > 1e-6) {
      fail(t, "LP objective " + format_double(lp) + " != brute force " + format_double(opt), mnl);
    }
    if (opt > 0.0) hist.add("lp", lp / opt);
    for (std::size_t i = 0; i < mnl.n; ++i) {
      if (auto v = monotonicity_audit(mnl_solver, mnl, bids, i, sweep)) {
        fail(t, "exact MNL solver not monotone: " + describe(*v), mnl);
      }
    }

    RandomInstanceSpec cas_spec;
    cas_spec.model = Model::kCascade;
    const Instance cas = random_instance(rng, cas_spec);
    const std::vector<double> values = random_values(rng, cas.n, 0.0, 10.0);

    const Allocation x = detail::random_allocation(cas, rng);
    const double w = cascade_welfare(cas, values, x);
    const double wr = restricted_welfare(cas, values, x);
    if (w > wr + 1e-9 || wr > 4.0 * w + 1e-9) {
      fail(t, "sandwich violated: welfare " + format_double(w) + ", restricted " +
                  format_double(wr), cas);
    }

    const double cascade_opt = brute_force_wdp_cascade(cas, values).welfare;
    const double restricted_opt = brute_force_restricted(cas, values).welfare;
    const Allocation ptas = algorithm1_restricted(cas, values, c.epsilon);
    const double ptas_restricted = restricted_welfare(cas, values, ptas);
    if (ptas_restricted < (1.0 - c.epsilon) * restricted_opt - 1e-9) {
      fail(t, "restricted welfare " + format_double(ptas_restricted) + " below (1-eps) * " +
                  format_double(restricted_opt), cas);
    }
    const double greedy = welfare(values, combined_expected_ctr(cas, values));
    const double bound = cascade_opt / (28.0 * std::log2(4.0 * static_cast<double>(cas.m)));
    if (greedy < bound - 1e-9) {
      fail(t, "greedy expected welfare " + format_double(greedy) + " below " +
                  format_double(bound), cas);
    }
    if (cascade_opt > 0.0) {
      hist.add("ptas", cascade_welfare(cas, values, ptas) / cascade_opt);
      hist.add("greedy", greedy / cascade_opt);
    }
    for (std::size_t i = 0; i < cas.n; ++i) {
      if (auto v = monotonicity_audit(cascade_solver, cas, values, i, sweep)) {
        fail(t, cascade_solver.name + " not monotone: " + describe(*v), cas);
      }
    }
  }
  log << (failures == 0 ? "audit passed" : "audit FAILED") << ": " << count << " trials, "
      << failures << " violations\n";
  return {failures == 0 ? kExitOk : kExitAudit, hist.csv(), log.str()};
}

inline Report dispatch(const RunConfig& c) {
  if (c.command == "solve") return cmd_solve(c);
  if (c.command == "mechanism") return cmd_mechanism(c);
  if (c.command == "simulate") return cmd_simulate(c);
  if (c.command == "audit") return cmd_audit(c);
  throw UsageError("unknown command '" + c.command + "'");
}

// Runs one command, writes its output to config.out_path (or `out`) and the
// log plus any error to `err`. Returns the process exit code.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Report report;
  try {
    report = dispatch(c);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  if (c.out_path.empty()) {
    out << report.output;
  } else {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << c.out_path << "\n";
      return kExitUsage;
    }
    f << report.output;
  }
  err << report.log;
  return report.status;
}

}  // namespace adauction

#endif  // ADAUCTION_COMMANDS_HPP_
