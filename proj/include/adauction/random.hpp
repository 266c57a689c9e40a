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

// Seeded randomness with bit-reproducible output across standard libraries
// (the <random> distributions are implementation-defined, so we only use the
// raw 64-bit engine), plus random instance generators for property suites.

#ifndef ADAUCTION_RANDOM_HPP_
#define ADAUCTION_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "adauction/core.hpp"

namespace adauction {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream seed for item `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform on [0, 1) with 53 random bits.
template <class URBG>
double uniform01(URBG& rng) {
  static_assert(URBG::max() - URBG::min() == UINT64_MAX, "needs a 64-bit engine");
  return static_cast<double>((rng() - URBG::min()) >> 11) * 0x1.0p-53;
}

// Uniform on (lo, hi].
template <class URBG>
double uniform_real(URBG& rng, double lo, double hi) {
  return lo + (hi - lo) * (1.0 - uniform01(rng));
}

// Uniform on {0, ..., n - 1}, unbiased by rejection.
template <class URBG>
std::size_t uniform_index(URBG& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t draw;
  do {
    draw = rng() - URBG::min();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % range);
}

template <class URBG>
std::size_t uniform_int(URBG& rng, std::size_t lo, std::size_t hi) {
  return lo + uniform_index(rng, hi - lo + 1);
}

struct RandomInstanceSpec {
  std::size_t min_n = 1, max_n = 4;
  std::size_t min_m = 1, max_m = 4;
  double min_p = 0.0, max_p = 0.95;  // p drawn from (min_p, max_p]
  Model model = Model::kMnl;
  bool full_capacity = false;  // K = m instead of uniform in [1, m]
};

template <class URBG>
Instance random_instance(URBG& rng, const RandomInstanceSpec& spec) {
  Instance inst;
  inst.n = uniform_int(rng, spec.min_n, spec.max_n);
  inst.m = uniform_int(rng, spec.min_m, spec.max_m);
  inst.k = spec.full_capacity ? inst.m : uniform_int(rng, 1, inst.m);
  inst.model = spec.model;
  inst.p = Matrix(inst.n, inst.m);
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) {
      inst.p(i, j) = uniform_real(rng, spec.min_p, spec.max_p);
    }
  }
  require_valid(inst);
  return inst;
}

template <class URBG>
std::vector<double> random_values(URBG& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform_real(rng, lo, hi);
  return v;
}

}  // namespace adauction

#endif  // ADAUCTION_RANDOM_HPP_
