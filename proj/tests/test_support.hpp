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

// Generators shared by the unit suites and the acceptance binary.

#ifndef ADAUCTION_TESTS_TEST_SUPPORT_HPP_
#define ADAUCTION_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <numeric>
#include <vector>

#include "adauction/cascade_wdp.hpp"
#include "adauction/core.hpp"
#include "adauction/random.hpp"

namespace adauction::testing {

// Uniformly shuffled advertisers dropped onto positions with probability
// 2/3 each, up to K pairs.
inline Allocation random_matching(const Instance& inst, Rng& rng) {
  std::vector<std::size_t> ads(inst.n);
  std::iota(ads.begin(), ads.end(), 0);
  for (std::size_t i = inst.n; i > 1; --i) std::swap(ads[i - 1], ads[uniform_index(rng, i)]);
  Allocation x;
  for (std::size_t j = 0, a = 0; j < inst.m && a < inst.n && x.size() < inst.k; ++j) {
    if (uniform_index(rng, 3) != 0) x.assign(ads[a++], j);
  }
  return x;
}

// Cascade instance whose every CTR falls in bucket `level` (1-based), so the
// bucketized greedy sees a single populated bucket.
inline Instance single_bucket_instance(Rng& rng, std::size_t max_n, std::size_t max_m,
                                       std::size_t* level_out = nullptr) {
  Instance inst;
  inst.model = Model::kCascade;
  inst.n = uniform_int(rng, 1, max_n);
  inst.m = uniform_int(rng, 1, max_m);
  inst.k = uniform_int(rng, 1, inst.m);
  const std::size_t levels = bucket_count(inst.m);
  const std::size_t level = uniform_int(rng, 1, levels);
  const double hi = std::ldexp(1.0, -static_cast<int>(level - 1));
  const double lo = level < levels ? hi / 2.0 : 0.0;
  inst.p = Matrix(inst.n, inst.m);
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.m; ++j) inst.p(i, j) = uniform_real(rng, lo, hi);
  }
  require_valid(inst);
  if (level_out) *level_out = level;
  return inst;
}

// Copy of `inst` keeping only the edges of one bucket.
inline Instance bucket_subinstance(const Instance& inst, const Bucket& bucket) {
  Instance out = inst;
  out.p = Matrix(inst.n, inst.m);
  for (const BucketEdge& e : bucket.edges) out.p(e.advertiser, e.position) = e.ctr;
  return out;
}

}  // namespace adauction::testing

#endif  // ADAUCTION_TESTS_TEST_SUPPORT_HPP_
