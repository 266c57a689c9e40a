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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "adauction/oracle.hpp"
#include "adauction/random.hpp"

namespace adauction {
namespace {

std::size_t count_matchings(std::size_t n, std::size_t m, std::size_t k) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(m, 0.5));
  return enumerate_matchings(make_instance(rows, k, Model::kMnl)).size();
}

TEST(EnumerateMatchings, Counts) {
  EXPECT_EQ(count_matchings(1, 1, 1), 2u);
  EXPECT_EQ(count_matchings(2, 2, 2), 7u);
  EXPECT_EQ(count_matchings(2, 2, 1), 5u);
  EXPECT_EQ(count_matchings(3, 3, 3), 34u);
}

TEST(EnumerateMatchings, EachMatchingOnceAndFeasible) {
  std::vector<std::vector<double>> rows(3, std::vector<double>(4, 0.3));
  const Instance inst = make_instance(rows, 2, Model::kCascade);
  std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen;
  for (const Allocation& x : enumerate_matchings(inst)) {
    EXPECT_NO_THROW(check_feasible(inst, x));
    EXPECT_TRUE(seen.insert({x.begin(), x.end()}).second);
  }
}

TEST(EnumerateMatchings, StartsWithEmptyMatching) {
  const auto all = enumerate_matchings(make_instance({{0.5, 0.5}}, 2, Model::kMnl));
  ASSERT_FALSE(all.empty());
  EXPECT_TRUE(all.front().empty());
}

TEST(EnumerateMatchings, SizeGuard) {
  std::vector<std::vector<double>> rows(6, std::vector<double>(6, 0.5));
  EXPECT_THROW(enumerate_matchings(make_instance(rows, 6, Model::kMnl)), SizeLimitExceeded);
}

TEST(BruteForceMnl, SmallCases) {
  const Instance lone = make_instance({{0.5}}, 1, Model::kMnl);
  EXPECT_NEAR(brute_force_wdp_mnl(lone, std::vector<double>{1}).objective, 0.5, 1e-15);
  const Instance two = make_instance({{0.8, 0.5}, {0.5, 0.2}}, 2, Model::kMnl);
  EXPECT_NEAR(brute_force_wdp_mnl(two, std::vector<double>{1, 1}).objective, 4.25 / 5.25, 1e-12);
  const WdpResult none = brute_force_wdp_mnl(two, std::vector<double>{0, -1});
  EXPECT_TRUE(none.allocation.empty());
  EXPECT_EQ(none.objective, 0.0);
}

TEST(BruteForceCascade, SmallCases) {
  const Instance lone = make_instance({{0.35}}, 1, Model::kCascade);
  EXPECT_NEAR(brute_force_wdp_cascade(lone, std::vector<double>{3}).welfare, 1.05, 1e-15);
  const Instance two = make_instance({{0.5, 0.0}, {0.0, 0.4}}, 2, Model::kCascade);
  const CascadeOptimum opt = brute_force_wdp_cascade(two, std::vector<double>{2, 1});
  EXPECT_NEAR(opt.welfare, 2 * 0.5 + 1 * 0.5 * 0.4, 1e-15);
  EXPECT_EQ(opt.best.permutation.order(), std::vector<std::size_t>({0, 1}));
}

TEST(BruteForceRestricted, SmallCases) {
  const Instance lone = make_instance({{0.35}}, 1, Model::kCascade);
  EXPECT_NEAR(brute_force_restricted(lone, std::vector<double>{3}).welfare, 1.05, 1e-15);
  const Instance heavy = make_instance({{0.8, 0.8}, {0.8, 0.8}}, 2, Model::kCascade);
  EXPECT_NEAR(brute_force_restricted(heavy, std::vector<double>{1, 1}).welfare, 1.0, 1e-15);
  EXPECT_EQ(brute_force_restricted(heavy, std::vector<double>{0, 0}).welfare, 0.0);
}

TEST(OracleProperties, ParanoidModeAgrees) {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_m = 5;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    EXPECT_NEAR(brute_force_wdp_cascade(inst, v).welfare,
                brute_force_wdp_cascade(inst, v, true).welfare, 1e-12);
  }
}

TEST(OracleProperties, InvariantUnderAdvertiserRelabeling) {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    RandomInstanceSpec spec;
    spec.model = trial % 2 == 0 ? Model::kMnl : Model::kCascade;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    std::vector<std::size_t> perm(inst.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    Instance moved = inst;
    std::vector<double> mv(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) {
      mv[perm[i]] = v[i];
      for (std::size_t j = 0; j < inst.m; ++j) moved.p(perm[i], j) = inst.p(i, j);
    }
    if (inst.model == Model::kMnl) {
      EXPECT_NEAR(brute_force_wdp_mnl(inst, v).objective, brute_force_wdp_mnl(moved, mv).objective,
                  1e-12);
    } else {
      EXPECT_NEAR(brute_force_wdp_cascade(inst, v).welfare,
                  brute_force_wdp_cascade(moved, mv).welfare, 1e-12);
      EXPECT_NEAR(brute_force_restricted(inst, v).welfare,
                  brute_force_restricted(moved, mv).welfare, 1e-12);
    }
  }
}

}  // namespace
}  // namespace adauction
