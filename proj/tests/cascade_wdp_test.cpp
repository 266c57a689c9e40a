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

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "adauction/cascade_wdp.hpp"
#include "adauction/oracle.hpp"
#include "adauction/random.hpp"
#include "test_support.hpp"

namespace adauction {
namespace {

using testing::random_matching;

TEST(OptimalPermutation, SortsByMatchedValue) {
  const Permutation s = optimal_permutation(Allocation({{0, 1}, {1, 0}}), std::vector<double>{3, 5});
  EXPECT_EQ(s.rank_of(0), 1u);
  EXPECT_EQ(s.rank_of(1), 2u);
}

TEST(OptimalPermutation, TiesGoToLowerAdvertiser) {
  const Permutation s = optimal_permutation(Allocation({{0, 1}, {1, 0}}), std::vector<double>{1, 1});
  EXPECT_EQ(s.rank_of(1), 1u);
  EXPECT_EQ(s.rank_of(0), 2u);
}

TEST(RestrictedCtr, TruncatesAtUnitMass) {
  const Instance inst = make_instance({{0.8, 0.8}, {0.8, 0.8}}, 2, Model::kCascade);
  const std::vector<double> v = {1, 1};
  const Allocation x({{0, 0}, {1, 1}});
  const CtrVector r = restricted_ctr(inst, x, v);
  EXPECT_DOUBLE_EQ(r[0], 0.8);
  EXPECT_NEAR(r[1], 0.2, 1e-15);
  EXPECT_EQ(discounted_advertiser(inst, x, v), 1u);
  EXPECT_EQ(budgeted_ctr(inst, x), CtrVector({0.8, 0.8}));
  EXPECT_DOUBLE_EQ(base_welfare(inst, v, x), 1.6);
}

TEST(RestrictedCtr, SingleAdIsUntouched) {
  const Instance inst = make_instance({{0.35}}, 1, Model::kCascade);
  EXPECT_DOUBLE_EQ(restricted_ctr(inst, Allocation({{0, 0}}), std::vector<double>{2})[0], 0.35);
  EXPECT_EQ(budgeted_ctr(inst, Allocation{}), CtrVector({0.0}));
}

TEST(ZeroSuppress, DropsFullyTruncatedTail) {
  const Instance inst = make_instance({{0.7, 0, 0}, {0, 0.3, 0}, {0, 0, 0.5}}, 3, Model::kCascade);
  const std::vector<double> v = {3, 2, 1};
  const Allocation x({{0, 0}, {1, 1}, {2, 2}});
  EXPECT_EQ(restricted_ctr(inst, x, v)[2], 0.0);
  const Allocation y = zero_suppress(inst, x, v);
  EXPECT_EQ(y, Allocation({{0, 0}, {1, 1}}));
  EXPECT_EQ(restricted_welfare(inst, v, x), restricted_welfare(inst, v, y));
}

TEST(ZeroSuppress, LeavesLightAllocationsAlone) {
  const Instance inst = make_instance({{0.2, 0.1}, {0.3, 0.4}}, 2, Model::kCascade);
  const std::vector<double> v = {1, 2};
  const Allocation x({{0, 0}, {1, 1}});
  EXPECT_EQ(zero_suppress(inst, x, v), x);
}

TEST(ExactBudgetedMatching, Basics) {
  const Instance one = make_instance({{0.9}}, 1, Model::kCascade);
  const std::vector<double> v1 = {1};
  EXPECT_EQ(exact_budgeted_matching(one, v1, one.p, 1.0, 1), Allocation({{0, 0}}));

  const Instance two = make_instance({{0.6}, {0.7}}, 1, Model::kCascade);
  const std::vector<double> v2 = {1, 1};
  EXPECT_EQ(exact_budgeted_matching(two, v2, two.p, 1.0, 1), Allocation({{1, 0}}));
}

TEST(ExactBudgetedMatching, RespectsBudgetAndSizeGuard) {
  const Instance inst = make_instance({{0.6, 0.6}, {0.6, 0.6}}, 2, Model::kCascade);
  const std::vector<double> v = {1, 2};
  const Allocation x = exact_budgeted_matching(inst, v, inst.p, 1.0, 2);
  EXPECT_EQ(x.size(), 1u);
  EXPECT_TRUE(x.position_of(1).has_value());

  RandomInstanceSpec spec;
  spec.model = Model::kCascade;
  spec.min_n = spec.max_n = 5;
  spec.min_m = spec.max_m = 5;
  spec.min_p = 0.1;
  Rng rng(5);
  const Instance big = random_instance(rng, spec);
  EXPECT_THROW(exact_budgeted_matching(big, std::vector<double>(5, 1.0), big.p, 1.0, 5),
               SizeLimitExceeded);
}

TEST(ExactBudgetedMatching, AgreesWithEnumeration) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_n = 4;
    spec.max_m = 4;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    const Allocation x = exact_budgeted_matching(inst, v, inst.p, 1.0, inst.k);
    const RestrictedOptimum ref = brute_force_budgeted(inst, v, inst.p, 1.0, inst.k);
    double got = 0.0, spent = 0.0;
    for (const auto& [i, j] : x) {
      got += v[i] * inst.p(i, j);
      spent += inst.p(i, j);
    }
    EXPECT_LE(spent, 1.0 + kBudgetSlack);
    EXPECT_LE(x.size(), inst.k);
    EXPECT_NEAR(got, ref.welfare, 1e-9);
  }
}

TEST(DiscountGrid, IncludesEndpointOne) {
  const std::vector<double> g = discount_grid(0.25);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_DOUBLE_EQ(g.front(), 0.125);
  EXPECT_DOUBLE_EQ(g[7], 1.0);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  EXPECT_EQ(discount_grid(0.1).size(), 21u);
  EXPECT_THROW(discount_grid(0.0), InvalidArgument);
  EXPECT_THROW(discount_grid(1.0), InvalidArgument);
}

TEST(Algorithm1, RecoversTwoAdRestrictedOptimum) {
  const Instance inst = make_instance({{0.8, 0.8}, {0.8, 0.8}}, 2, Model::kCascade);
  const std::vector<double> v = {1, 1};
  const Allocation x = algorithm1_restricted(inst, v, 0.1);
  EXPECT_NEAR(restricted_welfare(inst, v, x), 1.0, 1e-12);
}

TEST(Algorithm1, LightInstanceIsSolvedExactly) {
  const Instance inst = make_instance({{0.2, 0.1}, {0.3, 0.25}, {0.1, 0.05}}, 2, Model::kCascade);
  const std::vector<double> v = {4, 2, 7};
  const Allocation x = algorithm1_restricted(inst, v, 0.25);
  EXPECT_NEAR(restricted_welfare(inst, v, x), brute_force_restricted(inst, v).welfare, 1e-12);
}

TEST(Algorithm1, BudgetedWelfareBelowRestrictedOnIntermediates) {
  Rng rng(42);
  std::size_t checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_n = 3;
    spec.max_m = 3;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    algorithm1_restricted(inst, v, 0.25, exact_budgeted_solver(),
                          [&](std::size_t, double, const Matrix& scaled, const Allocation& x) {
                            double spent = 0.0, w = 0.0;
                            for (const auto& [i, j] : x) {
                              spent += scaled(i, j);
                              w += v[i] * scaled(i, j);
                            }
                            if (spent > 1.0 + kBudgetSlack) return;
                            ++checked;
                            EXPECT_LE(w, restricted_welfare(inst, v, x) + 1e-9);
                          });
  }
  EXPECT_GT(checked, 0u);
}

TEST(Bucketize, ThresholdArithmetic) {
  EXPECT_EQ(bucket_count(1), 2u);
  EXPECT_EQ(bucket_count(2), 3u);
  EXPECT_EQ(bucket_count(3), 4u);
  EXPECT_EQ(bucket_count(4), 4u);
  const Instance inst = make_instance({{0.9, 0.3}, {0.2, 0.0}}, 2, Model::kCascade);
  const auto buckets = bucketize(inst);
  ASSERT_EQ(buckets.size(), 3u);
  ASSERT_EQ(buckets[0].edges.size(), 1u);
  EXPECT_EQ(buckets[0].edges[0].ctr, 0.9);
  ASSERT_EQ(buckets[1].edges.size(), 1u);
  EXPECT_EQ(buckets[1].edges[0].ctr, 0.3);
  ASSERT_EQ(buckets[2].edges.size(), 1u);
  EXPECT_EQ(buckets[2].edges[0].ctr, 0.2);
  EXPECT_EQ(buckets[0].cap, 2u);
  EXPECT_EQ(buckets[2].cap, 2u);
}

TEST(Bucketize, CertainClicksLandInFirstBucket) {
  const Instance inst = make_instance({{1.0, 1.0}, {1.0, 1.0}}, 1, Model::kCascade);
  const auto buckets = bucketize(inst);
  EXPECT_EQ(buckets[0].edges.size(), 4u);
  EXPECT_EQ(buckets[0].cap, 1u);
  for (std::size_t l = 1; l < buckets.size(); ++l) EXPECT_TRUE(buckets[l].edges.empty());
}

TEST(Bucketize, PartitionsPositiveEdges) {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_n = 6;
    spec.max_m = 8;
    spec.min_p = 0.0;
    spec.max_p = 1.0;
    const Instance inst = random_instance(rng, spec);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const Bucket& b : bucketize(inst)) {
      const double hi = std::ldexp(1.0, -static_cast<int>(b.index - 1));
      for (const BucketEdge& e : b.edges) {
        EXPECT_TRUE(seen.emplace(e.advertiser, e.position).second);
        EXPECT_LE(e.ctr, hi);
        if (b.index < bucket_count(inst.m)) {
          EXPECT_GT(e.ctr, hi / 2.0);
        }
      }
    }
    std::size_t positive = 0;
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (std::size_t j = 0; j < inst.m; ++j) positive += inst.p(i, j) > 0.0;
    }
    EXPECT_EQ(seen.size(), positive);
  }
}

TEST(GreedyBucket, HandTraces) {
  Bucket b;
  b.cap = 2;
  b.edges = {{0, 0, 0.9}, {1, 0, 0.6}};
  const std::vector<double> v = {1, 1};
  const AugmentedAllocation chi = greedy_bucket(b, v);
  EXPECT_EQ(chi.allocation, Allocation({{0, 0}}));
  EXPECT_EQ(chi.permutation.rank_of(0), 1u);

  EXPECT_TRUE(greedy_bucket(Bucket{}, v).allocation.empty());

  Bucket capped;
  capped.cap = 1;
  capped.edges = {{0, 0, 0.6}, {1, 1, 0.7}};
  EXPECT_EQ(greedy_bucket(capped, v).allocation, Allocation({{1, 1}}));
}

TEST(GreedyBucket, RanksInInsertionOrder) {
  Bucket b;
  b.cap = 2;
  // heavier edge on the later position is inserted first
  b.edges = {{0, 0, 0.5}, {1, 1, 0.5}};
  const AugmentedAllocation chi = greedy_bucket(b, std::vector<double>{1, 3});
  EXPECT_EQ(chi.permutation.order(), std::vector<std::size_t>({1, 0}));
}

TEST(CombinedCascade, ExpectationAveragesBuckets) {
  const Instance inst = make_instance({{0.9, 0.0}, {0.0, 0.3}, {0.2, 0.0}}, 2, Model::kCascade);
  const std::vector<double> v = {1, 1, 1};
  const CtrVector pi = combined_expected_ctr(inst, v);
  EXPECT_NEAR(welfare(v, pi), (0.9 + 0.3 + 0.2) / 3.0, 1e-12);

  Rng rng(44);
  std::set<std::size_t> winners;
  for (int t = 0; t < 200; ++t) {
    const AugmentedAllocation chi = combined_cascade_solver(inst, v, rng);
    ASSERT_EQ(chi.allocation.size(), 1u);
    winners.insert(chi.allocation.begin()->first);
  }
  EXPECT_EQ(winners.size(), 3u);
}

TEST(CombinedCascade, SinglePopulatedBucket) {
  const Instance inst = make_instance({{0.9}}, 1, Model::kCascade);
  const std::vector<double> v = {2};
  const auto candidates = greedy_bucket_candidates(inst, v);
  ASSERT_EQ(candidates.size(), 2u);
  EXPECT_EQ(candidates[0].allocation, Allocation({{0, 0}}));
  EXPECT_TRUE(candidates[1].allocation.empty());
}

TEST(CascadeProperties, SandwichAndPrefixChain) {
  Rng rng(45);
  for (int trial = 0; trial < 300; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_n = 6;
    spec.max_m = 6;
    spec.max_p = 1.0;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    const Allocation x = random_matching(inst, rng);
    const double w = cascade_welfare(inst, v, x);
    const double wr = restricted_welfare(inst, v, x);
    EXPECT_LE(w, wr + 1e-9);
    EXPECT_LE(wr, 4.0 * w + 1e-9);
  }
}

TEST(CascadeProperties, BudgetedEqualsRestrictedWhenLight) {
  Rng rng(46);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_p = 0.5;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    const Allocation x = random_matching(inst, rng);
    const CtrVector b = budgeted_ctr(inst, x);
    double total = 0.0;
    for (double q : b) total += q;
    if (total > 1.0) continue;
    ++checked;
    const CtrVector r = restricted_ctr(inst, x, v);
    for (std::size_t i = 0; i < inst.n; ++i) EXPECT_NEAR(r[i], b[i], 1e-15);
  }
  EXPECT_GT(checked, 50);
}

TEST(CascadeProperties, ZeroSuppressPreservesRestrictedCtrs) {
  Rng rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_n = 6;
    spec.max_m = 6;
    spec.min_p = 0.3;
    spec.max_p = 1.0;
    const Instance inst = random_instance(rng, spec);
    const std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    const Allocation x = random_matching(inst, rng);
    const Allocation y = zero_suppress(inst, x, v);
    EXPECT_EQ(restricted_ctr(inst, x, v), restricted_ctr(inst, y, v));
    EXPECT_LE(discounted_advertiser(inst, x, v).has_value() ? 1 : 0, 1);
  }
}

TEST(CascadeProperties, GreedyBucketsAreMonotone) {
  Rng rng(48);
  for (int trial = 0; trial < 60; ++trial) {
    RandomInstanceSpec spec;
    spec.model = Model::kCascade;
    spec.max_n = 5;
    spec.max_m = 6;
    const Instance inst = random_instance(rng, spec);
    std::vector<double> v = random_values(rng, inst.n, 0.0, 10.0);
    for (std::size_t i = 0; i < inst.n; ++i) {
      const double keep = v[i];
      std::vector<double> prev;
      for (int k = 1; k <= 16; ++k) {
        v[i] = 10.0 * k / 16.0;
        std::vector<double> now;
        for (const auto& chi : greedy_bucket_candidates(inst, v)) now.push_back(cascade_ctr(inst, chi)[i]);
        for (std::size_t b = 0; b < prev.size(); ++b) EXPECT_GE(now[b], prev[b] - 1e-9);
        prev = now;
      }
      v[i] = keep;
    }
  }
}

}  // namespace
}  // namespace adauction
