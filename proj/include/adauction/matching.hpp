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

#ifndef ADAUCTION_MATCHING_HPP_
#define ADAUCTION_MATCHING_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "adauction/core.hpp"

namespace adauction {

struct WeightedMatching {
  Allocation allocation;
  double weight = 0.0;
};

// Maximum-weight bipartite matching with at most `cap` edges.
//
// Successive longest augmenting paths: after k augmentations the matching is
// a max-weight matching among those with k edges, and the marginal gain is
// non-increasing in k, so we stop at `cap` or at the first non-positive gain.
// Entries of `weights` that are <= 0 are treated as missing edges.
inline WeightedMatching max_weight_matching(const Matrix& weights, std::size_t cap) {
  const std::size_t n = weights.rows();
  const std::size_t m = weights.cols();
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> match_left(n, kFree);   // advertiser -> position
  std::vector<std::size_t> match_right(m, kFree);  // position -> advertiser

  for (std::size_t round = 0; round < cap; ++round) {
    // Longest-path labels over the residual graph (Bellman-Ford). Left nodes
    // are 0..n-1, right nodes n..n+m-1; forward edges are unmatched pairs
    // with gain +w, backward edges are matched pairs with gain -w.
    std::vector<double> dist(n + m, kNone);
    std::vector<std::size_t> parent(n + m, kFree);
    for (std::size_t i = 0; i < n; ++i) {
      if (match_left[i] == kFree) dist[i] = 0.0;
    }
    for (std::size_t pass = 0; pass < n + m; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (dist[i] == kNone) continue;
        for (std::size_t j = 0; j < m; ++j) {
          const double w = weights(i, j);
          if (!(w > 0.0) || match_left[i] == j) continue;
          if (dist[i] + w > dist[n + j] + 1e-15) {
            dist[n + j] = dist[i] + w;
            parent[n + j] = i;
            changed = true;
          }
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t i = match_right[j];
        if (i == kFree || dist[n + j] == kNone) continue;
        const double cand = dist[n + j] - weights(i, j);
        if (cand > dist[i] + 1e-15) {
          dist[i] = cand;
          parent[i] = n + j;
          changed = true;
        }
      }
      if (!changed) break;
    }

    std::size_t best = kFree;
    for (std::size_t j = 0; j < m; ++j) {
      if (match_right[j] != kFree || dist[n + j] == kNone) continue;
      if (best == kFree || dist[n + j] > dist[n + best]) best = j;
    }
    if (best == kFree || !(dist[n + best] > 1e-15)) break;

    // Walk back: right node <- left node <- right node ... <- free left node.
    std::size_t right = best;
    while (true) {
      const std::size_t left = parent[n + right];
      const std::size_t prev_right = match_left[left];
      match_left[left] = right;
      match_right[right] = left;
      if (parent[left] == kFree) break;
      right = prev_right;
    }
  }

  WeightedMatching out;
  for (std::size_t i = 0; i < n; ++i) {
    if (match_left[i] == kFree) continue;
    out.allocation.assign(i, match_left[i]);
    out.weight += weights(i, match_left[i]);
  }
  return out;
}

}  // namespace adauction

#endif  // ADAUCTION_MATCHING_HPP_
