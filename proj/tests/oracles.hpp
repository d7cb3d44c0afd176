/* Copyright 2026 The IRRM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef IRRM_TESTS_ORACLES_HPP_
#define IRRM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "irrm/types.hpp"

// Brute-force reference implementations. They enumerate instead of
// recurring on shared subproblems, so they share no structure with the
// library code they check.
namespace irrm::oracle {

// Sum over all V^T paths whose collapse (merge repeats, drop blank) equals
// labels, of the product of per-frame posteriors.
inline double ctc_enumerate(const Matrix& probs, const std::vector<int>& labels,
                            int blank = 0) {
  const int T = static_cast<int>(probs.rows());
  const int V = static_cast<int>(probs.cols());
  std::vector<int> path(T, 0);
  double total = 0.0;
  while (true) {
    std::vector<int> collapsed;
    int prev = -1;
    for (int t = 0; t < T; ++t) {
      if (path[t] != prev && path[t] != blank) collapsed.push_back(path[t]);
      prev = path[t];
    }
    if (collapsed == labels) {
      double p = 1.0;
      for (int t = 0; t < T; ++t) p *= probs(t, path[t]);
      total += p;
    }
    int t = T - 1;
    while (t >= 0 && path[t] == V - 1) path[t--] = 0;
    if (t < 0) break;
    ++path[t];
  }
  return total;
}

// For every row, the sum of the k smallest squared distances to the other
// rows; all pairs are computed in full.
inline Vector knn_scores(const Matrix& windows, int k) {
  const int T = static_cast<int>(windows.rows());
  Matrix d2(T, T);
  for (int a = 0; a < T; ++a) {
    for (int b = 0; b < T; ++b) {
      double s = 0.0;
      for (int j = 0; j < windows.cols(); ++j) {
        const double diff = windows(b, j) - windows(a, j);
        s += diff * diff;
      }
      d2(a, b) = s;
    }
  }
  Vector out(T);
  for (int a = 0; a < T; ++a) {
    std::vector<double> others;
    for (int b = 0; b < T; ++b) {
      if (b != a) others.push_back(d2(a, b));
    }
    std::sort(others.begin(), others.end());
    const int kk = std::min<int>(k, static_cast<int>(others.size()));
    double s = 0.0;
    for (int i = 0; i < kk; ++i) s += others[i];
    out(a) = s;
  }
  return out;
}

// Minimum unit-cost edit distance by exploring every alignment, i.e. every
// interleaving of match/substitute, insert and delete moves.
inline int edit_distance_exhaustive(const std::vector<int>& ref,
                                    const std::vector<int>& hyp) {
  int best = std::numeric_limits<int>::max();
  std::function<void(std::size_t, std::size_t, int)> walk =
      [&](std::size_t i, std::size_t j, int cost) {
        if (cost >= best) return;
        if (i == ref.size() && j == hyp.size()) {
          best = cost;
          return;
        }
        if (i < ref.size() && j < hyp.size()) {
          walk(i + 1, j + 1, cost + (ref[i] == hyp[j] ? 0 : 1));
        }
        if (j < hyp.size()) walk(i, j + 1, cost + 1);
        if (i < ref.size()) walk(i + 1, j, cost + 1);
      };
  walk(0, 0, 0);
  return best;
}

// Textbook two-row Levenshtein recurrence.
inline int edit_distance_dp(const std::vector<int>& ref,
                            const std::vector<int>& hyp) {
  std::vector<int> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

}  // namespace irrm::oracle

#endif  // IRRM_TESTS_ORACLES_HPP_
