// Copyright 2026 The LeakLab Authors
//
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

#ifndef LEAKLAB_TESTS_TEST_ORACLES_H_
#define LEAKLAB_TESTS_TEST_ORACLES_H_

// Independent reference computations used by the tests. Nothing here calls
// into the library's combinatorics or kernels.

#include <cstdint>
#include <vector>

#include "leaklab/space.h"

namespace leaklab::testing {

// Every point of Z_q^n, lexicographic, coordinate 0 most significant.
inline std::vector<Template> AllPoints(int q, int n) {
  std::vector<Template> out;
  std::vector<std::uint8_t> digits(n, 0);
  while (true) {
    out.emplace_back(digits);
    int j = n - 1;
    while (j >= 0 && digits[j] == q - 1) digits[j--] = 0;
    if (j < 0) break;
    ++digits[j];
  }
  return out;
}

inline int NaiveDistance(const Template& a, const Template& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// |B| by counting the points within distance e of the all-zero vector.
inline std::uint64_t EnumeratedBallVolume(int q, int n, int e) {
  const Template zero(static_cast<std::size_t>(n));
  std::uint64_t count = 0;
  for (const Template& t : AllPoints(q, n)) count += NaiveDistance(t, zero) <= e;
  return count;
}

inline bool NaiveCovers(const std::vector<Template>& centers, int q, int n, int e) {
  for (const Template& t : AllPoints(q, n)) {
    bool hit = false;
    for (const Template& c : centers) {
      if (NaiveDistance(t, c) <= e) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

// Smallest k such that some k-subset of points covers the space. Only for
// spaces of a handful of points.
inline int BruteForceMinCover(int q, int n, int e) {
  const std::vector<Template> pts = AllPoints(q, n);
  const int total = static_cast<int>(pts.size());
  for (int k = 1; k <= total; ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<Template> centers;
      for (int i : idx) centers.push_back(pts[i]);
      if (NaiveCovers(centers, q, n, e)) return k;
      int i = k - 1;
      while (i >= 0 && idx[i] == total - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return total;
}

}  // namespace leaklab::testing

#endif  // LEAKLAB_TESTS_TEST_ORACLES_H_
