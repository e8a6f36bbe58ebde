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

// Compiled with -mavx2 -mpopcnt; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <cstdint>

#include "leaklab/kernels.h"

namespace leaklab::kernels::detail {
namespace {

constexpr std::size_t kLanes = 32;

int HammingAvx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  int equal = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const auto mask =
        static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    equal += std::popcount(mask);
  }
  int d = static_cast<int>(i) - equal;
  for (; i < n; ++i) d += a[i] != b[i];
  return d;
}

// Mismatch counts of 32 consecutive points starting at k.
inline __m256i BlockDistances(const std::uint8_t* columns, std::size_t stride,
                              std::size_t n, std::size_t k,
                              const std::uint8_t* center) {
  const __m256i one = _mm256_set1_epi8(1);
  __m256i acc = _mm256_setzero_si256();
  for (std::size_t j = 0; j < n; ++j) {
    const __m256i v = _mm256_loadu_si256(
        reinterpret_cast<const __m256i*>(columns + j * stride + k));
    const __m256i eq =
        _mm256_cmpeq_epi8(v, _mm256_set1_epi8(static_cast<char>(center[j])));
    acc = _mm256_add_epi8(acc, _mm256_andnot_si256(eq, one));
  }
  return acc;
}

void DistancesAvx2(const std::uint8_t* columns, std::size_t stride,
                   std::size_t n, std::size_t count,
                   const std::uint8_t* center, std::uint8_t* out) {
  std::size_t k = 0;
  for (; k + kLanes <= count; k += kLanes) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + k),
                        BlockDistances(columns, stride, n, k, center));
  }
  for (; k < count; ++k) {
    std::uint8_t d = 0;
    for (std::size_t j = 0; j < n; ++j) d += columns[j * stride + k] != center[j];
    out[k] = d;
  }
}

std::size_t CountWithinAvx2(const std::uint8_t* columns, std::size_t stride,
                            std::size_t n, std::size_t count,
                            const std::uint8_t* center, int radius,
                            const std::uint8_t* active) {
  if (radius < 0) return 0;
  const int clamped = radius > 255 ? 255 : radius;
  const __m256i limit = _mm256_set1_epi8(static_cast<char>(clamped));
  const __m256i zero = _mm256_setzero_si256();
  std::size_t hits = 0;
  std::size_t k = 0;
  for (; k + kLanes <= count; k += kLanes) {
    const __m256i d = BlockDistances(columns, stride, n, k, center);
    __m256i within = _mm256_cmpeq_epi8(_mm256_min_epu8(d, limit), d);
    if (active != nullptr) {
      const __m256i act =
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(active + k));
      within = _mm256_andnot_si256(_mm256_cmpeq_epi8(act, zero), within);
    }
    hits += std::popcount(static_cast<std::uint32_t>(_mm256_movemask_epi8(within)));
  }
  for (; k < count; ++k) {
    if (active != nullptr && active[k] == 0) continue;
    int d = 0;
    for (std::size_t j = 0; j < n; ++j) d += columns[j * stride + k] != center[j];
    hits += d <= radius;
  }
  return hits;
}

}  // namespace

const KernelTable kAvx2Table = {Isa::kAvx2, "avx2", &HammingAvx2,
                                &CountWithinAvx2, &DistancesAvx2};

}  // namespace leaklab::kernels::detail
