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

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>
#include <cstdint>

#include "leaklab/kernels.h"

namespace leaklab::kernels::detail {
namespace {

constexpr std::size_t kLanes = 16;

int HammingNeon(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  const uint8x16_t one = vdupq_n_u8(1);
  std::size_t i = 0;
  int d = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const uint8x16_t eq = vceqq_u8(vld1q_u8(a + i), vld1q_u8(b + i));
    d += vaddvq_u8(vandq_u8(vmvnq_u8(eq), one));
  }
  for (; i < n; ++i) d += a[i] != b[i];
  return d;
}

inline uint8x16_t BlockDistances(const std::uint8_t* columns,
                                 std::size_t stride, std::size_t n,
                                 std::size_t k, const std::uint8_t* center) {
  const uint8x16_t one = vdupq_n_u8(1);
  uint8x16_t acc = vdupq_n_u8(0);
  for (std::size_t j = 0; j < n; ++j) {
    const uint8x16_t eq =
        vceqq_u8(vld1q_u8(columns + j * stride + k), vdupq_n_u8(center[j]));
    acc = vaddq_u8(acc, vandq_u8(vmvnq_u8(eq), one));
  }
  return acc;
}

void DistancesNeon(const std::uint8_t* columns, std::size_t stride,
                   std::size_t n, std::size_t count,
                   const std::uint8_t* center, std::uint8_t* out) {
  std::size_t k = 0;
  for (; k + kLanes <= count; k += kLanes) {
    vst1q_u8(out + k, BlockDistances(columns, stride, n, k, center));
  }
  for (; k < count; ++k) {
    std::uint8_t d = 0;
    for (std::size_t j = 0; j < n; ++j) d += columns[j * stride + k] != center[j];
    out[k] = d;
  }
}

std::size_t CountWithinNeon(const std::uint8_t* columns, std::size_t stride,
                            std::size_t n, std::size_t count,
                            const std::uint8_t* center, int radius,
                            const std::uint8_t* active) {
  if (radius < 0) return 0;
  const uint8x16_t limit = vdupq_n_u8(static_cast<std::uint8_t>(radius > 255 ? 255 : radius));
  const uint8x16_t one = vdupq_n_u8(1);
  std::size_t hits = 0;
  std::size_t k = 0;
  for (; k + kLanes <= count; k += kLanes) {
    uint8x16_t within = vcleq_u8(BlockDistances(columns, stride, n, k, center), limit);
    if (active != nullptr) {
      const uint8x16_t act = vld1q_u8(active + k);
      within = vandq_u8(within, vtstq_u8(act, act));
    }
    hits += vaddvq_u8(vandq_u8(within, one));
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

const KernelTable kNeonTable = {Isa::kNeon, "neon", &HammingNeon,
                                &CountWithinNeon, &DistancesNeon};

}  // namespace leaklab::kernels::detail

#endif  // __aarch64__
