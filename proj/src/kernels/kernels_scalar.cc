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

#include <cstddef>
#include <cstdint>

#include "leaklab/kernels.h"

namespace leaklab::kernels::detail {
namespace {

int HammingScalar(const std::uint8_t* a, const std::uint8_t* b,
                  std::size_t n) {
  int d = 0;
  for (std::size_t i = 0; i < n; ++i) d += a[i] != b[i];
  return d;
}

void DistancesScalar(const std::uint8_t* columns, std::size_t stride,
                     std::size_t n, std::size_t count,
                     const std::uint8_t* center, std::uint8_t* out) {
  for (std::size_t k = 0; k < count; ++k) out[k] = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint8_t* col = columns + j * stride;
    const std::uint8_t c = center[j];
    for (std::size_t k = 0; k < count; ++k) out[k] += col[k] != c;
  }
}

std::size_t CountWithinScalar(const std::uint8_t* columns, std::size_t stride,
                              std::size_t n, std::size_t count,
                              const std::uint8_t* center, int radius,
                              const std::uint8_t* active) {
  std::size_t hits = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (active != nullptr && active[k] == 0) continue;
    int d = 0;
    for (std::size_t j = 0; j < n && d <= radius; ++j) {
      d += columns[j * stride + k] != center[j];
    }
    hits += d <= radius;
  }
  return hits;
}

}  // namespace

const KernelTable kScalarTable = {Isa::kScalar, "scalar", &HammingScalar,
                                  &CountWithinScalar, &DistancesScalar};

}  // namespace leaklab::kernels::detail
