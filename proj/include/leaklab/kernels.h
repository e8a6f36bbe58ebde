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

#ifndef LEAKLAB_KERNELS_H_
#define LEAKLAB_KERNELS_H_

// Data-parallel inner loops with a scalar reference and SIMD variants chosen
// at runtime. Every variant must agree bit-for-bit with the scalar one.
//
// Column-major ("SoA") point blocks: coordinate j of point k lives at
// columns[j * stride + k], stride >= count. Distances are accumulated in
// bytes, so blocks are limited to n <= 255.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace leaklab::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  std::string_view name;
  // Number of positions where a and b differ.
  int (*hamming)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
  // Number of points k < count with active[k] != 0 and
  // d(point_k, center) <= radius. A null `active` means all points.
  std::size_t (*count_within)(const std::uint8_t* columns, std::size_t stride,
                              std::size_t n, std::size_t count,
                              const std::uint8_t* center, int radius,
                              const std::uint8_t* active);
  // out[k] = d(point_k, center).
  void (*distances)(const std::uint8_t* columns, std::size_t stride,
                    std::size_t n, std::size_t count,
                    const std::uint8_t* center, std::uint8_t* out);
};

bool IsaAvailable(Isa isa);
// Throws UsageError if the ISA is not available on this build/CPU.
const KernelTable& Table(Isa isa);
// Best available ISA unless overridden with ForceIsa().
const KernelTable& Active();
void ForceIsa(Isa isa);
void ResetIsa();

inline int Hamming(std::span<const std::uint8_t> a,
                   std::span<const std::uint8_t> b) {
  return Active().hamming(a.data(), b.data(), a.size());
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace leaklab::kernels

#endif  // LEAKLAB_KERNELS_H_
