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

#include <atomic>
#include <string>

#include "leaklab/errors.h"
#include "leaklab/kernels.h"

namespace leaklab::kernels {
namespace {

const KernelTable* Best() {
#if defined(__x86_64__) || defined(_M_X64)
  if (IsaAvailable(Isa::kAvx2)) return &detail::kAvx2Table;
#endif
#if defined(__aarch64__)
  return &detail::kNeonTable;
#endif
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& Override() {
  static std::atomic<const KernelTable*> table{nullptr};
  return table;
}

}  // namespace

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& Table(Isa isa) {
  if (!IsaAvailable(isa)) {
    throw UsageError("kernel ISA not available on this CPU/build");
  }
  switch (isa) {
    case Isa::kScalar:
      return detail::kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2:
      return detail::kAvx2Table;
#endif
#if defined(__aarch64__)
    case Isa::kNeon:
      return detail::kNeonTable;
#endif
    default:
      break;
  }
  throw UsageError("kernel ISA not available on this CPU/build");
}

const KernelTable& Active() {
  static const KernelTable* const best = Best();
  const KernelTable* forced = Override().load(std::memory_order_relaxed);
  return forced != nullptr ? *forced : *best;
}

void ForceIsa(Isa isa) { Override().store(&Table(isa)); }
void ResetIsa() { Override().store(nullptr); }

}  // namespace leaklab::kernels
