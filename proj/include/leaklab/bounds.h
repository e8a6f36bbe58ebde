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

#ifndef LEAKLAB_BOUNDS_H_
#define LEAKLAB_BOUNDS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "leaklab/oracle.h"
#include "leaklab/space.h"

namespace leaklab {

// Worst-case query bounds with explicit constants, one per attack scenario.
enum class Theorem {
  kBelowDistance = 1,         // q^(n-e) + (q-1) e
  kBelowPositions = 2,        // q^(n-e) + q - 1
  kBelowPositionsValues = 3,  // q^(n-e) + 1
  kMinimalBinary = 4,         // 2^(n-e) + n + 2e + 1, q = 2 only
  kBothDistance = 5,          // n (q-1) + 1
  kBothPositions = 6,         // q - 1
  kBothPositionsValues = 7,   // 1
  kAccumulation = 8,          // expectation bracket, see AccumulationBracket
};

std::string_view TheoremLabel(Theorem theorem);

// The theorem whose attack applies to a leakage mode.
Theorem TheoremForMode(LeakageMode mode);

// Explicit finite-n query bound; nullopt where the theorem does not apply
// (kMinimalBinary with q != 2, kAccumulation).
std::optional<BigInt> QueryBound(Theorem theorem, const SpaceParams& params);

// Minimal-leakage bound when the search phase walks a greedy cover instead of
// the coordinate-fixing grid: floor(q^n H(n) / |B|) + n + 2e + 1.
std::optional<BigInt> GreedyMinimalBound(const SpaceParams& params);

// ceil(n / e) sessions for the fault-controlled collector; nullopt if e = 0.
std::optional<int> FaultSessions(const SpaceParams& params);

// Bracket on the expected number of sessions for the weighted coupon
// collector whose rarest coordinate has probability p_min:
// 1/p_min <= E <= H(n)/p_min <= (ln n + 1)/p_min.
struct SessionBracket {
  double lower = 0.0;
  double upper_harmonic = 0.0;
  double upper_ln = 0.0;
};
SessionBracket AccumulationBracket(int n, double p_min);

struct TheoremBound {
  Theorem theorem;
  std::optional<BigInt> queries;
};

struct BoundReport {
  SpaceParams params;
  LeakageMode mode;
  BigInt ball_volume;
  BigInt naive_search;                  // q^(n-e)
  BigRational greedy_cover_bound;       // q^n H(n) / |B|
  double greedy_cover_ln_bound = 0.0;   // q^n (ln n + 1) / |B|
  // q^(n (1 - h_q(e/n))), no o(n) correction; only when e/n <= 1 - 1/q.
  std::optional<double> entropy_exponent;
  std::optional<double> entropy_approx;
  Theorem selected = Theorem::kMinimalBinary;
  std::optional<BigInt> selected_bound;
  std::vector<TheoremBound> per_theorem;
  std::optional<int> fault_sessions;
};

BoundReport TheoreticalBounds(const SpaceParams& params, LeakageMode mode);

nlohmann::ordered_json ToJson(const BoundReport& report);

}  // namespace leaklab

#endif  // LEAKLAB_BOUNDS_H_
