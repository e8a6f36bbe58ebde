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

#ifndef LEAKLAB_ATTACKS_H_
#define LEAKLAB_ATTACKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leaklab/bounds.h"
#include "leaklab/covering.h"
#include "leaklab/oracle.h"
#include "leaklab/space.h"

namespace leaklab {

// Per-coordinate knowledge; nullopt marks an unknown coordinate.
class PartialTemplate {
 public:
  PartialTemplate() = default;
  explicit PartialTemplate(std::size_t n) : coords_(n) {}

  std::size_t size() const { return coords_.size(); }
  const std::optional<std::uint8_t>& operator[](std::size_t i) const {
    return coords_[i];
  }
  void Set(std::size_t i, std::uint8_t value) { coords_[i] = value; }
  bool known(std::size_t i) const { return coords_[i].has_value(); }
  std::size_t KnownCount() const;
  std::size_t UnknownCount() const { return size() - KnownCount(); }
  // '?' for unknown coordinates.
  std::string ToString() const;

  friend bool operator==(const PartialTemplate&, const PartialTemplate&) = default;

 private:
  std::vector<std::optional<std::uint8_t>> coords_;
};

struct AttackOutcome {
  Template recovered;
  std::optional<PartialTemplate> partial;  // passive collectors only
  std::uint64_t queries_used = 0;
  std::uint64_t sessions_used = 0;
  // Claims made by the attack; the harness verifies them through the seal.
  bool exact_recovery = false;
  bool within_ball = false;
};

enum class AttackId {
  kBelowDistance,
  kBelowPositions,
  kBelowPositionsValues,
  kMinimalBinary,
  kMinimalBinaryGreedy,
  kBothDistance,
  kBothPositions,
  kBothPositionsValues,
  kAccumulation,
  kFaultControlled,
};

std::string_view AttackName(AttackId id);
AttackId ParseAttack(std::string_view name);
std::vector<AttackId> AllAttacks();
// The exact leakage mode an attack is built for.
LeakageMode RequiredMode(AttackId id);
Theorem AttackTheorem(AttackId id);
bool IsPassive(AttackId id);

// Fixes the last e coordinates to 0 and enumerates the first n-e in
// lexicographic order until a query is accepted: at most q^(n-e) queries.
SearchResult ExhaustiveAcceptSearch(Oracle& oracle);

AttackOutcome AttackBelowDistance(Oracle& oracle);
AttackOutcome AttackBelowPositions(Oracle& oracle);
// q = 2 runs the positions attack: both leaks carry the same information.
AttackOutcome AttackBelowPositionsValues(Oracle& oracle);

struct CenterSearchResult {
  Template center;
  std::uint64_t queries = 0;
};

// Binary center search from an accepted point, accept bit only.
// Queries y0 once to confirm acceptance (UsageError if rejected).
CenterSearchResult CenterSearchBinary(Oracle& oracle, const Template& y0);
// Same, starting from a search whose accepted point is already known.
CenterSearchResult CenterSearchBinary(Oracle& oracle, const SearchResult& start);

enum class MinimalStrategy { kCoordinateFixing, kGreedyCover };

AttackOutcome AttackMinimalBinary(Oracle& oracle, MinimalStrategy strategy,
                                  const CoverGuards& guards = {});
AttackOutcome AttackBothDistance(Oracle& oracle);
AttackOutcome AttackBothPositions(Oracle& oracle);
AttackOutcome AttackBothPositionsValues(Oracle& oracle);

}  // namespace leaklab

#endif  // LEAKLAB_ATTACKS_H_
