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

#ifndef LEAKLAB_ACCUMULATION_H_
#define LEAKLAB_ACCUMULATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leaklab/attacks.h"
#include "leaklab/oracle.h"
#include "leaklab/rng.h"

namespace leaklab {

// Value of x_i implied by one leaked error x_i - y_i, if unambiguous. Only
// the extreme errors pin the coordinate: q-1 means x_i = q-1 and -(q-1)
// means x_i = 0. For q = 2 every error is extreme.
std::optional<std::uint8_t> ResolveError(int q, int error_value);

// Honest-but-curious server state: what the observed sessions have revealed.
class Accumulator {
 public:
  explicit Accumulator(const SpaceParams& params);

  void Ingest(const Observation& observation);
  const PartialTemplate& partial() const { return partial_; }
  // Coordinates that appeared in at least one observation.
  bool Observed(int i) const { return observed_[i] != 0; }
  bool AllObserved(std::span<const int> target) const;
  std::uint64_t sessions() const { return sessions_; }

 private:
  SpaceParams params_;
  PartialTemplate partial_;
  std::vector<char> observed_;
  std::uint64_t sessions_ = 0;
};

// Passive attack: consume genuine sessions until every target coordinate has
// leaked once. Requires q = 2 and a (below, positions+values) oracle. The
// default target is every variable coordinate of the client model; a target
// coordinate with error probability 0 is a UsageError.
AttackOutcome AccumulationCollect(Oracle& oracle, const ClientModel& client,
                                  Rng& rng,
                                  std::optional<std::vector<int>> target = std::nullopt,
                                  std::uint64_t max_sessions = 100'000'000);

// Fault-injection variant: the attacker corrupts e fresh coordinates per
// session and recovers x in exactly ceil(n / e) sessions.
AttackOutcome FaultControlledCollect(Oracle& oracle);

}  // namespace leaklab

#endif  // LEAKLAB_ACCUMULATION_H_
