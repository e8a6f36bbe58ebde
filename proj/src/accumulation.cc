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

#include "leaklab/accumulation.h"

#include <algorithm>
#include <string>

#include "leaklab/errors.h"

namespace leaklab {
namespace {

void RequirePassiveMode(const Oracle& oracle) {
  const LeakageMode need{LeakScope::kBelowOnly, LeakPayload::kPositionsValues};
  if (!(oracle.mode() == need)) {
    throw UsageError("passive collection requires leakage mode " + need.ToString() +
                     ", oracle has " + oracle.mode().ToString());
  }
  if (oracle.params().q != 2) {
    throw UsageError("passive collection is defined for q = 2 only");
  }
  if (oracle.params().epsilon < 1) {
    throw UsageError("passive collection needs epsilon >= 1");
  }
}

}  // namespace

std::optional<std::uint8_t> ResolveError(int q, int error_value) {
  if (error_value == q - 1) return static_cast<std::uint8_t>(q - 1);
  if (error_value == -(q - 1)) return std::uint8_t{0};
  return std::nullopt;
}

Accumulator::Accumulator(const SpaceParams& params)
    : params_(params),
      partial_(static_cast<std::size_t>(params.n)),
      observed_(static_cast<std::size_t>(params.n), 0) {
  params_.Validate();
}

void Accumulator::Ingest(const Observation& observation) {
  ++sessions_;
  for (const ErrorEntry& e : observation.errors) {
    if (e.position < 0 || e.position >= params_.n) {
      throw UsageError("observation position out of range");
    }
    if (e.value == 0 || e.value < -(params_.q - 1) || e.value > params_.q - 1) {
      throw UsageError("observation error value out of range");
    }
    observed_[e.position] = 1;
    if (auto x = ResolveError(params_.q, e.value)) partial_.Set(e.position, *x);
  }
}

bool Accumulator::AllObserved(std::span<const int> target) const {
  return std::all_of(target.begin(), target.end(),
                     [&](int i) { return observed_[i] != 0; });
}

AttackOutcome AccumulationCollect(Oracle& oracle, const ClientModel& client,
                                  Rng& rng, std::optional<std::vector<int>> target,
                                  std::uint64_t max_sessions) {
  RequirePassiveMode(oracle);
  const SpaceParams& p = oracle.params();
  client.Validate(p);
  std::vector<int> goal = target ? std::move(*target) : client.VariableCoordinates();
  for (int i : goal) {
    if (i < 0 || i >= p.n) throw UsageError("target coordinate out of range");
    if (client.error_probs[i] <= 0.0) {
      throw UsageError("target coordinate " + std::to_string(i) +
                       " never errs; collection cannot terminate");
    }
  }

  const std::uint64_t start = oracle.session_count();
  Accumulator acc(p);
  while (!acc.AllObserved(goal)) {
    if (acc.sessions() >= max_sessions) {
      throw InternalError("session budget exhausted before collection finished");
    }
    acc.Ingest(oracle.GenuineSession(client, rng));
  }

  AttackOutcome out;
  out.partial = acc.partial();
  out.sessions_used = oracle.session_count() - start;
  out.recovered = Template(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    out.recovered[i] = acc.partial().known(i)
                           ? *acc.partial()[i]
                           : static_cast<std::uint8_t>(rng.UniformInt(0, p.q - 1));
  }
  const std::size_t unknown = acc.partial().UnknownCount();
  out.exact_recovery = unknown == 0;
  out.within_ball = unknown <= static_cast<std::size_t>(p.epsilon);
  return out;
}

AttackOutcome FaultControlledCollect(Oracle& oracle) {
  RequirePassiveMode(oracle);
  const SpaceParams& p = oracle.params();
  const std::uint64_t start = oracle.session_count();
  Accumulator acc(p);
  std::vector<int> batch;
  for (int first = 0; first < p.n; first += p.epsilon) {
    batch.clear();
    for (int i = first; i < std::min(p.n, first + p.epsilon); ++i) batch.push_back(i);
    acc.Ingest(oracle.FaultedSession(batch));
  }
  AttackOutcome out;
  out.partial = acc.partial();
  out.sessions_used = oracle.session_count() - start;
  out.recovered = Template(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    if (!acc.partial().known(i)) throw InternalError("faulted coordinate not resolved");
    out.recovered[i] = *acc.partial()[i];
  }
  out.exact_recovery = true;
  out.within_ball = true;
  return out;
}

}  // namespace leaklab
