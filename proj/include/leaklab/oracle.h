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

#ifndef LEAKLAB_ORACLE_H_
#define LEAKLAB_ORACLE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "leaklab/rng.h"
#include "leaklab/space.h"

namespace leaklab {

enum class LeakScope { kBelowOnly, kAlways };
enum class LeakPayload { kNone, kDistance, kPositions, kPositionsValues };

// What the matcher reveals beyond the accept bit, and when.
// (BelowOnly, None) is the same as minimal leakage and is normalized to
// (Always, None).
class LeakageMode {
 public:
  constexpr LeakageMode() = default;
  constexpr LeakageMode(LeakScope scope, LeakPayload payload)
      : scope_(payload == LeakPayload::kNone ? LeakScope::kAlways : scope),
        payload_(payload) {}

  constexpr LeakScope scope() const { return scope_; }
  constexpr LeakPayload payload() const { return payload_; }

  static LeakageMode Parse(std::string_view scope, std::string_view payload);
  std::string ToString() const;

  friend constexpr bool operator==(const LeakageMode&,
                                   const LeakageMode&) = default;

 private:
  LeakScope scope_ = LeakScope::kAlways;
  LeakPayload payload_ = LeakPayload::kNone;
};

inline constexpr LeakageMode kMinimalLeakage{LeakScope::kAlways,
                                             LeakPayload::kNone};

std::string_view ScopeName(LeakScope scope);
std::string_view PayloadName(LeakPayload payload);

// x_i - y_i over the integers at one erroneous coordinate.
struct ErrorEntry {
  int position = 0;
  int value = 0;
  friend bool operator==(const ErrorEntry&, const ErrorEntry&) = default;
};

// Only the fields granted by the oracle's LeakageMode are populated:
//   Distance        -> distance
//   Positions       -> positions
//   PositionsValues -> distance, positions, values (values[k] belongs to
//                      positions[k])
// Under BelowOnly a rejected query carries no payload at all.
struct MatchResponse {
  bool accepted = false;
  std::optional<int> distance;
  std::optional<std::vector<int>> positions;
  std::optional<std::vector<int>> values;

  friend bool operator==(const MatchResponse&, const MatchResponse&) = default;
};

// Leak of one accepted genuine authentication: every erroneous coordinate
// with its signed error, ascending by position.
struct Observation {
  std::vector<ErrorEntry> errors;
  friend bool operator==(const Observation&, const Observation&) = default;
};

enum class SessionShape { kSingleError, kMultiErrorUpToEpsilon };

// Per-coordinate error propensities of a genuine client. Coordinates with
// probability 0 are non-variable: they never err, so they never leak.
struct ClientModel {
  std::vector<double> error_probs;
  SessionShape shape = SessionShape::kSingleError;

  // p_i = 1/n for every coordinate.
  static ClientModel Uniform(int n, SessionShape shape);
  // p_0 = n^-alpha (the rarest coordinate), the remaining mass spread evenly
  // over the other n-1 coordinates.
  static ClientModel RarestCoordinate(int n, double alpha, SessionShape shape);

  void Validate(const SpaceParams& params) const;
  std::vector<int> VariableCoordinates() const;
};

std::string_view SessionShapeName(SessionShape shape);

class OracleSeal;

// Match_{x,eps}: the sealed enrolled template plus the leak contract.
// Attack code only ever talks to Query()/GenuineSession()/FaultedSession().
// One client per instance; queries must be serialized.
class Oracle {
 public:
  Oracle(Template secret, SpaceParams params, LeakageMode mode);

  // Throws UsageError (without counting the query) if y does not conform.
  MatchResponse Query(const Template& y);

  // A genuine client authenticates: y is drawn from the client model, always
  // within distance epsilon of the secret. Counts as a session, not a query.
  Observation GenuineSession(const ClientModel& client, Rng& rng);

  // Fault-injection session: the attacker picks which coordinates of the
  // genuine template are corrupted (x_i -> (x_i + 1) mod q).
  Observation FaultedSession(std::span<const int> positions);

  std::uint64_t query_count() const { return query_count_; }
  std::uint64_t session_count() const { return session_count_; }
  const SpaceParams& params() const { return params_; }
  const LeakageMode& mode() const { return mode_; }

  // Observers for JSONL audit streams.
  using ResponseSink = std::function<void(const MatchResponse&)>;
  using ObservationSink = std::function<void(const Observation&)>;
  void set_response_sink(ResponseSink sink) { response_sink_ = std::move(sink); }
  void set_observation_sink(ObservationSink sink) {
    observation_sink_ = std::move(sink);
  }

 private:
  friend class OracleSeal;

  Observation Authenticate(const Template& y);

  Template secret_;
  SpaceParams params_;
  LeakageMode mode_;
  std::uint64_t query_count_ = 0;
  std::uint64_t session_count_ = 0;
  mutable std::uint64_t seal_reads_ = 0;
  ResponseSink response_sink_;
  ObservationSink observation_sink_;
};

// Post-hoc verification access to the sealed secret. Every call is counted so
// tests can prove that attacks never read the secret.
class OracleSeal {
 public:
  static bool Matches(const Oracle& oracle, const Template& candidate);
  static int DistanceToSecret(const Oracle& oracle, const Template& candidate);
  static const Template& Secret(const Oracle& oracle);
  static std::uint64_t reads(const Oracle& oracle) { return oracle.seal_reads_; }
};

nlohmann::ordered_json ToJson(const MatchResponse& response);
MatchResponse MatchResponseFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const Observation& observation);
Observation ObservationFromJson(const nlohmann::json& j);

}  // namespace leaklab

#endif  // LEAKLAB_ORACLE_H_
