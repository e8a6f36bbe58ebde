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

#ifndef LEAKLAB_HARNESS_H_
#define LEAKLAB_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "leaklab/attacks.h"
#include "leaklab/bounds.h"
#include "leaklab/oracle.h"
#include "leaklab/space.h"

namespace leaklab {

enum class OutputFormat { kCsv, kJsonl };
OutputFormat ParseFormat(const std::string& name);

struct ClientSettings {
  // Rarest coordinate errs with probability n^-alpha; alpha = 1 is uniform.
  double alpha = 1.0;
  SessionShape shape = SessionShape::kSingleError;
};

struct ExperimentConfig {
  SpaceParams params{2, 12, 3};
  // Defaults to the attack's own mode when unset.
  std::optional<LeakageMode> mode;
  AttackId attack = AttackId::kBothPositions;
  int trials = 100;
  std::uint64_t master_seed = 1;
  ClientSettings client;
  int workers = 1;
  // Wall time is measured only on request so that default output is
  // byte-reproducible.
  bool record_timing = false;

  LeakageMode EffectiveMode() const { return mode.value_or(RequiredMode(attack)); }
  // ConfigError on incompatible attack/mode or unusable parameters.
  void Validate() const;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t queries = 0;
  std::uint64_t sessions = 0;
  bool exact = false;
  bool within_ball = false;
  // Integer query (or session) bound for active attacks; "lo:hi" expectation
  // bracket for accumulation.
  std::string bound;
  bool bound_ok = false;
  double ms = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct ExperimentSummary {
  std::string attack;
  std::string theorem;
  std::string bound;
  int trials = 0;
  std::uint64_t min_queries = 0;
  double mean_queries = 0.0;
  std::uint64_t max_queries = 0;
  double mean_sessions = 0.0;
  double sessions_stddev = 0.0;
  std::uint64_t max_sessions = 0;
  int exact_count = 0;
  int bound_violations = 0;
  // Accumulation only: expected-sessions bracket and whether the mean lies in
  // it; analytic n H(n) when the client model is uniform.
  std::optional<SessionBracket> bracket;
  std::optional<bool> bracket_ok;
  std::optional<double> uniform_expectation;
  bool ok = false;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

// Runs every trial on a fresh secret and sealed oracle, verifies each claimed
// recovery through the seal (InternalError with a diagnostic on mismatch) and
// checks the per-trial bound. Records come back in trial order.
ExperimentResult RunExperiment(const ExperimentConfig& config);

void WriteRecords(const std::vector<TrialRecord>& records, OutputFormat format,
                  std::ostream& out);
// IoError naming the path if it cannot be written.
void EmitRecords(const std::vector<TrialRecord>& records, OutputFormat format,
                 const std::string& path);
nlohmann::ordered_json ToJson(const TrialRecord& record);
TrialRecord TrialRecordFromJson(const nlohmann::json& j);
nlohmann::ordered_json ToJson(const ExperimentSummary& summary);

struct BenchConfig {
  SpaceParams params{2, 12, 3};
  int trials = 200;
  std::uint64_t master_seed = 1;
  int workers = 1;
};

struct BenchRow {
  std::string scope;
  std::string leakage;
  std::string theorem;
  std::string complexity;
  std::string bound;
  std::string empirical_max;
  std::string empirical_mean;
  int violations = 0;
  bool applicable = true;
  bool ok = false;
};

// One row per leakage scenario: below x {distance, positions, positions and
// values, accumulation}, both x {minimal, distance, positions, positions and
// values}.
std::vector<BenchRow> BenchTable(const BenchConfig& config);
void WriteBenchTable(const std::vector<BenchRow>& rows, std::ostream& out);
void WriteBenchRows(const std::vector<BenchRow>& rows, OutputFormat format,
                    std::ostream& out);

}  // namespace leaklab

#endif  // LEAKLAB_HARNESS_H_
