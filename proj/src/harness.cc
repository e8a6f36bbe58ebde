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

#include "leaklab/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "leaklab/accumulation.h"
#include "leaklab/errors.h"

namespace leaklab {
namespace {

std::string FormatReal(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

ClientModel MakeClient(const ExperimentConfig& config) {
  return ClientModel::RarestCoordinate(config.params.n, config.client.alpha,
                                       config.client.shape);
}

AttackOutcome RunAttack(const ExperimentConfig& config, Oracle& oracle, Rng& rng) {
  switch (config.attack) {
    case AttackId::kBelowDistance:
      return AttackBelowDistance(oracle);
    case AttackId::kBelowPositions:
      return AttackBelowPositions(oracle);
    case AttackId::kBelowPositionsValues:
      return AttackBelowPositionsValues(oracle);
    case AttackId::kMinimalBinary:
      return AttackMinimalBinary(oracle, MinimalStrategy::kCoordinateFixing);
    case AttackId::kMinimalBinaryGreedy:
      return AttackMinimalBinary(oracle, MinimalStrategy::kGreedyCover);
    case AttackId::kBothDistance:
      return AttackBothDistance(oracle);
    case AttackId::kBothPositions:
      return AttackBothPositions(oracle);
    case AttackId::kBothPositionsValues:
      return AttackBothPositionsValues(oracle);
    case AttackId::kAccumulation:
      return AccumulationCollect(oracle, MakeClient(config), rng);
    case AttackId::kFaultControlled:
      return FaultControlledCollect(oracle);
  }
  throw InternalError("unhandled attack id");
}

// Checks every claim of the outcome against the sealed secret.
void Verify(const ExperimentConfig& config, const Oracle& oracle,
            const AttackOutcome& outcome, int trial) {
  auto fail = [&](const std::string& what) {
    throw InternalError(std::string(AttackName(config.attack)) + " trial " +
                        std::to_string(trial) + ": " + what);
  };
  if (outcome.exact_recovery && !OracleSeal::Matches(oracle, outcome.recovered)) {
    fail("claimed exact recovery but the template differs from the secret");
  }
  if (outcome.within_ball &&
      OracleSeal::DistanceToSecret(oracle, outcome.recovered) > config.params.epsilon) {
    fail("claimed a within-ball template outside the acceptance ball");
  }
  if (outcome.partial) {
    const Template& secret = OracleSeal::Secret(oracle);
    for (std::size_t i = 0; i < outcome.partial->size(); ++i) {
      if (outcome.partial->known(i) && *(*outcome.partial)[i] != secret[i]) {
        fail("partial template disagrees with the secret at coordinate " +
             std::to_string(i));
      }
    }
  }
}

struct TrialBound {
  std::string text;
  std::optional<BigInt> queries;
  std::optional<std::uint64_t> sessions;
};

TrialBound BoundFor(const ExperimentConfig& config) {
  const SpaceParams& p = config.params;
  TrialBound b;
  switch (config.attack) {
    case AttackId::kAccumulation: {
      const double p_min = std::pow(static_cast<double>(p.n), -config.client.alpha);
      const SessionBracket br = AccumulationBracket(p.n, p_min);
      b.text = FormatReal(br.lower, 3) + ":" + FormatReal(br.upper_ln, 3);
      return b;
    }
    case AttackId::kFaultControlled:
      b.sessions = static_cast<std::uint64_t>(*FaultSessions(p));
      b.text = std::to_string(*b.sessions);
      return b;
    case AttackId::kMinimalBinaryGreedy:
      b.queries = GreedyMinimalBound(p);
      break;
    default:
      b.queries = QueryBound(AttackTheorem(config.attack), p);
      break;
  }
  if (!b.queries) throw ConfigError("no query bound for these parameters");
  b.text = b.queries->str();
  return b;
}

TrialRecord RunTrial(const ExperimentConfig& config, const TrialBound& bound,
                     int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = Rng::DeriveSeed(config.master_seed, static_cast<std::uint64_t>(trial));
  Rng rng(rec.seed);
  const auto t0 = std::chrono::steady_clock::now();

  Oracle oracle(SampleTemplate(config.params, rng), config.params,
                config.EffectiveMode());
  const AttackOutcome outcome = RunAttack(config, oracle, rng);
  const auto t1 = std::chrono::steady_clock::now();

  Verify(config, oracle, outcome, trial);
  rec.queries = outcome.queries_used;
  rec.sessions = outcome.sessions_used;
  rec.exact = outcome.exact_recovery;
  rec.within_ball = outcome.within_ball;
  rec.bound = bound.text;
  if (bound.queries) {
    rec.bound_ok = BigInt(rec.queries) <= *bound.queries;
  } else if (bound.sessions) {
    rec.bound_ok = rec.sessions == *bound.sessions;
  } else {
    // Expectation bracket: judged on the mean, not per trial.
    rec.bound_ok = true;
  }
  if (config.record_timing) {
    rec.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return rec;
}

ExperimentSummary Summarize(const ExperimentConfig& config,
                            const std::vector<TrialRecord>& records,
                            const TrialBound& bound) {
  ExperimentSummary s;
  s.attack = std::string(AttackName(config.attack));
  s.theorem = config.attack == AttackId::kFaultControlled
                  ? "fault"
                  : std::string(TheoremLabel(AttackTheorem(config.attack)));
  s.bound = bound.text;
  s.trials = static_cast<int>(records.size());
  s.min_queries = records.empty() ? 0 : records.front().queries;
  double sum_q = 0.0;
  double sum_s = 0.0;
  double sum_s2 = 0.0;
  for (const TrialRecord& r : records) {
    s.min_queries = std::min(s.min_queries, r.queries);
    s.max_queries = std::max(s.max_queries, r.queries);
    s.max_sessions = std::max(s.max_sessions, r.sessions);
    sum_q += static_cast<double>(r.queries);
    sum_s += static_cast<double>(r.sessions);
    sum_s2 += static_cast<double>(r.sessions) * static_cast<double>(r.sessions);
    s.exact_count += r.exact;
    s.bound_violations += !r.bound_ok;
  }
  const double count = std::max<double>(1.0, static_cast<double>(records.size()));
  s.mean_queries = sum_q / count;
  s.mean_sessions = sum_s / count;
  if (records.size() > 1) {
    const double var = (sum_s2 - sum_s * sum_s / count) / (count - 1.0);
    s.sessions_stddev = std::sqrt(std::max(0.0, var));
  }
  s.ok = s.bound_violations == 0;
  if (config.attack == AttackId::kAccumulation) {
    const int n = config.params.n;
    const double p_min = std::pow(static_cast<double>(n), -config.client.alpha);
    s.bracket = AccumulationBracket(n, p_min);
    // Several errors per session reach the rarest coordinate sooner, so
    // only the upper end constrains the multi-error shape.
    const bool single = config.client.shape == SessionShape::kSingleError;
    s.bracket_ok = (!single || s.mean_sessions >= s.bracket->lower) &&
                   s.mean_sessions <= s.bracket->upper_ln;
    if (config.client.alpha == 1.0 &&
        config.client.shape == SessionShape::kSingleError) {
      s.uniform_expectation = n * Harmonic(n);
    }
    s.ok = s.ok && *s.bracket_ok;
  }
  return s;
}

}  // namespace

OutputFormat ParseFormat(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "jsonl") return OutputFormat::kJsonl;
  throw ConfigError("unknown output format '" + name + "'");
}

void ExperimentConfig::Validate() const {
  try {
    params.Validate();
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  const LeakageMode need = RequiredMode(attack);
  if (!(EffectiveMode() == need)) {
    throw ConfigError(std::string("attack ") + std::string(AttackName(attack)) +
                      " needs leakage mode " + need.ToString() + ", configured " +
                      EffectiveMode().ToString());
  }
  const bool binary_only = attack == AttackId::kMinimalBinary ||
                           attack == AttackId::kMinimalBinaryGreedy ||
                           attack == AttackId::kAccumulation ||
                           attack == AttackId::kFaultControlled;
  if (binary_only && params.q != 2) {
    throw ConfigError(std::string(AttackName(attack)) + " needs q = 2");
  }
  if (IsPassive(attack)) {
    if (params.epsilon < 1) throw ConfigError("passive attacks need epsilon >= 1");
    if (attack == AttackId::kAccumulation) {
      if (!(client.alpha >= 1.0)) throw ConfigError("alpha must be >= 1");
      if (params.n < 2) throw ConfigError("accumulation needs n >= 2");
    }
  } else if (params.epsilon >= params.n) {
    throw ConfigError("active attacks need epsilon < n");
  }
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const TrialBound bound = BoundFor(config);
  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(config.trials));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const int trial = next.fetch_add(1);
      if (trial >= config.trials) return;
      try {
        result.records[trial] = RunTrial(config, bound, trial);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(config.trials);
        return;
      }
    }
  };
  const int threads = std::min(config.workers, config.trials);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.summary = Summarize(config, result.records, bound);
  return result;
}

nlohmann::ordered_json ToJson(const TrialRecord& r) {
  nlohmann::ordered_json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["queries"] = r.queries;
  j["sessions"] = r.sessions;
  j["exact"] = r.exact ? 1 : 0;
  j["within_ball"] = r.within_ball ? 1 : 0;
  j["bound"] = r.bound;
  j["bound_ok"] = r.bound_ok ? 1 : 0;
  j["ms"] = r.ms;
  return j;
}

TrialRecord TrialRecordFromJson(const nlohmann::json& j) {
  TrialRecord r;
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.queries = j.at("queries").get<std::uint64_t>();
  r.sessions = j.at("sessions").get<std::uint64_t>();
  r.exact = j.at("exact").get<int>() != 0;
  r.within_ball = j.at("within_ball").get<int>() != 0;
  r.bound = j.at("bound").get<std::string>();
  r.bound_ok = j.at("bound_ok").get<int>() != 0;
  r.ms = j.at("ms").get<double>();
  return r;
}

void WriteRecords(const std::vector<TrialRecord>& records, OutputFormat format,
                  std::ostream& out) {
  if (format == OutputFormat::kJsonl) {
    for (const TrialRecord& r : records) out << ToJson(r).dump() << '\n';
    return;
  }
  out << "trial,seed,queries,sessions,exact,within_ball,bound,bound_ok,ms\n";
  for (const TrialRecord& r : records) {
    out << r.trial << ',' << r.seed << ',' << r.queries << ',' << r.sessions
        << ',' << (r.exact ? 1 : 0) << ',' << (r.within_ball ? 1 : 0) << ','
        << r.bound << ',' << (r.bound_ok ? 1 : 0) << ',' << FormatReal(r.ms, 3)
        << '\n';
  }
}

void EmitRecords(const std::vector<TrialRecord>& records, OutputFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  WriteRecords(records, format, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::ordered_json ToJson(const ExperimentSummary& s) {
  nlohmann::ordered_json j;
  j["attack"] = s.attack;
  j["theorem"] = s.theorem;
  j["bound"] = s.bound;
  j["trials"] = s.trials;
  j["min_queries"] = s.min_queries;
  j["mean_queries"] = s.mean_queries;
  j["max_queries"] = s.max_queries;
  j["mean_sessions"] = s.mean_sessions;
  j["sessions_stddev"] = s.sessions_stddev;
  j["max_sessions"] = s.max_sessions;
  j["exact"] = s.exact_count;
  j["bound_violations"] = s.bound_violations;
  if (s.bracket) {
    j["bracket_lower"] = s.bracket->lower;
    j["bracket_upper_harmonic"] = s.bracket->upper_harmonic;
    j["bracket_upper_ln"] = s.bracket->upper_ln;
    j["bracket_ok"] = *s.bracket_ok ? 1 : 0;
  }
  if (s.uniform_expectation) j["uniform_expectation"] = *s.uniform_expectation;
  j["ok"] = s.ok ? 1 : 0;
  return j;
}

namespace {

struct Scenario {
  const char* scope;
  const char* leakage;
  const char* complexity;
  AttackId attack;
};

constexpr Scenario kScenarios[] = {
    {"Below", "Distance", "q^(n-e)+qe", AttackId::kBelowDistance},
    {"Below", "Positions", "q^(n-e)+q", AttackId::kBelowPositions},
    {"Below", "Positions and values", "q^(n-e)", AttackId::kBelowPositionsValues},
    {"Below", "Positions and values (accumulation)", "n^a log n",
     AttackId::kAccumulation},
    {"Both", "Minimal", "2^(n-e)+n+2e", AttackId::kMinimalBinary},
    {"Both", "Distance", "nq", AttackId::kBothDistance},
    {"Both", "Positions", "q", AttackId::kBothPositions},
    {"Both", "Positions and values", "1", AttackId::kBothPositionsValues},
};

}  // namespace

std::vector<BenchRow> BenchTable(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (const Scenario& sc : kScenarios) {
    BenchRow row;
    row.scope = sc.scope;
    row.leakage = sc.leakage;
    row.theorem = std::string(TheoremLabel(AttackTheorem(sc.attack)));
    row.complexity = sc.complexity;

    ExperimentConfig ec;
    ec.params = config.params;
    ec.attack = sc.attack;
    ec.trials = config.trials;
    ec.master_seed = config.master_seed;
    ec.workers = config.workers;
    try {
      ec.Validate();
    } catch (const ConfigError& e) {
      row.applicable = false;
      row.bound = "n/a";
      row.empirical_max = "n/a";
      row.empirical_mean = "n/a";
      row.ok = true;
      rows.push_back(std::move(row));
      continue;
    }
    const ExperimentResult res = RunExperiment(ec);
    const ExperimentSummary& s = res.summary;
    row.bound = s.bound;
    row.violations = s.bound_violations;
    if (sc.attack == AttackId::kAccumulation) {
      row.empirical_max = std::to_string(s.max_sessions);
      row.empirical_mean = FormatReal(s.mean_sessions, 2);
      row.violations += (s.bracket_ok && !*s.bracket_ok) ? 1 : 0;
    } else {
      row.empirical_max = std::to_string(s.max_queries);
      row.empirical_mean = FormatReal(s.mean_queries, 2);
    }
    row.ok = s.ok && s.exact_count == s.trials && row.violations == 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteBenchTable(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << std::left << std::setw(6) << "scope" << "  " << std::setw(36)
      << "leakage" << "  " << std::setw(4) << "thm" << "  " << std::setw(13)
      << "complexity" << "  " << std::setw(17) << "bound" << "  " << std::setw(8)
      << "max" << "  " << std::setw(9) << "mean" << "  " << "ok\n";
  for (const BenchRow& r : rows) {
    out << std::left << std::setw(6) << r.scope << "  " << std::setw(36)
        << r.leakage << "  " << std::setw(4) << r.theorem << "  "
        << std::setw(13) << r.complexity << "  " << std::setw(17) << r.bound
        << "  " << std::setw(8) << r.empirical_max << "  " << std::setw(9)
        << r.empirical_mean << "  "
        << (!r.applicable ? "n/a" : (r.ok ? "yes" : "NO")) << '\n';
  }
}

void WriteBenchRows(const std::vector<BenchRow>& rows, OutputFormat format,
                    std::ostream& out) {
  if (format == OutputFormat::kCsv) {
    out << "scope,leakage,theorem,complexity,bound,max,mean,violations,ok\n";
    for (const BenchRow& r : rows) {
      out << r.scope << ',' << r.leakage << ',' << r.theorem << ','
          << r.complexity << ',' << r.bound << ',' << r.empirical_max << ','
          << r.empirical_mean << ',' << r.violations << ','
          << (!r.applicable ? "n/a" : (r.ok ? "1" : "0")) << '\n';
    }
    return;
  }
  for (const BenchRow& r : rows) {
    nlohmann::ordered_json j;
    j["scope"] = r.scope;
    j["leakage"] = r.leakage;
    j["theorem"] = r.theorem;
    j["complexity"] = r.complexity;
    j["bound"] = r.bound;
    j["max"] = r.empirical_max;
    j["mean"] = r.empirical_mean;
    j["violations"] = r.violations;
    j["applicable"] = r.applicable;
    j["ok"] = r.ok;
    out << j.dump() << '\n';
  }
}

}  // namespace leaklab
