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

#include "leaklab/bounds.h"

#include <cmath>
#include <limits>

#include "leaklab/errors.h"

namespace leaklab {
namespace {

std::string BigToString(const BigInt& v) { return v.str(); }

}  // namespace

std::string_view TheoremLabel(Theorem theorem) {
  switch (theorem) {
    case Theorem::kBelowDistance:
      return "Th1";
    case Theorem::kBelowPositions:
      return "Th2";
    case Theorem::kBelowPositionsValues:
      return "Th3";
    case Theorem::kMinimalBinary:
      return "Th4";
    case Theorem::kBothDistance:
      return "Th5";
    case Theorem::kBothPositions:
      return "Th6";
    case Theorem::kBothPositionsValues:
      return "Th7";
    case Theorem::kAccumulation:
      return "Th8";
  }
  return "?";
}

Theorem TheoremForMode(LeakageMode mode) {
  if (mode.payload() == LeakPayload::kNone) return Theorem::kMinimalBinary;
  const bool below = mode.scope() == LeakScope::kBelowOnly;
  switch (mode.payload()) {
    case LeakPayload::kDistance:
      return below ? Theorem::kBelowDistance : Theorem::kBothDistance;
    case LeakPayload::kPositions:
      return below ? Theorem::kBelowPositions : Theorem::kBothPositions;
    case LeakPayload::kPositionsValues:
      return below ? Theorem::kBelowPositionsValues
                   : Theorem::kBothPositionsValues;
    case LeakPayload::kNone:
      break;
  }
  return Theorem::kMinimalBinary;
}

std::optional<BigInt> QueryBound(Theorem theorem, const SpaceParams& params) {
  params.Validate();
  const int q = params.q;
  const int n = params.n;
  const int e = params.epsilon;
  switch (theorem) {
    case Theorem::kBelowDistance:
      return NaiveSearchSize(params) + BigInt(q - 1) * e;
    case Theorem::kBelowPositions:
      return NaiveSearchSize(params) + (q - 1);
    case Theorem::kBelowPositionsValues:
      return NaiveSearchSize(params) + 1;
    case Theorem::kMinimalBinary:
      if (q != 2) return std::nullopt;
      return NaiveSearchSize(params) + n + 2 * e + 1;
    case Theorem::kBothDistance:
      return BigInt(n) * (q - 1) + 1;
    case Theorem::kBothPositions:
      return BigInt(q - 1);
    case Theorem::kBothPositionsValues:
      return BigInt(1);
    case Theorem::kAccumulation:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<BigInt> GreedyMinimalBound(const SpaceParams& params) {
  params.Validate();
  if (params.q != 2) return std::nullopt;
  const BigRational cover = BigRational(IntPow(params.q, params.n)) *
                            HarmonicExact(params.n) /
                            BigRational(BallVolume(params));
  const BigInt floor_cover =
      boost::multiprecision::numerator(cover) / boost::multiprecision::denominator(cover);
  return floor_cover + params.n + 2 * params.epsilon + 1;
}

std::optional<int> FaultSessions(const SpaceParams& params) {
  params.Validate();
  if (params.epsilon == 0) return std::nullopt;
  return (params.n + params.epsilon - 1) / params.epsilon;
}

SessionBracket AccumulationBracket(int n, double p_min) {
  if (n < 1) throw UsageError("bracket needs n >= 1");
  if (!(p_min > 0.0)) throw UsageError("rarest probability must be > 0");
  return SessionBracket{1.0 / p_min, Harmonic(n) / p_min,
                        (std::log(static_cast<double>(n)) + 1.0) / p_min};
}

BoundReport TheoreticalBounds(const SpaceParams& params, LeakageMode mode) {
  params.Validate();
  BoundReport r;
  r.params = params;
  r.mode = mode;
  r.ball_volume = BallVolume(params);
  r.naive_search = NaiveSearchSize(params);
  const BigInt space = IntPow(params.q, params.n);
  r.greedy_cover_bound =
      BigRational(space) * HarmonicExact(params.n) / BigRational(r.ball_volume);
  r.greedy_cover_ln_bound =
      space.convert_to<double>() * (std::log(static_cast<double>(params.n)) + 1.0) /
      r.ball_volume.convert_to<double>();

  const double ratio = static_cast<double>(params.epsilon) / params.n;
  if (ratio <= 1.0 - 1.0 / params.q) {
    const double exponent = params.n * (1.0 - QAryEntropy(params.q, ratio));
    r.entropy_exponent = exponent;
    r.entropy_approx = std::pow(static_cast<double>(params.q), exponent);
  }

  for (int t = 1; t <= 7; ++t) {
    const auto theorem = static_cast<Theorem>(t);
    r.per_theorem.push_back({theorem, QueryBound(theorem, params)});
  }
  r.selected = TheoremForMode(mode);
  r.selected_bound = QueryBound(r.selected, params);
  r.fault_sessions = FaultSessions(params);
  return r;
}

nlohmann::ordered_json ToJson(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["q"] = report.params.q;
  j["n"] = report.params.n;
  j["epsilon"] = report.params.epsilon;
  j["mode"] = report.mode.ToString();
  j["ball_volume"] = BigToString(report.ball_volume);
  j["naive_search"] = BigToString(report.naive_search);
  j["greedy_cover_bound"] = report.greedy_cover_bound.str();
  j["greedy_cover_bound_approx"] = report.greedy_cover_bound.convert_to<double>();
  j["greedy_cover_ln_bound"] = report.greedy_cover_ln_bound;
  if (report.entropy_approx) {
    j["entropy_exponent"] = *report.entropy_exponent;
    j["entropy_approx"] = *report.entropy_approx;
  } else {
    j["entropy_approx"] = "undefined: epsilon/n > 1 - 1/q";
  }
  j["theorem"] = TheoremLabel(report.selected);
  if (report.selected_bound) {
    j["theorem_bound"] = BigToString(*report.selected_bound);
  } else {
    j["theorem_bound"] = "undefined for these parameters";
  }
  nlohmann::ordered_json all = nlohmann::ordered_json::object();
  for (const TheoremBound& tb : report.per_theorem) {
    all[std::string(TheoremLabel(tb.theorem))] =
        tb.queries ? nlohmann::ordered_json(BigToString(*tb.queries))
                   : nlohmann::ordered_json(nullptr);
  }
  j["per_theorem"] = std::move(all);
  if (report.fault_sessions) j["fault_sessions"] = *report.fault_sessions;
  return j;
}

}  // namespace leaklab
