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

#include "leaklab/oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "leaklab/errors.h"
#include "leaklab/kernels.h"

namespace leaklab {

std::string_view ScopeName(LeakScope scope) {
  return scope == LeakScope::kBelowOnly ? "below" : "both";
}

std::string_view PayloadName(LeakPayload payload) {
  switch (payload) {
    case LeakPayload::kNone:
      return "none";
    case LeakPayload::kDistance:
      return "distance";
    case LeakPayload::kPositions:
      return "positions";
    case LeakPayload::kPositionsValues:
      return "posvalues";
  }
  return "?";
}

std::string_view SessionShapeName(SessionShape shape) {
  return shape == SessionShape::kSingleError ? "single" : "multi";
}

LeakageMode LeakageMode::Parse(std::string_view scope,
                               std::string_view payload) {
  LeakScope s;
  if (scope == "below") {
    s = LeakScope::kBelowOnly;
  } else if (scope == "both" || scope == "always") {
    s = LeakScope::kAlways;
  } else {
    throw UsageError("unknown leakage scope '" + std::string(scope) + "'");
  }
  LeakPayload p;
  if (payload == "none") {
    p = LeakPayload::kNone;
  } else if (payload == "distance") {
    p = LeakPayload::kDistance;
  } else if (payload == "positions") {
    p = LeakPayload::kPositions;
  } else if (payload == "posvalues") {
    p = LeakPayload::kPositionsValues;
  } else {
    throw UsageError("unknown leakage payload '" + std::string(payload) + "'");
  }
  return LeakageMode(s, p);
}

std::string LeakageMode::ToString() const {
  return std::string(ScopeName(scope_)) + "/" + std::string(PayloadName(payload_));
}

ClientModel ClientModel::Uniform(int n, SessionShape shape) {
  if (n < 1) throw UsageError("client model needs n >= 1");
  return ClientModel{std::vector<double>(static_cast<std::size_t>(n), 1.0 / n),
                     shape};
}

ClientModel ClientModel::RarestCoordinate(int n, double alpha,
                                          SessionShape shape) {
  if (n < 2) throw UsageError("weighted client model needs n >= 2");
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  const double rarest = std::pow(static_cast<double>(n), -alpha);
  std::vector<double> probs(static_cast<std::size_t>(n),
                            (1.0 - rarest) / (n - 1));
  probs[0] = rarest;
  return ClientModel{std::move(probs), shape};
}

void ClientModel::Validate(const SpaceParams& params) const {
  if (error_probs.size() != static_cast<std::size_t>(params.n)) {
    throw UsageError("client model has " + std::to_string(error_probs.size()) +
                     " probabilities, expected n = " + std::to_string(params.n));
  }
  double total = 0.0;
  for (double p : error_probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw UsageError("error probabilities must be finite and >= 0");
    }
    total += p;
  }
  if (total > 1.0 + 1e-9) throw UsageError("error probabilities sum above 1");
  if (total <= 0.0) throw UsageError("client model has no variable coordinate");
  if (params.epsilon < 1) {
    throw UsageError("genuine sessions with errors need epsilon >= 1");
  }
}

std::vector<int> ClientModel::VariableCoordinates() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < error_probs.size(); ++i) {
    if (error_probs[i] > 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

Oracle::Oracle(Template secret, SpaceParams params, LeakageMode mode)
    : secret_(std::move(secret)), params_(params), mode_(mode) {
  params_.Validate();
  secret_.RequireConforms(params_);
}

MatchResponse Oracle::Query(const Template& y) {
  y.RequireConforms(params_);
  ++query_count_;

  MatchResponse response;
  const int d = kernels::Hamming(secret_.coords(), y.coords());
  response.accepted = d <= params_.epsilon;
  const bool leaks = mode_.payload() != LeakPayload::kNone &&
                     (response.accepted || mode_.scope() == LeakScope::kAlways);
  if (leaks) {
    switch (mode_.payload()) {
      case LeakPayload::kNone:
        break;
      case LeakPayload::kDistance:
        response.distance = d;
        break;
      case LeakPayload::kPositions:
      case LeakPayload::kPositionsValues: {
        std::vector<int> positions;
        std::vector<int> values;
        positions.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < params_.n; ++i) {
          if (secret_[i] != y[i]) {
            positions.push_back(i);
            values.push_back(int{secret_[i]} - int{y[i]});
          }
        }
        response.positions = std::move(positions);
        if (mode_.payload() == LeakPayload::kPositionsValues) {
          response.distance = d;
          response.values = std::move(values);
        }
        break;
      }
    }
  }
  if (response_sink_) response_sink_(response);
  return response;
}

Observation Oracle::Authenticate(const Template& y) {
  Observation obs;
  for (int i = 0; i < params_.n; ++i) {
    if (secret_[i] != y[i]) obs.errors.push_back({i, int{secret_[i]} - int{y[i]}});
  }
  if (static_cast<int>(obs.errors.size()) > params_.epsilon) {
    throw InternalError("genuine session outside the acceptance ball");
  }
  ++session_count_;
  if (observation_sink_) observation_sink_(obs);
  return obs;
}

Observation Oracle::GenuineSession(const ClientModel& client, Rng& rng) {
  if (mode_.payload() != LeakPayload::kPositionsValues) {
    throw UsageError("genuine sessions leak only under a positions+values mode");
  }
  client.Validate(params_);

  std::vector<double> weights = client.error_probs;
  const auto variable = static_cast<int>(
      std::count_if(weights.begin(), weights.end(), [](double p) { return p > 0; }));
  int errors = 1;
  if (client.shape == SessionShape::kMultiErrorUpToEpsilon) {
    errors = static_cast<int>(rng.UniformInt(1, std::min(params_.epsilon, variable)));
  }

  Template y = secret_;
  for (int e = 0; e < errors; ++e) {
    // Successive sampling proportional to the remaining weights.
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = rng.UniformReal() * total;
    int pick = -1;
    for (int i = 0; i < params_.n; ++i) {
      if (weights[i] <= 0.0) continue;
      pick = i;
      if (u < weights[i]) break;
      u -= weights[i];
    }
    weights[pick] = 0.0;
    auto v = static_cast<int>(rng.UniformInt(0, params_.q - 2));
    if (v >= secret_[pick]) ++v;
    y[pick] = static_cast<std::uint8_t>(v);
  }
  return Authenticate(y);
}

Observation Oracle::FaultedSession(std::span<const int> positions) {
  if (mode_.payload() != LeakPayload::kPositionsValues) {
    throw UsageError("faulted sessions leak only under a positions+values mode");
  }
  if (static_cast<int>(positions.size()) > params_.epsilon) {
    throw UsageError("cannot fault more than epsilon coordinates");
  }
  Template y = secret_;
  for (int pos : positions) {
    if (pos < 0 || pos >= params_.n) throw UsageError("fault position out of range");
    if (y[pos] != secret_[pos]) throw UsageError("fault position repeated");
    y[pos] = static_cast<std::uint8_t>((secret_[pos] + 1) % params_.q);
  }
  return Authenticate(y);
}

bool OracleSeal::Matches(const Oracle& oracle, const Template& candidate) {
  ++oracle.seal_reads_;
  return candidate == oracle.secret_;
}

int OracleSeal::DistanceToSecret(const Oracle& oracle, const Template& candidate) {
  ++oracle.seal_reads_;
  return HammingDistance(oracle.secret_, candidate);
}

const Template& OracleSeal::Secret(const Oracle& oracle) {
  ++oracle.seal_reads_;
  return oracle.secret_;
}

nlohmann::ordered_json ToJson(const MatchResponse& response) {
  nlohmann::ordered_json j;
  j["accepted"] = response.accepted ? 1 : 0;
  if (response.distance) j["distance"] = *response.distance;
  if (response.positions) j["positions"] = *response.positions;
  if (response.values) {
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < response.values->size(); ++k) {
      values[std::to_string((*response.positions)[k])] = (*response.values)[k];
    }
    j["values"] = std::move(values);
  }
  return j;
}

MatchResponse MatchResponseFromJson(const nlohmann::json& j) {
  MatchResponse r;
  r.accepted = j.at("accepted").get<int>() != 0;
  if (j.contains("distance")) r.distance = j["distance"].get<int>();
  if (j.contains("positions")) r.positions = j["positions"].get<std::vector<int>>();
  if (j.contains("values")) {
    if (!r.positions) throw UsageError("values without positions");
    std::vector<int> values;
    for (int pos : *r.positions) {
      values.push_back(j["values"].at(std::to_string(pos)).get<int>());
    }
    r.values = std::move(values);
  }
  return r;
}

nlohmann::ordered_json ToJson(const Observation& observation) {
  MatchResponse r;
  r.accepted = true;
  r.distance = static_cast<int>(observation.errors.size());
  r.positions.emplace();
  r.values.emplace();
  for (const ErrorEntry& e : observation.errors) {
    r.positions->push_back(e.position);
    r.values->push_back(e.value);
  }
  return ToJson(r);
}

Observation ObservationFromJson(const nlohmann::json& j) {
  const MatchResponse r = MatchResponseFromJson(j);
  if (!r.positions || !r.values) throw UsageError("observation needs positions and values");
  Observation obs;
  for (std::size_t k = 0; k < r.positions->size(); ++k) {
    obs.errors.push_back({(*r.positions)[k], (*r.values)[k]});
  }
  return obs;
}

}  // namespace leaklab
