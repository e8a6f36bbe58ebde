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

#include "leaklab/attacks.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <string>

#include "leaklab/errors.h"

namespace leaklab {
namespace {

void RequireMode(const Oracle& oracle, AttackId id) {
  const LeakageMode need = RequiredMode(id);
  if (!(oracle.mode() == need)) {
    throw UsageError(std::string(AttackName(id)) + " requires leakage mode " +
                     need.ToString() + ", oracle has " + oracle.mode().ToString());
  }
}

void RequireBinary(const Oracle& oracle, AttackId id) {
  if (oracle.params().q != 2) {
    throw UsageError(std::string(AttackName(id)) + " is defined for q = 2 only");
  }
}

AttackOutcome Exact(Template x, std::uint64_t queries) {
  AttackOutcome out;
  out.recovered = std::move(x);
  out.queries_used = queries;
  out.exact_recovery = true;
  out.within_ball = true;
  return out;
}

// Positions sweep from an accepted point y whose erroneous coordinates are
// `flagged`. Unresolved coordinates are moved together to value v; a flag
// that disappears fixes the coordinate. A coordinate with a single value
// left is resolved without a query.
Template SweepFlaggedPositions(Oracle& oracle, Template y,
                               const std::vector<int>& flagged) {
  const int q = oracle.params().q;
  struct Pending {
    int pos;
    std::vector<std::uint8_t> candidates;
  };
  std::vector<Pending> pending;
  for (int pos : flagged) {
    Pending p{pos, {}};
    for (int v = 0; v < q; ++v) {
      if (v != y[pos]) p.candidates.push_back(static_cast<std::uint8_t>(v));
    }
    pending.push_back(std::move(p));
  }
  auto settle_singletons = [&] {
    std::erase_if(pending, [&](const Pending& p) {
      if (p.candidates.size() != 1) return false;
      y[p.pos] = p.candidates.front();
      return true;
    });
  };

  for (int v = 0; v < q && !pending.empty(); ++v) {
    settle_singletons();
    Template probe = y;
    std::vector<Pending*> moved;
    for (Pending& p : pending) {
      if (std::find(p.candidates.begin(), p.candidates.end(), v) !=
          p.candidates.end()) {
        probe[p.pos] = static_cast<std::uint8_t>(v);
        moved.push_back(&p);
      }
    }
    if (moved.empty()) continue;
    const MatchResponse r = oracle.Query(probe);
    if (!r.accepted || !r.positions) {
      throw InternalError("positions sweep left the acceptance ball");
    }
    const std::set<int> still(r.positions->begin(), r.positions->end());
    for (Pending* p : moved) {
      if (still.count(p->pos) == 0) {
        p->candidates = {static_cast<std::uint8_t>(v)};
      } else {
        std::erase(p->candidates, static_cast<std::uint8_t>(v));
      }
    }
  }
  settle_singletons();
  if (!pending.empty()) throw InternalError("positions sweep did not converge");
  return y;
}

// Accept-bit walk from `z` (accepted) towards `target` (known rejected),
// flipping differing coordinates in index order and keeping accepted flips.
// On return z sits at distance exactly e, and the returned coordinate is one
// where z already agrees with the secret.
int WalkToFrontier(Oracle& oracle, Template& z, const Template& target,
                   std::uint64_t& queries) {
  std::vector<int> diff;
  for (int i = 0; i < oracle.params().n; ++i) {
    if (z[i] != target[i]) diff.push_back(i);
  }
  for (std::size_t k = 0; k < diff.size(); ++k) {
    const int i = diff[k];
    z[i] ^= 1;
    if (k + 1 == diff.size()) {
      // The last step lands on the rejected target itself.
      z[i] ^= 1;
      return i;
    }
    ++queries;
    if (!oracle.Query(z).accepted) {
      z[i] ^= 1;
      return i;
    }
  }
  throw InternalError("frontier walk on an empty path");
}

constexpr int kEliminationMaxN = 12;

std::uint32_t Mask(const Template& t) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) m |= std::uint32_t{t[i]} << i;
  return m;
}

// Wide balls (2e >= n): the complement walk may never leave the ball, so
// keep every secret consistent with the answers so far and ask the query
// that splits them most evenly. Ties go to the smallest point.
CenterSearchResult EliminateCandidates(Oracle& oracle, const Template& y0,
                                       const std::optional<Template>& rejected) {
  const SpaceParams& p = oracle.params();
  const std::uint32_t points = std::uint32_t{1} << p.n;
  const std::uint32_t start = Mask(y0);
  std::vector<std::uint32_t> cand;
  for (std::uint32_t x = 0; x < points; ++x) {
    if (std::popcount(x ^ start) > p.epsilon) continue;
    if (rejected && std::popcount(x ^ Mask(*rejected)) <= p.epsilon) continue;
    cand.push_back(x);
  }
  CenterSearchResult result;
  while (cand.size() > 1) {
    std::uint32_t best = 0;
    std::size_t best_split = 0;
    for (std::uint32_t y = 0; y < points; ++y) {
      std::size_t inside = 0;
      for (std::uint32_t x : cand) inside += std::popcount(x ^ y) <= p.epsilon;
      const std::size_t split = std::min(inside, cand.size() - inside);
      if (split > best_split) {
        best_split = split;
        best = y;
      }
    }
    if (best_split == 0) throw InternalError("candidates cannot be separated");
    Template y(static_cast<std::size_t>(p.n));
    for (int i = 0; i < p.n; ++i) y[i] = static_cast<std::uint8_t>((best >> i) & 1);
    ++result.queries;
    const bool accepted = oracle.Query(y).accepted;
    std::erase_if(cand, [&](std::uint32_t x) {
      return (std::popcount(x ^ best) <= p.epsilon) != accepted;
    });
  }
  if (cand.empty()) throw InternalError("no candidate consistent with the answers");
  result.center = Template(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    result.center[i] = static_cast<std::uint8_t>((cand.front() >> i) & 1);
  }
  return result;
}

CenterSearchResult CenterSearchFrom(Oracle& oracle, const Template& y0,
                                    std::optional<Template> rejected_hint) {
  const SpaceParams& p = oracle.params();
  CenterSearchResult result;
  if (p.epsilon == 0) {
    result.center = y0;
    return result;
  }
  if (2 * p.epsilon >= p.n && p.n <= kEliminationMaxN) {
    return EliminateCandidates(oracle, y0, rejected_hint);
  }

  // Phase A: walk towards the complement of y0, keeping accepted flips. The
  // first rejection crosses from distance e to e+1.
  Template z = y0;
  int anchor = -1;
  std::set<Template> seen_accepted{y0};
  for (int i = 0; i < p.n; ++i) {
    z[i] ^= 1;
    ++result.queries;
    if (!oracle.Query(z).accepted) {
      z[i] ^= 1;
      anchor = i;
      break;
    }
    seen_accepted.insert(z);
  }

  if (anchor < 0) {
    // Both y0 and its complement are accepted (possible only when 2e >= n).
    // Find a rejected point, then walk to it.
    if (!rejected_hint) {
      const std::uint64_t total = SpaceSize(p, std::uint64_t{1} << 24);
      for (std::uint64_t idx = 0; idx < total && !rejected_hint; ++idx) {
        Template candidate = PointFromIndex(p, idx);
        if (seen_accepted.count(candidate) != 0) continue;
        ++result.queries;
        if (!oracle.Query(candidate).accepted) rejected_hint = std::move(candidate);
      }
      if (!rejected_hint) throw InternalError("no rejected point exists");
    }
    anchor = WalkToFrontier(oracle, z, *rejected_hint, result.queries);
  }

  // Phase B: at distance exactly e, flipping a correct coordinate leaves the
  // ball and flipping a wrong one does not.
  std::vector<int> state(p.n, 0);  // +1 correct, -1 wrong, 0 unknown
  state[anchor] = 1;
  int correct = 1;
  int wrong = 0;
  for (int i = 0; i < p.n; ++i) {
    if (state[i] != 0) continue;
    if (wrong == p.epsilon) {
      state[i] = 1;
    } else if (correct == p.n - p.epsilon) {
      state[i] = -1;
    } else {
      z[i] ^= 1;
      ++result.queries;
      const bool accepted = oracle.Query(z).accepted;
      z[i] ^= 1;
      state[i] = accepted ? -1 : 1;
    }
    (state[i] > 0 ? correct : wrong)++;
  }
  result.center = z;
  for (int i = 0; i < p.n; ++i) {
    if (state[i] < 0) result.center[i] ^= 1;
  }
  return result;
}

}  // namespace

std::size_t PartialTemplate::KnownCount() const {
  return static_cast<std::size_t>(std::count_if(
      coords_.begin(), coords_.end(), [](const auto& c) { return c.has_value(); }));
}

std::string PartialTemplate::ToString() const {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  for (const auto& c : coords_) {
    out.push_back(!c ? '?' : (*c < 36 ? kDigits[*c] : '#'));
  }
  return out;
}

std::string_view AttackName(AttackId id) {
  switch (id) {
    case AttackId::kBelowDistance:
      return "below_distance";
    case AttackId::kBelowPositions:
      return "below_positions";
    case AttackId::kBelowPositionsValues:
      return "below_posvalues";
    case AttackId::kMinimalBinary:
      return "minimal_binary";
    case AttackId::kMinimalBinaryGreedy:
      return "minimal_binary_greedy";
    case AttackId::kBothDistance:
      return "both_distance";
    case AttackId::kBothPositions:
      return "both_positions";
    case AttackId::kBothPositionsValues:
      return "both_posvalues";
    case AttackId::kAccumulation:
      return "accumulation";
    case AttackId::kFaultControlled:
      return "fault_controlled";
  }
  return "?";
}

std::vector<AttackId> AllAttacks() {
  return {AttackId::kBelowDistance,       AttackId::kBelowPositions,
          AttackId::kBelowPositionsValues, AttackId::kMinimalBinary,
          AttackId::kMinimalBinaryGreedy,  AttackId::kBothDistance,
          AttackId::kBothPositions,        AttackId::kBothPositionsValues,
          AttackId::kAccumulation,         AttackId::kFaultControlled};
}

AttackId ParseAttack(std::string_view name) {
  for (AttackId id : AllAttacks()) {
    if (AttackName(id) == name) return id;
  }
  // Accept the hyphenated spelling as well.
  std::string underscored(name);
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  for (AttackId id : AllAttacks()) {
    if (AttackName(id) == underscored) return id;
  }
  throw UsageError("unknown attack '" + std::string(name) + "'");
}

LeakageMode RequiredMode(AttackId id) {
  switch (id) {
    case AttackId::kBelowDistance:
      return {LeakScope::kBelowOnly, LeakPayload::kDistance};
    case AttackId::kBelowPositions:
      return {LeakScope::kBelowOnly, LeakPayload::kPositions};
    case AttackId::kBelowPositionsValues:
    case AttackId::kAccumulation:
    case AttackId::kFaultControlled:
      return {LeakScope::kBelowOnly, LeakPayload::kPositionsValues};
    case AttackId::kMinimalBinary:
    case AttackId::kMinimalBinaryGreedy:
      return kMinimalLeakage;
    case AttackId::kBothDistance:
      return {LeakScope::kAlways, LeakPayload::kDistance};
    case AttackId::kBothPositions:
      return {LeakScope::kAlways, LeakPayload::kPositions};
    case AttackId::kBothPositionsValues:
      return {LeakScope::kAlways, LeakPayload::kPositionsValues};
  }
  return kMinimalLeakage;
}

Theorem AttackTheorem(AttackId id) {
  switch (id) {
    case AttackId::kAccumulation:
    case AttackId::kFaultControlled:
      return Theorem::kAccumulation;
    case AttackId::kMinimalBinaryGreedy:
      return Theorem::kMinimalBinary;
    default:
      return TheoremForMode(RequiredMode(id));
  }
}

bool IsPassive(AttackId id) {
  return id == AttackId::kAccumulation || id == AttackId::kFaultControlled;
}

SearchResult ExhaustiveAcceptSearch(Oracle& oracle) {
  const SpaceParams& p = oracle.params();
  p.RequireEpsilonBelowN();
  const int free = p.n - p.epsilon;
  SearchResult result;
  Template y(static_cast<std::size_t>(p.n));
  while (true) {
    MatchResponse r = oracle.Query(y);
    ++result.queries;
    if (r.accepted) {
      result.accepted = y;
      result.response = std::move(r);
      return result;
    }
    result.last_rejected = y;
    // Odometer over the free prefix; coordinate free-1 moves fastest.
    int j = free - 1;
    while (j >= 0 && y[j] == p.q - 1) y[j--] = 0;
    if (j < 0) break;
    ++y[j];
  }
  throw InternalError("exhaustive search exhausted without acceptance");
}

AttackOutcome AttackBelowDistance(Oracle& oracle) {
  RequireMode(oracle, AttackId::kBelowDistance);
  const SpaceParams& p = oracle.params();
  p.RequireEpsilonBelowN();
  const std::uint64_t start = oracle.query_count();

  const SearchResult found = ExhaustiveAcceptSearch(oracle);
  Template y = found.accepted;
  int d = *found.response.distance;

  // The first accepted point of a lexicographic search can only disagree
  // with the secret inside the leading zero run of its free prefix (where a
  // nonzero secret digit was undercut) or on the pinned coordinates.
  const int free = p.n - p.epsilon;
  std::vector<int> order;
  for (int j = 0; j < free && y[j] == 0; ++j) order.push_back(j);
  for (int j = free; j < p.n; ++j) order.push_back(j);

  const int rejected_distance = p.epsilon + 1;
  for (int j : order) {
    if (d == 0) break;
    const std::uint8_t original = y[j];
    bool original_wrong = false;
    int untried = p.q - 1;
    for (int v = 0; v < p.q; ++v) {
      if (v == original) continue;
      if (original_wrong && untried == 1) {
        // Every other symbol is wrong, so this one is right.
        y[j] = static_cast<std::uint8_t>(v);
        --d;
        break;
      }
      y[j] = static_cast<std::uint8_t>(v);
      const MatchResponse r = oracle.Query(y);
      --untried;
      const int probe = r.accepted ? *r.distance : rejected_distance;
      if (probe < d) {
        d = probe;
        break;
      }
      y[j] = original;
      if (probe > d) break;
      original_wrong = true;
    }
  }
  if (d != 0) throw InternalError("distance hill climb did not reach 0");
  return Exact(std::move(y), oracle.query_count() - start);
}

AttackOutcome AttackBelowPositions(Oracle& oracle) {
  RequireMode(oracle, AttackId::kBelowPositions);
  oracle.params().RequireEpsilonBelowN();
  const std::uint64_t start = oracle.query_count();
  const SearchResult found = ExhaustiveAcceptSearch(oracle);
  Template x = SweepFlaggedPositions(oracle, found.accepted, *found.response.positions);
  return Exact(std::move(x), oracle.query_count() - start);
}

AttackOutcome AttackBelowPositionsValues(Oracle& oracle) {
  RequireMode(oracle, AttackId::kBelowPositionsValues);
  oracle.params().RequireEpsilonBelowN();
  const std::uint64_t start = oracle.query_count();
  const SearchResult found = ExhaustiveAcceptSearch(oracle);
  Template x = found.accepted;
  if (oracle.params().q == 2) {
    x = SweepFlaggedPositions(oracle, std::move(x), *found.response.positions);
  } else {
    const auto& positions = *found.response.positions;
    const auto& values = *found.response.values;
    for (std::size_t k = 0; k < positions.size(); ++k) {
      x[positions[k]] = static_cast<std::uint8_t>(x[positions[k]] + values[k]);
    }
  }
  return Exact(std::move(x), oracle.query_count() - start);
}

CenterSearchResult CenterSearchBinary(Oracle& oracle, const Template& y0) {
  const SpaceParams& p = oracle.params();
  if (p.q != 2) throw UsageError("center search is defined for q = 2 only");
  p.RequireEpsilonBelowN();
  y0.RequireConforms(p);
  if (!oracle.Query(y0).accepted) {
    throw UsageError("center search needs an accepted starting point");
  }
  CenterSearchResult result = CenterSearchFrom(oracle, y0, std::nullopt);
  ++result.queries;
  return result;
}

CenterSearchResult CenterSearchBinary(Oracle& oracle, const SearchResult& start) {
  const SpaceParams& p = oracle.params();
  if (p.q != 2) throw UsageError("center search is defined for q = 2 only");
  p.RequireEpsilonBelowN();
  if (!start.response.accepted) {
    throw UsageError("center search needs an accepted starting point");
  }
  return CenterSearchFrom(oracle, start.accepted, start.last_rejected);
}

AttackOutcome AttackMinimalBinary(Oracle& oracle, MinimalStrategy strategy,
                                  const CoverGuards& guards) {
  const AttackId id = strategy == MinimalStrategy::kGreedyCover
                          ? AttackId::kMinimalBinaryGreedy
                          : AttackId::kMinimalBinary;
  RequireMode(oracle, id);
  RequireBinary(oracle, id);
  oracle.params().RequireEpsilonBelowN();
  const std::uint64_t start = oracle.query_count();

  SearchResult found;
  if (strategy == MinimalStrategy::kCoordinateFixing) {
    found = ExhaustiveAcceptSearch(oracle);
  } else {
    found = CoveringSearch(oracle, GreedyCover(oracle.params(), guards));
  }
  CenterSearchResult center = CenterSearchBinary(oracle, found);
  return Exact(std::move(center.center), oracle.query_count() - start);
}

AttackOutcome AttackBothDistance(Oracle& oracle) {
  RequireMode(oracle, AttackId::kBothDistance);
  const SpaceParams& p = oracle.params();
  const std::uint64_t start = oracle.query_count();

  Template y(static_cast<std::size_t>(p.n));
  int d = *oracle.Query(y).distance;
  for (int j = 0; j < p.n && d > 0; ++j) {
    bool baseline_wrong = false;
    for (int v = 1; v < p.q; ++v) {
      if (baseline_wrong && v == p.q - 1) {
        y[j] = static_cast<std::uint8_t>(v);
        --d;
        break;
      }
      y[j] = static_cast<std::uint8_t>(v);
      const int probe = *oracle.Query(y).distance;
      if (probe < d) {
        d = probe;
        break;
      }
      y[j] = 0;
      if (probe > d) break;
      baseline_wrong = true;
    }
  }
  if (d != 0) throw InternalError("distance hill climb did not reach 0");
  return Exact(std::move(y), oracle.query_count() - start);
}

AttackOutcome AttackBothPositions(Oracle& oracle) {
  RequireMode(oracle, AttackId::kBothPositions);
  const SpaceParams& p = oracle.params();
  const std::uint64_t start = oracle.query_count();

  Template x(static_cast<std::size_t>(p.n));
  std::vector<char> resolved(p.n, 0);
  int unresolved = p.n;
  for (int v = 0; v + 1 < p.q && unresolved > 0; ++v) {
    const MatchResponse r = oracle.Query(Template(static_cast<std::size_t>(p.n),
                                                  static_cast<std::uint8_t>(v)));
    std::vector<char> flagged(p.n, 0);
    for (int pos : *r.positions) flagged[pos] = 1;
    for (int i = 0; i < p.n; ++i) {
      if (!resolved[i] && !flagged[i]) {
        x[i] = static_cast<std::uint8_t>(v);
        resolved[i] = 1;
        --unresolved;
      }
    }
  }
  // Flagged by every constant 0..q-2, so equal to q-1.
  for (int i = 0; i < p.n; ++i) {
    if (!resolved[i]) x[i] = static_cast<std::uint8_t>(p.q - 1);
  }
  return Exact(std::move(x), oracle.query_count() - start);
}

AttackOutcome AttackBothPositionsValues(Oracle& oracle) {
  RequireMode(oracle, AttackId::kBothPositionsValues);
  const SpaceParams& p = oracle.params();
  const std::uint64_t start = oracle.query_count();
  Template x(static_cast<std::size_t>(p.n));
  const MatchResponse r = oracle.Query(x);
  for (std::size_t k = 0; k < r.positions->size(); ++k) {
    const int pos = (*r.positions)[k];
    x[pos] = static_cast<std::uint8_t>(x[pos] + (*r.values)[k]);
  }
  return Exact(std::move(x), oracle.query_count() - start);
}

}  // namespace leaklab
