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

#ifndef LEAKLAB_COVERING_H_
#define LEAKLAB_COVERING_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "leaklab/oracle.h"
#include "leaklab/space.h"

namespace leaklab {

// Materialization limits. Exceeding one is a CapacityError, never a silent
// fallback.
struct CoverGuards {
  std::uint64_t materialize_limit = std::uint64_t{1} << 24;  // q^n, greedy
  std::uint64_t exact_limit = std::uint64_t{1} << 12;        // q^n, exact
  std::uint64_t certify_limit = std::uint64_t{1} << 24;      // q^n, checks
};

// A set of centers whose radius-epsilon balls are meant to cover Z_q^n.
struct Cover {
  SpaceParams params;
  std::vector<Template> centers;
  // Full coverage holds, either by construction or by CertifyCover().
  bool certified = false;

  std::size_t size() const { return centers.size(); }
};

// Lexicographic rank of points: coordinate 0 is the most significant digit.
// q^n; CapacityError if it exceeds `limit`.
std::uint64_t SpaceSize(const SpaceParams& params, std::uint64_t limit);
Template PointFromIndex(const SpaceParams& params, std::uint64_t index);
std::uint64_t IndexOfPoint(const SpaceParams& params, const Template& point);

// All q^(n-e) vectors whose last e coordinates are 0, in lexicographic order.
Cover CoordinateFixingCover(const SpaceParams& params,
                            const CoverGuards& guards = {});

// Greedy set cover: repeatedly take the center whose ball holds the most
// uncovered points, ties to the lexicographically smallest center.
Cover GreedyCover(const SpaceParams& params, const CoverGuards& guards = {});

struct ExactCoverResult {
  std::optional<int> optimum;  // empty if the node budget ran out
  int lower_bound = 0;         // best proven lower bound
  int upper_bound = 0;         // best cover found
  std::uint64_t nodes = 0;
};

// Branch and bound for the minimum number of radius-e balls covering Z_q^n,
// started from the greedy cover and pruned with ceil(uncovered / |B|).
ExactCoverResult ExactMinCoverSize(const SpaceParams& params,
                                   std::uint64_t node_budget = 20'000'000,
                                   const CoverGuards& guards = {});

enum class CertifyRoute {
  kAuto,
  kMarkBalls,     // enumerate each center's ball
  kScanCenters,   // per point, SIMD scan of the center block
};

// Exhaustive coverage check: every point lies within e of some center.
bool CertifyCover(const Cover& cover, const CoverGuards& guards = {},
                  CertifyRoute route = CertifyRoute::kAuto);

struct SearchResult {
  Template accepted;
  MatchResponse response;
  std::uint64_t queries = 0;
  // Last rejected point seen before acceptance, if any.
  std::optional<Template> last_rejected;
};

// Queries centers in order until one is accepted. Throws InternalError if the
// cover is exhausted.
SearchResult CoveringSearch(Oracle& oracle, const Cover& cover);

// Newline-delimited q-ary strings, one center per line.
void ExportCover(const Cover& cover, std::ostream& out);
Cover ImportCover(const SpaceParams& params, std::istream& in);

}  // namespace leaklab

#endif  // LEAKLAB_COVERING_H_
