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

#include "leaklab/covering.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <string>

#include "leaklab/errors.h"
#include "leaklab/kernels.h"

namespace leaklab {
namespace {

// Sparse description of every nonzero offset of weight <= e: position list
// and additive delta (mod q) per touched coordinate.
struct BallOffsets {
  std::vector<std::uint8_t> pos;
  std::vector<std::uint8_t> delta;
  std::vector<std::uint32_t> start{0};

  std::size_t count() const { return start.size() - 1; }
};

void EnumerateOffsets(const SpaceParams& p, int from, int remaining,
                      std::vector<std::pair<int, int>>& current,
                      BallOffsets& out) {
  for (int j = from; j < p.n && remaining > 0; ++j) {
    for (int d = 1; d < p.q; ++d) {
      current.emplace_back(j, d);
      for (const auto& [pos, delta] : current) {
        out.pos.push_back(static_cast<std::uint8_t>(pos));
        out.delta.push_back(static_cast<std::uint8_t>(delta));
      }
      out.start.push_back(static_cast<std::uint32_t>(out.pos.size()));
      EnumerateOffsets(p, j + 1, remaining - 1, current, out);
      current.pop_back();
    }
  }
}

BallOffsets MakeOffsets(const SpaceParams& p) {
  BallOffsets out;
  std::vector<std::pair<int, int>> current;
  EnumerateOffsets(p, 0, p.epsilon, current, out);
  return out;
}

class Indexer {
 public:
  explicit Indexer(const SpaceParams& p) : p_(p), weights_(p.n) {
    std::uint64_t w = 1;
    for (int j = p.n - 1; j >= 0; --j) {
      weights_[j] = w;
      w *= static_cast<std::uint64_t>(p.q);
    }
  }

  void Digits(std::uint64_t index, std::uint8_t* out) const {
    for (int j = p_.n - 1; j >= 0; --j) {
      out[j] = static_cast<std::uint8_t>(index % p_.q);
      index /= p_.q;
    }
  }

  // Calls f(neighbor_index) for every point of the ball around `center`,
  // the center included.
  template <typename F>
  void ForEachInBall(std::uint64_t center, const std::uint8_t* digits,
                     const BallOffsets& offsets, F&& f) const {
    f(center);
    for (std::size_t o = 0; o < offsets.count(); ++o) {
      std::int64_t index = static_cast<std::int64_t>(center);
      for (std::uint32_t k = offsets.start[o]; k < offsets.start[o + 1]; ++k) {
        const int j = offsets.pos[k];
        const int moved = (digits[j] + offsets.delta[k]) % p_.q;
        index += (moved - digits[j]) * static_cast<std::int64_t>(weights_[j]);
      }
      f(static_cast<std::uint64_t>(index));
    }
  }

 private:
  SpaceParams p_;
  std::vector<std::uint64_t> weights_;
};

// Column-major block of the points whose flag is set.
struct PointBlock {
  std::vector<std::uint8_t> columns;
  std::vector<std::uint64_t> index;
  std::size_t count = 0;

  void Build(const SpaceParams& p, const Indexer& ix,
             const std::vector<std::uint8_t>& flags) {
    index.clear();
    for (std::uint64_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) index.push_back(i);
    }
    count = index.size();
    columns.assign(static_cast<std::size_t>(p.n) * count, 0);
    std::vector<std::uint8_t> digits(p.n);
    for (std::size_t k = 0; k < count; ++k) {
      ix.Digits(index[k], digits.data());
      for (int j = 0; j < p.n; ++j) columns[j * count + k] = digits[j];
    }
  }
};

std::uint64_t BallSize(const SpaceParams& p) {
  const BigInt v = BallVolume(p);
  if (v > BigInt(std::numeric_limits<std::uint32_t>::max())) {
    throw CapacityError("ball volume exceeds 2^32");
  }
  return v.convert_to<std::uint64_t>();
}

// Byte budget for column blocks.
constexpr std::uint64_t kBlockBytes = std::uint64_t{1} << 28;
constexpr std::uint64_t kIncrementalBudget = std::uint64_t{1} << 28;
constexpr std::size_t kArgmaxBlock = 256;

}  // namespace

std::uint64_t SpaceSize(const SpaceParams& params, std::uint64_t limit) {
  params.Validate();
  const BigInt size = IntPow(params.q, params.n);
  if (size > BigInt(limit)) {
    throw CapacityError("q^n = " + size.str() + " exceeds the limit " +
                        std::to_string(limit));
  }
  return size.convert_to<std::uint64_t>();
}

Template PointFromIndex(const SpaceParams& params, std::uint64_t index) {
  Template t(static_cast<std::size_t>(params.n));
  for (int j = params.n - 1; j >= 0; --j) {
    t[j] = static_cast<std::uint8_t>(index % params.q);
    index /= params.q;
  }
  if (index != 0) throw UsageError("point index outside q^n");
  return t;
}

std::uint64_t IndexOfPoint(const SpaceParams& params, const Template& point) {
  point.RequireConforms(params);
  std::uint64_t index = 0;
  for (int j = 0; j < params.n; ++j) index = index * params.q + point[j];
  return index;
}

Cover CoordinateFixingCover(const SpaceParams& params, const CoverGuards& guards) {
  params.Validate();
  const SpaceParams free{params.q, params.n - params.epsilon, 0};
  Cover cover{params, {}, true};
  if (free.n == 0) {
    cover.centers.emplace_back(static_cast<std::size_t>(params.n));
    return cover;
  }
  const std::uint64_t count = SpaceSize(free, guards.materialize_limit);
  cover.centers.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Template prefix = PointFromIndex(free, i);
    Template center(static_cast<std::size_t>(params.n));
    std::copy(prefix.coords().begin(), prefix.coords().end(),
              center.coords().begin());
    cover.centers.push_back(std::move(center));
  }
  return cover;
}

// Greedy with exact gains: covering a point decrements every center whose
// ball holds it. Costs about q^n |B| (e+1) index steps in total, cheap for
// small balls where lazy re-evaluation would churn through stale keys.
void GreedyExactGains(const Indexer& ix, const BallOffsets& offsets,
                      std::uint64_t total, std::uint64_t ball, Cover& cover) {
  const SpaceParams& params = cover.params;
  std::vector<std::uint32_t> gain(total, static_cast<std::uint32_t>(ball));
  std::vector<std::uint8_t> uncovered(total, 1);
  const std::size_t blocks = (total + kArgmaxBlock - 1) / kArgmaxBlock;
  std::vector<std::uint32_t> block_max(blocks, static_cast<std::uint32_t>(ball));
  std::vector<std::uint8_t> dirty(blocks, 0);
  std::vector<std::uint8_t> digits(params.n), inner(params.n);
  std::uint64_t remaining = total;

  while (remaining > 0) {
    std::size_t best_block = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      if (dirty[b]) {
        const std::size_t lo = b * kArgmaxBlock;
        const std::size_t hi = std::min<std::size_t>(lo + kArgmaxBlock, total);
        block_max[b] = *std::max_element(gain.begin() + lo, gain.begin() + hi);
        dirty[b] = 0;
      }
      if (block_max[b] > block_max[best_block]) best_block = b;
    }
    const std::size_t lo = best_block * kArgmaxBlock;
    std::uint64_t c = lo;
    while (gain[c] != block_max[best_block]) ++c;
    if (gain[c] == 0) throw InternalError("greedy cover stalled with points left");

    cover.centers.push_back(PointFromIndex(params, c));
    remaining -= gain[c];
    ix.Digits(c, digits.data());
    ix.ForEachInBall(c, digits.data(), offsets, [&](std::uint64_t p) {
      if (!uncovered[p]) return;
      uncovered[p] = 0;
      ix.Digits(p, inner.data());
      ix.ForEachInBall(p, inner.data(), offsets, [&](std::uint64_t other) {
        --gain[other];
        dirty[other / kArgmaxBlock] = 1;
      });
    });
  }
}

Cover GreedyCover(const SpaceParams& params, const CoverGuards& guards) {
  const std::uint64_t total = SpaceSize(params, guards.materialize_limit);
  Cover cover{params, {}, true};
  if (params.epsilon == params.n) {
    cover.centers.emplace_back(static_cast<std::size_t>(params.n));
    return cover;
  }

  const Indexer ix(params);
  const BallOffsets offsets = MakeOffsets(params);
  const std::uint64_t ball = offsets.count() + 1;
  if (total * ball * static_cast<std::uint64_t>(params.epsilon + 1) <= kIncrementalBudget) {
    GreedyExactGains(ix, offsets, total, ball, cover);
    return cover;
  }
  const auto& kern = kernels::Active();

  std::vector<std::uint8_t> uncovered(total, 1);
  std::uint64_t remaining = total;
  PointBlock block;
  bool block_fresh = false;
  std::vector<std::uint8_t> digits(params.n);
  std::vector<std::uint8_t> dist;

  // Scanning the uncovered block costs ~U*n/32 byte-lanes; walking the ball
  // costs ~|B|*(e+1) random reads.
  auto prefer_scan = [&] {
    const std::uint64_t scan = remaining * static_cast<std::uint64_t>(params.n) / 16;
    const std::uint64_t walk = ball * static_cast<std::uint64_t>(params.epsilon + 1);
    return scan < walk && remaining * params.n <= kBlockBytes;
  };
  auto refresh_block = [&] {
    if (!block_fresh) {
      block.Build(params, ix, uncovered);
      block_fresh = true;
    }
  };
  auto gain = [&](std::uint64_t c) -> std::uint64_t {
    ix.Digits(c, digits.data());
    if (prefer_scan()) {
      refresh_block();
      return kern.count_within(block.columns.data(), block.count, params.n,
                               block.count, digits.data(), params.epsilon,
                               nullptr);
    }
    std::uint64_t g = 0;
    ix.ForEachInBall(c, digits.data(), offsets,
                     [&](std::uint64_t p) { g += uncovered[p]; });
    return g;
  };

  // Max-heap on (gain, -index): larger gain first, then smaller index.
  auto key = [](std::uint64_t g, std::uint64_t idx) {
    return (g << 32) | (0xffffffffULL - idx);
  };
  std::vector<std::uint64_t> init(total);
  for (std::uint64_t i = 0; i < total; ++i) init[i] = key(ball, i);
  std::priority_queue<std::uint64_t> heap(std::less<std::uint64_t>{}, std::move(init));

  while (remaining > 0) {
    const std::uint64_t top = heap.top();
    heap.pop();
    const std::uint64_t c = 0xffffffffULL - (top & 0xffffffffULL);
    const std::uint64_t g = gain(c);
    const std::uint64_t fresh = key(g, c);
    // Stale keys only overestimate, so a fresh key that still beats the
    // next stale key is the true maximum (ties included).
    if (!heap.empty() && fresh < heap.top()) {
      if (g > 0) heap.push(fresh);
      continue;
    }
    if (g == 0) throw InternalError("greedy cover stalled with points left");
    cover.centers.push_back(PointFromIndex(params, c));
    ix.Digits(c, digits.data());
    if (prefer_scan()) {
      refresh_block();
      dist.resize(block.count);
      kern.distances(block.columns.data(), block.count, params.n, block.count,
                     digits.data(), dist.data());
      for (std::size_t k = 0; k < block.count; ++k) {
        if (dist[k] <= params.epsilon) uncovered[block.index[k]] = 0;
      }
    } else {
      ix.ForEachInBall(c, digits.data(), offsets,
                       [&](std::uint64_t p) { uncovered[p] = 0; });
    }
    remaining -= g;
    block_fresh = false;
  }
  return cover;
}

bool CertifyCover(const Cover& cover, const CoverGuards& guards,
                  CertifyRoute route) {
  const SpaceParams& p = cover.params;
  const std::uint64_t total = SpaceSize(p, guards.certify_limit);
  if (cover.centers.empty()) return false;
  for (const Template& c : cover.centers) {
    if (!c.Conforms(p)) return false;
  }
  const std::uint64_t centers = cover.centers.size();

  if (route == CertifyRoute::kAuto) {
    const BigInt walk = BallVolume(p) * centers * (p.epsilon + 1);
    const BigInt scan = BigInt(total) * centers * p.n / 16;
    route = walk <= scan ? CertifyRoute::kMarkBalls : CertifyRoute::kScanCenters;
  }

  if (route == CertifyRoute::kMarkBalls) {
    const Indexer ix(p);
    const BallOffsets offsets = MakeOffsets(p);
    std::vector<std::uint8_t> covered(total, 0);
    for (const Template& c : cover.centers) {
      ix.ForEachInBall(IndexOfPoint(p, c), c.data(), offsets,
                       [&](std::uint64_t i) { covered[i] = 1; });
    }
    return std::all_of(covered.begin(), covered.end(),
                       [](std::uint8_t v) { return v != 0; });
  }

  std::vector<std::uint8_t> columns(static_cast<std::size_t>(p.n) * centers);
  for (std::uint64_t k = 0; k < centers; ++k) {
    for (int j = 0; j < p.n; ++j) columns[j * centers + k] = cover.centers[k][j];
  }
  const auto& kern = kernels::Active();
  const Indexer ix(p);
  std::vector<std::uint8_t> digits(p.n);
  for (std::uint64_t i = 0; i < total; ++i) {
    ix.Digits(i, digits.data());
    if (kern.count_within(columns.data(), centers, p.n, centers, digits.data(),
                          p.epsilon, nullptr) == 0) {
      return false;
    }
  }
  return true;
}

namespace {

class ExactSolver {
 public:
  ExactSolver(const SpaceParams& p, std::uint64_t total, std::uint64_t budget)
      : total_(total), budget_(budget), covered_by_(total, 0), forbidden_(total, 0) {
    const Indexer ix(p);
    const BallOffsets offsets = MakeOffsets(p);
    ball_size_ = offsets.count() + 1;
    balls_.resize(total * ball_size_);
    std::vector<std::uint8_t> digits(p.n);
    for (std::uint64_t c = 0; c < total; ++c) {
      ix.Digits(c, digits.data());
      std::uint32_t* out = &balls_[c * ball_size_];
      ix.ForEachInBall(c, digits.data(), offsets,
                       [&](std::uint64_t i) { *out++ = static_cast<std::uint32_t>(i); });
    }
    gain_.assign(total, static_cast<std::uint32_t>(ball_size_));
    uncovered_ = total;
  }

  // Returns false if the node budget ran out.
  bool Solve(int upper_bound) {
    best_ = upper_bound;
    // Translation invariance: some optimal cover contains the all-zero point.
    Add(0);
    Search(1);
    return nodes_ <= budget_;
  }

  int best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  const std::uint32_t* Ball(std::uint64_t c) const { return &balls_[c * ball_size_]; }

  // Balls are symmetric, so the centers whose ball holds p are Ball(p).
  void Add(std::uint64_t c) {
    for (std::uint64_t k = 0; k < ball_size_; ++k) {
      const std::uint32_t p = Ball(c)[k];
      if (covered_by_[p]++ == 0) {
        --uncovered_;
        for (std::uint64_t j = 0; j < ball_size_; ++j) --gain_[Ball(p)[j]];
      }
    }
  }
  void Remove(std::uint64_t c) {
    for (std::uint64_t k = 0; k < ball_size_; ++k) {
      const std::uint32_t p = Ball(c)[k];
      if (--covered_by_[p] == 0) {
        ++uncovered_;
        for (std::uint64_t j = 0; j < ball_size_; ++j) ++gain_[Ball(p)[j]];
      }
    }
  }

  void Search(int depth) {
    if (++nodes_ > budget_) return;
    if (uncovered_ == 0) {
      best_ = std::min(best_, depth);
      return;
    }
    if (depth + static_cast<int>((uncovered_ + ball_size_ - 1) / ball_size_) >= best_) return;

    // Each chosen center covers at most `gain` uncovered points, all of
    // which have m(u) >= gain, so sum 1/m(u) bounds the centers still needed.
    // The branching point is the uncovered point with fewest candidates.
    double fractional = 0.0;
    std::uint64_t target = total_;
    std::uint64_t target_options = ball_size_ + 1;
    for (std::uint64_t u = 0; u < total_; ++u) {
      if (covered_by_[u] != 0) continue;
      std::uint32_t m = 0;
      std::uint64_t options = 0;
      for (std::uint64_t k = 0; k < ball_size_; ++k) {
        const std::uint32_t c = Ball(u)[k];
        if (forbidden_[c]) continue;
        ++options;
        m = std::max(m, gain_[c]);
      }
      if (options == 0) return;
      fractional += 1.0 / m;
      if (options < target_options) {
        target_options = options;
        target = u;
      }
    }
    if (depth + static_cast<int>(std::ceil(fractional - 1e-9)) >= best_) return;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> options;
    options.reserve(target_options);
    for (std::uint64_t k = 0; k < ball_size_; ++k) {
      const std::uint32_t c = Ball(target)[k];
      if (!forbidden_[c]) options.emplace_back(gain_[c], c);
    }
    std::sort(options.begin(), options.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::uint32_t> excluded;
    for (const auto& [g, c] : options) {
      Add(c);
      Search(depth + 1);
      Remove(c);
      if (nodes_ > budget_) break;
      // Every cover using c has now been explored below this node.
      forbidden_[c] = 1;
      excluded.push_back(c);
    }
    for (std::uint32_t c : excluded) forbidden_[c] = 0;
  }

  std::uint64_t total_;
  std::uint64_t budget_;
  std::uint64_t ball_size_ = 1;
  std::vector<std::uint32_t> balls_;
  std::vector<std::uint32_t> covered_by_;
  std::vector<std::uint32_t> gain_;
  std::vector<std::uint8_t> forbidden_;
  std::uint64_t uncovered_ = 0;
  std::uint64_t nodes_ = 0;
  int best_ = 0;
};

}  // namespace

ExactCoverResult ExactMinCoverSize(const SpaceParams& params,
                                   std::uint64_t node_budget,
                                   const CoverGuards& guards) {
  const std::uint64_t total = SpaceSize(params, guards.exact_limit);
  ExactCoverResult result;
  const std::uint64_t ball = BallSize(params);
  result.lower_bound = static_cast<int>((total + ball - 1) / ball);
  const Cover greedy = GreedyCover(params, guards);
  result.upper_bound = static_cast<int>(greedy.size());
  if (result.upper_bound == result.lower_bound) {
    result.optimum = result.upper_bound;
    return result;
  }
  ExactSolver solver(params, total, node_budget);
  const bool finished = solver.Solve(result.upper_bound);
  result.nodes = solver.nodes();
  result.upper_bound = solver.best();
  if (finished) {
    result.optimum = solver.best();
    result.lower_bound = solver.best();
  }
  return result;
}

SearchResult CoveringSearch(Oracle& oracle, const Cover& cover) {
  if (!(cover.params == oracle.params())) {
    throw UsageError("cover parameters do not match the oracle");
  }
  if (!cover.certified) throw UsageError("covering search needs a certified cover");
  SearchResult result;
  for (const Template& center : cover.centers) {
    MatchResponse r = oracle.Query(center);
    ++result.queries;
    if (r.accepted) {
      result.accepted = center;
      result.response = std::move(r);
      return result;
    }
    result.last_rejected = center;
  }
  throw InternalError("certified cover exhausted without an accepted center");
}

void ExportCover(const Cover& cover, std::ostream& out) {
  for (const Template& c : cover.centers) out << c.ToString() << '\n';
  if (!out) throw IoError("failed writing cover");
}

Cover ImportCover(const SpaceParams& params, std::istream& in) {
  params.Validate();
  Cover cover{params, {}, false};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Template t = Template::FromString(line);
    t.RequireConforms(params);
    cover.centers.push_back(std::move(t));
  }
  return cover;
}

}  // namespace leaklab
