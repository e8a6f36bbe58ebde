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

#include "leaklab/space.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "leaklab/errors.h"
#include "leaklab/kernels.h"

namespace leaklab {

void SpaceParams::Validate() const {
  if (q < 2 || q > kMaxAlphabet) {
    throw UsageError("q must lie in [2, " + std::to_string(kMaxAlphabet) +
                     "], got " + std::to_string(q));
  }
  if (n < 1) throw UsageError("n must be >= 1, got " + std::to_string(n));
  if (epsilon < 0 || epsilon > n) {
    throw UsageError("epsilon must lie in [0, n], got " +
                     std::to_string(epsilon));
  }
}

void SpaceParams::RequireEpsilonBelowN() const {
  Validate();
  if (epsilon >= n) throw UsageError("attack requires epsilon < n");
}

Template::Template(std::initializer_list<int> coords) {
  coords_.reserve(coords.size());
  for (int c : coords) {
    if (c < 0 || c > kMaxAlphabet) throw UsageError("coordinate out of range");
    coords_.push_back(static_cast<std::uint8_t>(c));
  }
}

bool Template::Conforms(const SpaceParams& params) const {
  if (coords_.size() != static_cast<std::size_t>(params.n)) return false;
  return std::all_of(coords_.begin(), coords_.end(),
                     [&](std::uint8_t c) { return c < params.q; });
}

void Template::RequireConforms(const SpaceParams& params) const {
  if (coords_.size() != static_cast<std::size_t>(params.n)) {
    throw UsageError("template has length " + std::to_string(coords_.size()) +
                     ", expected n = " + std::to_string(params.n));
  }
  if (!Conforms(params)) {
    throw UsageError("template coordinate outside [0, q-1]");
  }
}

std::string Template::ToString() const {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  out.reserve(coords_.size());
  for (std::uint8_t c : coords_) {
    if (c >= 36) throw UsageError("string form requires q <= 36");
    out.push_back(kDigits[c]);
  }
  return out;
}

Template Template::FromString(const std::string& text) {
  std::vector<std::uint8_t> coords;
  coords.reserve(text.size());
  for (char ch : text) {
    if (ch >= '0' && ch <= '9') {
      coords.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (ch >= 'a' && ch <= 'z') {
      coords.push_back(static_cast<std::uint8_t>(ch - 'a' + 10));
    } else {
      throw UsageError(std::string("invalid template digit '") + ch + "'");
    }
  }
  return Template(std::move(coords));
}

int HammingDistance(const Template& x, const Template& y) {
  if (x.size() != y.size()) {
    throw UsageError("dimension mismatch: " + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()));
  }
  return kernels::Hamming(x.coords(), y.coords());
}

BigInt IntPow(int base, int exponent) {
  BigInt result = 1;
  BigInt b = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1U) result *= b;
    b *= b;
  }
  return result;
}

BigInt BallVolume(const SpaceParams& params) {
  params.Validate();
  BigInt total = 0;
  BigInt binom = 1;  // C(n, i)
  BigInt power = 1;  // (q-1)^i
  for (int i = 0; i <= params.epsilon; ++i) {
    total += binom * power;
    binom = binom * (params.n - i) / (i + 1);
    power *= params.q - 1;
  }
  return total;
}

BigInt NaiveSearchSize(const SpaceParams& params) {
  params.Validate();
  return IntPow(params.q, params.n - params.epsilon);
}

double QAryEntropy(int q, double r) {
  if (q < 2) throw UsageError("q must be >= 2");
  if (!(r >= 0.0 && r <= 1.0)) throw UsageError("entropy argument outside [0,1]");
  const double log_q = std::log(static_cast<double>(q));
  const double ln_q_minus_1 = std::log(static_cast<double>(q - 1));
  double h = r * ln_q_minus_1;
  if (r > 0.0) h -= r * std::log(r);
  if (r < 1.0) h -= (1.0 - r) * std::log1p(-r);
  return h / log_q;
}

double Harmonic(int n) {
  if (n < 1) throw UsageError("harmonic number needs n >= 1");
  // Summing smallest terms first keeps the rounding error down.
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

BigRational HarmonicExact(int n) {
  if (n < 1) throw UsageError("harmonic number needs n >= 1");
  BigRational h = 0;
  for (int i = 1; i <= n; ++i) h += BigRational(1, i);
  return h;
}

Template SampleTemplate(const SpaceParams& params, Rng& rng) {
  params.Validate();
  Template t(static_cast<std::size_t>(params.n));
  for (int i = 0; i < params.n; ++i) {
    t[i] = static_cast<std::uint8_t>(rng.UniformInt(0, params.q - 1));
  }
  return t;
}

Template SampleAtDistance(const SpaceParams& params, const Template& x, int k,
                          Rng& rng) {
  params.Validate();
  x.RequireConforms(params);
  if (k < 0 || k > params.n) {
    throw UsageError("distance " + std::to_string(k) + " outside [0, n]");
  }
  // Partial Fisher-Yates: the first k entries become a uniform k-subset.
  std::vector<int> order(static_cast<std::size_t>(params.n));
  std::iota(order.begin(), order.end(), 0);
  Template y = x;
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<int>(rng.UniformInt(i, params.n - 1));
    std::swap(order[i], order[j]);
    const int pos = order[i];
    // Uniform over the q-1 symbols different from x[pos].
    auto v = static_cast<int>(rng.UniformInt(0, params.q - 2));
    if (v >= x[pos]) ++v;
    y[pos] = static_cast<std::uint8_t>(v);
  }
  return y;
}

}  // namespace leaklab
