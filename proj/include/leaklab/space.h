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

#ifndef LEAKLAB_SPACE_H_
#define LEAKLAB_SPACE_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "leaklab/rng.h"

namespace leaklab {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Largest alphabet a Template can hold (coordinates are stored as bytes).
inline constexpr int kMaxAlphabet = 255;

// The ambient space Z_q^n together with the acceptance threshold epsilon.
struct SpaceParams {
  int q = 2;
  int n = 1;
  int epsilon = 0;

  // Throws UsageError unless 2 <= q <= kMaxAlphabet, n >= 1, 0 <= eps <= n.
  void Validate() const;
  // Attacks need at least one coordinate outside the ball radius.
  void RequireEpsilonBelowN() const;

  friend bool operator==(const SpaceParams&, const SpaceParams&) = default;
};

// A vector of Z_q^n. The alphabet is not stored; conformance to a
// SpaceParams is checked with Conforms()/RequireConforms().
class Template {
 public:
  Template() = default;
  explicit Template(std::size_t n, std::uint8_t fill = 0) : coords_(n, fill) {}
  explicit Template(std::vector<std::uint8_t> coords)
      : coords_(std::move(coords)) {}
  Template(std::initializer_list<int> coords);

  std::size_t size() const { return coords_.size(); }
  std::uint8_t operator[](std::size_t i) const { return coords_[i]; }
  std::uint8_t& operator[](std::size_t i) { return coords_[i]; }
  std::span<const std::uint8_t> coords() const { return coords_; }
  std::span<std::uint8_t> coords() { return coords_; }
  const std::uint8_t* data() const { return coords_.data(); }

  bool Conforms(const SpaceParams& params) const;
  void RequireConforms(const SpaceParams& params) const;

  // Digits 0-9 then a-z; only defined for q <= 36.
  std::string ToString() const;
  static Template FromString(const std::string& text);

  friend bool operator==(const Template&, const Template&) = default;
  friend auto operator<=>(const Template&, const Template&) = default;

 private:
  std::vector<std::uint8_t> coords_;
};

// |{i : x_i != y_i}|. Throws UsageError on length mismatch.
int HammingDistance(const Template& x, const Template& y);

// |B_{q,eps}| = sum_{i=0..eps} C(n,i) (q-1)^i, exact.
BigInt BallVolume(const SpaceParams& params);
// q^(n - eps), exact.
BigInt NaiveSearchSize(const SpaceParams& params);
BigInt IntPow(int base, int exponent);

// h_q(r) with 0 log 0 = 0, so h_q(0) = 0 and h_q(1) = log_q(q-1).
double QAryEntropy(int q, double r);

// H(n) = sum_{i=1..n} 1/i.
double Harmonic(int n);
BigRational HarmonicExact(int n);

Template SampleTemplate(const SpaceParams& params, Rng& rng);

// Uniform y with d(x, y) == k: k positions chosen uniformly, each replaced by
// a uniformly chosen different symbol.
Template SampleAtDistance(const SpaceParams& params, const Template& x, int k,
                          Rng& rng);

}  // namespace leaklab

#endif  // LEAKLAB_SPACE_H_
