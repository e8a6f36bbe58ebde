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

#ifndef LEAKLAB_RNG_H_
#define LEAKLAB_RNG_H_

#include <cstdint>
#include <random>

namespace leaklab {

// SplitMix64 finalizer. Used to derive independent child seeds.
constexpr std::uint64_t MixSeed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable, splittable generator. Every experiment records the seed it was
// built from; a trial's generator is Rng::ForTrial(master, index).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(MixSeed(seed)) {}

  static Rng ForTrial(std::uint64_t master_seed, std::uint64_t trial) {
    return Rng(DeriveSeed(master_seed, trial));
  }
  static constexpr std::uint64_t DeriveSeed(std::uint64_t master_seed,
                                            std::uint64_t index) {
    return MixSeed(master_seed ^ MixSeed(index + 0x632be59bd9b4e019ULL));
  }

  // Child generator that does not share state with this one.
  Rng Split(std::uint64_t stream) const {
    return Rng(DeriveSeed(seed_, stream));
  }

  std::uint64_t seed() const { return seed_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  // Uniform real in [0, 1).
  double UniformReal() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace leaklab

#endif  // LEAKLAB_RNG_H_
