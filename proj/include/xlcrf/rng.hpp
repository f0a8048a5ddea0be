// xlcrf/rng.hpp
//
// Copyright 2026  The xlcrf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Deterministic random numbers with a fixed cross-platform sequence.
// std::uniform_int_distribution is implementation defined, so bounded
// draws are hand-rolled here; seeded results are stable regression values.

#ifndef XLCRF_RNG_HPP_
#define XLCRF_RNG_HPP_

#include <cstdint>
#include <stdexcept>

namespace xlcrf {

namespace detail {
inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// splitmix64 stream with unbiased bounded draws.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() { return detail::splitmix64_next(state_); }

  /// Uniform draw in [0, n), rejection-sampled so every value is equally
  /// likely. n must be positive.
  uint64_t bounded(uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded draw from empty range");
    uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent deterministic substream; the parent is not advanced.
  SplitMix64 fork(uint64_t stream) const {
    return SplitMix64(state_ + 0x9E3779B97F4A7C15ULL * (stream + 1));
  }

 private:
  uint64_t state_;
};

}  // namespace xlcrf

#endif  // XLCRF_RNG_HPP_
