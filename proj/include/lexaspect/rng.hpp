// Copyright 2026 The Lexaspect Authors.
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

// The one random source behind fold shuffles and synthetic data.
//
// Algorithm "splitmix64-v1", fully specified here so that other
// implementations can reproduce every draw:
//
//   next():     state += 0x9E3779B97F4A7C15
//               z = state
//               z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//               return z ^ (z >> 31)
//   uniform():  (next() >> 11) * 2^-53, in [0, 1)
//   below(n):   draw r = next() until r < 2^64 - (2^64 mod n); return r mod n
//   normal():   Box-Muller, one draw per call:
//               u1 = 1 - uniform(), u2 = uniform()
//               return sqrt(-2 ln u1) * cos(2 pi u2)
//   shuffle(v): Fisher-Yates from the back: for i = n-1 .. 1,
//               swap(v[i], v[below(i + 1)])

#ifndef LEXASPECT_RNG_HPP_
#define LEXASPECT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace lexaspect {

inline constexpr const char* kRngAlgorithm = "splitmix64-v1";

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    // 2^64 mod n, computed without 128-bit arithmetic.
    const std::uint64_t rem = (0 - n) % n;
    const std::uint64_t limit = 0 - rem;  // 2^64 - rem, wraps to 0 when rem == 0
    for (;;) {
      const std::uint64_t r = next();
      if (rem == 0 || r < limit) return r % n;
    }
  }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace lexaspect

#endif  // LEXASPECT_RNG_HPP_
