// include/aaekit/common/rng.hpp

// Copyright 2026 The aaekit authors

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

#ifndef AAEKIT_COMMON_RNG_HPP_
#define AAEKIT_COMMON_RNG_HPP_

#include <cstdint>
#include <random>

namespace aaekit {

/// Derives an independent substream seed from (seed, stream) via splitmix64.
/// Used so that per-utterance randomness does not depend on processing order.
uint64_t derive_seed(uint64_t seed, uint64_t stream);

/// Seeded generator with portable uniform/gaussian draws. The distributions
/// are implemented here (not via <random> distribution objects) so that a
/// fixed seed yields the same stream on every standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform() * span);
    return v > hi ? hi : v;
  }

  /// Standard normal via Box-Muller, one spare cached.
  double gaussian();

  uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aaekit

#endif  // AAEKIT_COMMON_RNG_HPP_
