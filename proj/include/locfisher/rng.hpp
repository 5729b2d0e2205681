// Copyright 2026 The LocFisher Authors
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

#ifndef LOCFISHER_RNG_HPP
#define LOCFISHER_RNG_HPP

#include <cstdint>
#include <random>

#include "locfisher/types.hpp"

namespace locfisher {

// Seedable generator with portable output. The core engine is mt19937_64,
// whose 64-bit stream is pinned by the standard; uniforms are derived from
// the raw bits directly so results do not depend on the standard library's
// distribution implementations. Parallel shot batches use stream(), which
// decorrelates substreams through a SplitMix64 scramble of (seed, index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t splitmix64(std::uint64_t x);

  // Seed of substream `index` of a master seed.
  static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (index + 1));
  }
  // Independent substream `index` of the master seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double gaussian();

  Complex gaussian_complex() { return Complex(gaussian(), gaussian()); }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Random matrix/state helpers used by property tests and the validation
// battery. All deterministic functions of the Rng state.
ComplexMatrix random_matrix(Rng& rng, int rows, int cols);
ComplexMatrix random_hermitian(Rng& rng, int dim);
ComplexVector random_pure_state(Rng& rng, int dim);
// Full-rank mixed state (normalized Wishart construction).
ComplexMatrix random_density_matrix(Rng& rng, int dim);
// Rank-deficient density matrix with the given rank.
ComplexMatrix random_rank_deficient_density(Rng& rng, int dim, int rank);

}  // namespace locfisher

#endif  // LOCFISHER_RNG_HPP
