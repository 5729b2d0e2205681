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

#include "locfisher/rng.hpp"

#include <cmath>

namespace locfisher {

std::uint64_t Rng::splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(stream_seed(seed, index));
}

double Rng::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; reject u1 == 0 to keep log finite.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

ComplexMatrix random_matrix(Rng& rng, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian_complex();
  return m;
}

ComplexMatrix random_hermitian(Rng& rng, int dim) {
  ComplexMatrix a = random_matrix(rng, dim, dim);
  return ((a + a.adjoint()) / 2.0).eval();
}

ComplexVector random_pure_state(Rng& rng, int dim) {
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.gaussian_complex();
  v.normalize();
  return v;
}

ComplexMatrix random_density_matrix(Rng& rng, int dim) {
  ComplexMatrix a = random_matrix(rng, dim, dim);
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  return rho;
}

ComplexMatrix random_rank_deficient_density(Rng& rng, int dim, int rank) {
  ComplexMatrix a = random_matrix(rng, dim, rank);
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  return rho;
}

}  // namespace locfisher
