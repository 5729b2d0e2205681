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

#ifndef LOCFISHER_DYNAMICS_HPP
#define LOCFISHER_DYNAMICS_HPP

#include <functional>

#include "locfisher/states.hpp"
#include "locfisher/types.hpp"

// Time evolution: unitary evolution on the full space, non-Hermitian
// effective evolution on the accessible subspace, the projected channel
// X -> P U(t) X U(t)^dag P, and Lindblad generators. Superoperators act on
// column-stacked operators (vec index = col*dim + row), so exponentiation
// and tensor powers reduce to plain matrix algebra.
namespace locfisher::dynamics {

struct HamiltonianFamily {
  int dim = 0;
  bool hermitian = true;
  std::function<ComplexMatrix(double)> builder;

  // Evaluates H(g); enforces the Hermiticity flag.
  ComplexMatrix operator()(double g) const;
};

ComplexMatrix vec(const ComplexMatrix& x);
ComplexMatrix unvec(const ComplexMatrix& v, int dim);
// Superoperator of X -> A X B^dag, i.e. conj(B) (x) A.
ComplexMatrix sandwich_superoperator(const ComplexMatrix& a,
                                     const ComplexMatrix& b);
// Choi matrix of a superoperator on a dim-dimensional system.
ComplexMatrix choi_matrix(const ComplexMatrix& superop, int dim);

// Completely positive, trace-non-increasing map on the accessible subspace.
// Complete positivity is verified through the Choi matrix at construction.
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(const ComplexMatrix& k);
  static QuantumChannel from_superoperator(ComplexMatrix superop, int dim);
  // Gamma(g,t): X -> P U(t) X U(t)^dag P, compressed to M.
  static QuantumChannel from_unitary(const HamiltonianFamily& h_full,
                                     const states::SubspaceProjector& p,
                                     double g, double t);

  int dim() const { return dim_; }
  const ComplexMatrix& superoperator() const { return superop_; }
  double choi_min_eigenvalue() const { return choi_min_eigenvalue_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  // Gamma^(x)k applied slot-by-slot to an operator on M^k.
  ComplexMatrix tensor_apply(int k, const ComplexMatrix& x) const;

 private:
  QuantumChannel(ComplexMatrix superop, int dim, double choi_min);
  ComplexMatrix superop_;
  int dim_;
  double choi_min_eigenvalue_;
};

inline constexpr double kChoiTolerance = 1e-10;

// Lindblad superoperator T with Gamma(g,t) = exp(t T).
struct LindbladGenerator {
  int dim = 0;
  ComplexMatrix superop;

  // T[X] = -i (H X - X H^dag) for an effective (possibly non-Hermitian) H.
  static LindbladGenerator from_effective_hamiltonian(const ComplexMatrix& h);
  ComplexMatrix apply(const ComplexMatrix& x) const;
};

QuantumChannel channel_from_lindblad(const LindbladGenerator& generator,
                                     double t);

// rho(t) = e^{-iHt} rho0 e^{+iH^dag t}. Rejects trace growth beyond
// 1 + 1e-6 (non-dissipative effective Hamiltonian).
states::DensityOperator evolve_nonhermitian(const HamiltonianFamily& h,
                                            const states::DensityOperator& rho0,
                                            double g, double t);

// psi(t) = e^{-iHt} psi0 (works for Hermitian and effective families).
ComplexVector evolve_state(const HamiltonianFamily& h,
                           const ComplexVector& psi0, double g, double t);

}  // namespace locfisher::dynamics

#endif  // LOCFISHER_DYNAMICS_HPP
