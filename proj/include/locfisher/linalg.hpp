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

#ifndef LOCFISHER_LINALG_HPP
#define LOCFISHER_LINALG_HPP

#include <vector>

#include "locfisher/types.hpp"

// Dense complex operator algebra shared by every other layer: Hermitian
// eigendecomposition, matrix exponential, tensor products and partial traces
// (row-major index convention, subsystem 0 is the leftmost factor),
// trace-orthogonal Hermitian operator bases, and the symmetric-logarithmic-
// derivative solver.
namespace locfisher::linalg {

// Hermiticity acceptance threshold, relative to max(1, |M|_max).
inline constexpr double kHermitianTolerance = 1e-12;
// Relative support cutoff for the SLD kernel (fraction of the largest
// eigenvalue); keeps the solver scale-invariant.
inline constexpr double kSupportCutoffRelative = 1e-10;

double max_abs(const ComplexMatrix& m);
double hermiticity_error(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m,
                  double tolerance = kHermitianTolerance);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct EigResult {
  RealVector values;       // descending
  ComplexMatrix vectors;   // unitary, columns match values
};

// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
// Throws InvalidInput with the measured deviation if m is not Hermitian.
EigResult hermitian_eig(const ComplexMatrix& m);

struct SldOptions {
  double support_cutoff_relative = kSupportCutoffRelative;
  // A kernel-to-kernel component of drho larger than this (relative to
  // max(1, |drho|_max)) cannot be reproduced by any SLD.
  double kernel_consistency_tolerance = 1e-8;
};

struct SldResult {
  ComplexMatrix sld;             // Hermitian, zero on the kernel block
  int support_rank = 0;
  double kernel_residual = 0.0;  // largest kernel-to-kernel |drho| component
  bool consistent = true;
};

// Solves (rho L + L rho)/2 = drho on the support of rho:
// in the eigenbasis, L_ij = 2 drho_ij / (lambda_i + lambda_j) wherever
// lambda_i + lambda_j exceeds the support cutoff, 0 elsewhere.
// Kernel-to-kernel components of drho above tolerance mark the derivative
// inconsistent (no SLD reproduces them); the result carries the diagnostic.
SldResult solve_sld(const ComplexMatrix& rho, const ComplexMatrix& drho,
                    const SldOptions& options = {});

// Kronecker product, row-major convention: (i_a, i_b) -> i_a * dim_b + i_b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_power(const ComplexMatrix& a, int k);

// Partial trace over `traced` (0-based subsystem indices); remaining
// subsystems keep their relative order. Tracing everything yields the 1x1
// matrix [Tr m].
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<int>& dims,
                            const std::vector<int>& traced);

// exp(m) by scaling-and-squaring (Pade). Rejects norm overflow.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

// Generalized Gell-Mann construction plus scaled identity: dim^2 Hermitian
// matrices with Tr[e_a e_b] = 2 delta_ab. Order: symmetric off-diagonal
// pairs, antisymmetric pairs i(E_ba - E_ab), diagonal traceless ladder,
// identity scaled to norm sqrt(2).
std::vector<ComplexMatrix> hermitian_basis(int dim);
inline constexpr double kBasisNormalization = 2.0;  // Tr[e_a e_b] = 2 d_ab

// Zeroes eigenvalues in [-clip_tolerance, 0); eigenvalues below
// -error_tolerance throw NumericError.
ComplexMatrix clip_negative_eigenvalues(const ComplexMatrix& m,
                                        double clip_tolerance = 1e-10,
                                        double error_tolerance = 1e-10);

// Embeds a single-site operator at `slot` of an n_slots-fold product space
// (identity elsewhere).
ComplexMatrix embed_at(const ComplexMatrix& op, int n_slots, int slot);

// Applies a one-site superoperator (column-stacking convention,
// vec index = col*dim + row) to the given slot of a multi-site operator.
ComplexMatrix apply_superop_to_slot(const ComplexMatrix& x,
                                    const std::vector<int>& dims, int slot,
                                    const ComplexMatrix& superop);

}  // namespace locfisher::linalg

#endif  // LOCFISHER_LINALG_HPP
