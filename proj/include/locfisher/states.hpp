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

#ifndef LOCFISHER_STATES_HPP
#define LOCFISHER_STATES_HPP

#include <map>
#include <vector>

#include "locfisher/linalg.hpp"
#include "locfisher/types.hpp"

// Density operators, subspace compression, the blank-state extension that
// makes restricted descriptions unit-trace, and the block-structured local
// density operator of a composite system. The blank basis vector is always
// the LAST index of an extended space.
namespace locfisher::states {

enum class TraceClass { Normalized, Subnormalized };

inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-9;
// Compressions with trace at or below this are outside the valid time
// domain (the t = t_* regime) and are rejected.
inline constexpr double kTraceFloor = 1e-12;

class DensityOperator {
 public:
  // Validates Hermiticity, positivity (min eigenvalue >= -1e-10) and the
  // trace constraint of the declared class.
  DensityOperator(ComplexMatrix matrix, TraceClass trace_class);

  const ComplexMatrix& matrix() const { return matrix_; }
  TraceClass trace_class() const { return trace_class_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  double trace() const { return matrix_.trace().real(); }

  static DensityOperator from_pure(const ComplexVector& psi,
                                   TraceClass trace_class);

 private:
  ComplexMatrix matrix_;
  TraceClass trace_class_;
};

// Orthogonal projector P onto the accessible subspace M, held as the
// isometry V (full_dim x rank, orthonormal columns) with P = V V^dag.
class SubspaceProjector {
 public:
  static SubspaceProjector from_basis(ComplexMatrix basis_columns);
  // Coordinate subspace spanned by the first `rank` basis vectors.
  static SubspaceProjector leading(int full_dim, int rank);

  int full_dim() const { return static_cast<int>(isometry_.rows()); }
  int rank() const { return static_cast<int>(isometry_.cols()); }
  const ComplexMatrix& isometry() const { return isometry_; }
  ComplexMatrix projector() const { return isometry_ * isometry_.adjoint(); }
  ComplexMatrix complement() const;  // 1 - P

  // V^dag M V : full-space operator compressed to the M basis.
  ComplexMatrix compress(const ComplexMatrix& full) const;
  // V M V^dag : M-space operator embedded into the full space.
  ComplexMatrix embed(const ComplexMatrix& sub) const;

 private:
  explicit SubspaceProjector(ComplexMatrix isometry)
      : isometry_(std::move(isometry)) {}
  ComplexMatrix isometry_;
};

// Unit-trace state on M + C|B>: the accessible block plus the weight that
// has leaked out of M, carried by the blank vector.
struct BlankExtendedState {
  DensityOperator accessible_block;  // Subnormalized, on M
  double blank_weight = 0.0;

  int local_dim() const { return accessible_block.dim(); }
  // (d+1) x (d+1) matrix, blank index last.
  ComplexMatrix extended_matrix() const;
};

// Local estimator A~ = A_par + a_perp |B><B|; the only observables a
// subspace-restricted experimenter can measure.
struct LocalEstimator {
  ComplexMatrix accessible_block;  // Hermitian, on M
  double blank_value = 0.0;

  ComplexMatrix extended_matrix() const;
};

// Sum of weighted products of per-site local estimators (the composite
// available observables).
struct ProductEstimatorTerm {
  double weight = 1.0;
  std::vector<LocalEstimator> factors;
};
using CompositeEstimator = std::vector<ProductEstimatorTerm>;

// Block-diagonal local density operator of an N-fold composite: one positive
// block per blank pattern. Key bit k set <=> subsystem k+1 is blank; the
// block for a pattern with n blanks acts on M^(N-n) (kept slots in order).
// Only the 2^N diagonal blocks are stored; the full (d+1)^N matrix can be
// reconstructed for cross-checks at small N.
struct CompositeLocalState {
  int n_subsystems = 0;
  int local_dim = 0;
  std::map<unsigned, ComplexMatrix> blocks;

  double total_trace() const;
  ComplexMatrix to_dense() const;
};

// P rho P compressed to the rank(P)-dimensional basis of M (subnormalized).
// Rejects compressions with trace <= kTraceFloor.
DensityOperator project_accessible(const DensityOperator& rho_tot,
                                   const SubspaceProjector& p);

// Unit-trace extension of a subnormalized state by the blank vector.
BlankExtendedState extend_with_blank(const DensityOperator& rho_par);

// Extracts all 2^N blank-pattern blocks of the composite local state from a
// full-space density operator on H^N.
CompositeLocalState composite_local_state(const DensityOperator& rho_tot,
                                          const SubspaceProjector& p, int n);

double expectation(const BlankExtendedState& state, const LocalEstimator& est);
double expectation(const CompositeLocalState& state,
                   const CompositeEstimator& est);

// Helpers used by pattern enumeration everywhere a blank mask appears.
int popcount(unsigned mask);
std::vector<int> mask_to_indices(unsigned mask, int n);

}  // namespace locfisher::states

#endif  // LOCFISHER_STATES_HPP
