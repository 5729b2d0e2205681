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

#include "locfisher/states.hpp"

#include <bit>
#include <sstream>

namespace locfisher::states {

namespace {

void check_positivity(const ComplexMatrix& m, const char* who) {
  const linalg::EigResult eig = linalg::hermitian_eig(m);
  const double min_eig = eig.values(eig.values.size() - 1);
  if (min_eig < -kPositivityTolerance) {
    std::ostringstream msg;
    msg << who << ": matrix not positive semidefinite, min eigenvalue = "
        << min_eig;
    throw InvalidInput(msg.str());
  }
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix, TraceClass trace_class)
    : matrix_(std::move(matrix)), trace_class_(trace_class) {
  if (matrix_.rows() != matrix_.cols())
    throw InvalidInput("DensityOperator: matrix must be square");
  if (!linalg::is_hermitian(matrix_))
    throw InvalidInput("DensityOperator: matrix must be Hermitian");
  check_positivity(matrix_, "DensityOperator");
  const double tr = matrix_.trace().real();
  if (trace_class_ == TraceClass::Normalized) {
    if (std::abs(tr - 1.0) > kTraceTolerance) {
      std::ostringstream msg;
      msg << "DensityOperator: normalized state must have unit trace, got "
          << tr;
      throw InvalidInput(msg.str());
    }
  } else {
    if (!(tr > 0.0) || tr > 1.0 + kTraceTolerance) {
      std::ostringstream msg;
      msg << "DensityOperator: subnormalized trace must lie in (0, 1], got "
          << tr;
      throw InvalidInput(msg.str());
    }
  }
}

DensityOperator DensityOperator::from_pure(const ComplexVector& psi,
                                           TraceClass trace_class) {
  return DensityOperator(psi * psi.adjoint(), trace_class);
}

SubspaceProjector SubspaceProjector::from_basis(ComplexMatrix basis_columns) {
  if (basis_columns.cols() < 1 || basis_columns.cols() > basis_columns.rows())
    throw InvalidInput("SubspaceProjector: need 1 <= rank <= full_dim");
  const ComplexMatrix gram =
      basis_columns.adjoint() * basis_columns -
      ComplexMatrix::Identity(basis_columns.cols(), basis_columns.cols());
  if (linalg::max_abs(gram) > 1e-10)
    throw InvalidInput("SubspaceProjector: basis columns must be orthonormal");
  return SubspaceProjector(std::move(basis_columns));
}

SubspaceProjector SubspaceProjector::leading(int full_dim, int rank) {
  if (rank < 1 || rank > full_dim)
    throw InvalidInput("SubspaceProjector: need 1 <= rank <= full_dim");
  return SubspaceProjector(
      ComplexMatrix::Identity(full_dim, full_dim).leftCols(rank));
}

ComplexMatrix SubspaceProjector::complement() const {
  return ComplexMatrix::Identity(full_dim(), full_dim()) - projector();
}

ComplexMatrix SubspaceProjector::compress(const ComplexMatrix& full) const {
  if (full.rows() != full_dim() || full.cols() != full_dim())
    throw InvalidInput("SubspaceProjector::compress: dimension mismatch");
  return isometry_.adjoint() * full * isometry_;
}

ComplexMatrix SubspaceProjector::embed(const ComplexMatrix& sub) const {
  if (sub.rows() != rank() || sub.cols() != rank())
    throw InvalidInput("SubspaceProjector::embed: dimension mismatch");
  return isometry_ * sub * isometry_.adjoint();
}

ComplexMatrix BlankExtendedState::extended_matrix() const {
  const int d = local_dim();
  ComplexMatrix out = ComplexMatrix::Zero(d + 1, d + 1);
  out.topLeftCorner(d, d) = accessible_block.matrix();
  out(d, d) = blank_weight;
  return out;
}

ComplexMatrix LocalEstimator::extended_matrix() const {
  const int d = static_cast<int>(accessible_block.rows());
  ComplexMatrix out = ComplexMatrix::Zero(d + 1, d + 1);
  out.topLeftCorner(d, d) = accessible_block;
  out(d, d) = blank_value;
  return out;
}

double CompositeLocalState::total_trace() const {
  double sum = 0.0;
  for (const auto& [mask, block] : blocks) sum += block.trace().real();
  return sum;
}

ComplexMatrix CompositeLocalState::to_dense() const {
  const int d = local_dim;
  const int de = d + 1;
  long dim = 1;
  for (int i = 0; i < n_subsystems; ++i) dim *= de;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  // Extended index of a kept multi-index interleaved with blanks (index d).
  for (const auto& [mask, block] : blocks) {
    const int kept = n_subsystems - popcount(mask);
    long kept_dim = 1;
    for (int i = 0; i < kept; ++i) kept_dim *= d;
    for (long r = 0; r < kept_dim; ++r)
      for (long c = 0; c < kept_dim; ++c) {
        long row = 0, col = 0;
        long rr = r, cc = c;
        // Recover per-slot digits (kept slots in order, row-major).
        std::vector<int> rdig(kept, 0), cdig(kept, 0);
        for (int s = kept - 1; s >= 0; --s) {
          rdig[s] = static_cast<int>(rr % d);
          rr /= d;
          cdig[s] = static_cast<int>(cc % d);
          cc /= d;
        }
        int k = 0;
        for (int s = 0; s < n_subsystems; ++s) {
          const bool blank = (mask >> s) & 1u;
          row = row * de + (blank ? d : rdig[k]);
          col = col * de + (blank ? d : cdig[k]);
          if (!blank) ++k;
        }
        out(row, col) = block(r, c);
      }
  }
  return out;
}

DensityOperator project_accessible(const DensityOperator& rho_tot,
                                   const SubspaceProjector& p) {
  if (rho_tot.dim() != p.full_dim())
    throw InvalidInput("project_accessible: dimension mismatch");
  ComplexMatrix compressed = p.compress(rho_tot.matrix());
  const double tr = compressed.trace().real();
  if (tr <= kTraceFloor) {
    std::ostringstream msg;
    msg << "project_accessible: accessible trace " << tr
        << " at or below the t_* floor " << kTraceFloor;
    throw NumericError(msg.str());
  }
  return DensityOperator(std::move(compressed), TraceClass::Subnormalized);
}

BlankExtendedState extend_with_blank(const DensityOperator& rho_par) {
  if (rho_par.trace_class() != TraceClass::Subnormalized)
    throw InvalidInput("extend_with_blank: expects a subnormalized state");
  double weight = 1.0 - rho_par.trace();
  if (weight < 0.0) weight = 0.0;  // trace within tolerance above 1
  return BlankExtendedState{rho_par, weight};
}

CompositeLocalState composite_local_state(const DensityOperator& rho_tot,
                                          const SubspaceProjector& p, int n) {
  if (n < 1) throw InvalidInput("composite_local_state: need n >= 1");
  long full = 1;
  for (int i = 0; i < n; ++i) full *= p.full_dim();
  if (rho_tot.dim() != full)
    throw InvalidInput("composite_local_state: dimension mismatch");

  const ComplexMatrix q = p.complement();
  CompositeLocalState out;
  out.n_subsystems = n;
  out.local_dim = p.rank();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    // Sandwich W rho W^dag with W = (x) over slots of (Q on blank slots,
    // V^dag on kept slots), then trace out the blank slots.
    ComplexMatrix w = ComplexMatrix::Ones(1, 1);
    std::vector<int> sandwich_dims;
    std::vector<int> traced;
    for (int k = 0; k < n; ++k) {
      const bool blank = (mask >> k) & 1u;
      w = linalg::tensor(w, blank ? q : ComplexMatrix(p.isometry().adjoint()));
      sandwich_dims.push_back(blank ? p.full_dim() : p.rank());
      if (blank) traced.push_back(k);
    }
    ComplexMatrix sandwiched = w * rho_tot.matrix() * w.adjoint();
    out.blocks[mask] =
        linalg::partial_trace(sandwiched, sandwich_dims, traced);
  }
  return out;
}

double expectation(const BlankExtendedState& state, const LocalEstimator& est) {
  if (est.accessible_block.rows() != state.local_dim())
    throw InvalidInput("expectation: estimator dimension mismatch");
  if (!linalg::is_hermitian(est.accessible_block))
    throw InvalidInput("expectation: estimator must be Hermitian");
  return (state.accessible_block.matrix() * est.accessible_block)
             .trace()
             .real() +
         state.blank_weight * est.blank_value;
}

double expectation(const CompositeLocalState& state,
                   const CompositeEstimator& est) {
  double total = 0.0;
  for (const auto& term : est) {
    if (static_cast<int>(term.factors.size()) != state.n_subsystems)
      throw InvalidInput("expectation: estimator arity mismatch");
    for (const auto& f : term.factors)
      if (!linalg::is_hermitian(f.accessible_block))
        throw InvalidInput("expectation: estimator must be Hermitian");
    double term_value = 0.0;
    for (const auto& [mask, block] : state.blocks) {
      // Blank slots contribute their scalar a_perp; kept slots the tensor
      // product of accessible blocks traced against the block.
      double blank_factor = 1.0;
      ComplexMatrix kept = ComplexMatrix::Ones(1, 1);
      for (int k = 0; k < state.n_subsystems; ++k) {
        if ((mask >> k) & 1u)
          blank_factor *= term.factors[k].blank_value;
        else
          kept = linalg::tensor(kept, term.factors[k].accessible_block);
      }
      term_value += blank_factor * (block * kept).trace().real();
    }
    total += term.weight * term_value;
  }
  return total;
}

int popcount(unsigned mask) { return std::popcount(mask); }

std::vector<int> mask_to_indices(unsigned mask, int n) {
  std::vector<int> out;
  for (int k = 0; k < n; ++k)
    if ((mask >> k) & 1u) out.push_back(k);
  return out;
}

}  // namespace locfisher::states
