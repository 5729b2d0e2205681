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

#include "locfisher/dynamics.hpp"

#include <sstream>

#include "locfisher/linalg.hpp"

namespace locfisher::dynamics {

ComplexMatrix HamiltonianFamily::operator()(double g) const {
  if (!builder) throw InvalidInput("HamiltonianFamily: no builder configured");
  ComplexMatrix h = builder(g);
  if (h.rows() != dim || h.cols() != dim)
    throw InvalidInput("HamiltonianFamily: builder dim mismatch");
  if (hermitian && !linalg::is_hermitian(h))
    throw InvalidInput("HamiltonianFamily: Hermitian-flagged family returned a non-Hermitian matrix");
  return h;
}

ComplexMatrix vec(const ComplexMatrix& x) {
  ComplexMatrix out(x.size(), 1);
  // Column-major storage matches the column-stacking convention.
  Eigen::Map<const ComplexVector> flat(x.data(), x.size());
  out.col(0) = flat;
  return out;
}

ComplexMatrix unvec(const ComplexMatrix& v, int dim) {
  if (v.rows() != static_cast<Eigen::Index>(dim) * dim || v.cols() != 1)
    throw InvalidInput("unvec: vector length must be dim^2");
  ComplexMatrix out(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) out(i, j) = v(j * dim + i, 0);
  return out;
}

ComplexMatrix sandwich_superoperator(const ComplexMatrix& a,
                                     const ComplexMatrix& b) {
  return linalg::tensor(b.conjugate(), a);
}

ComplexMatrix choi_matrix(const ComplexMatrix& superop, int dim) {
  if (superop.rows() != static_cast<Eigen::Index>(dim) * dim ||
      superop.cols() != static_cast<Eigen::Index>(dim) * dim)
    throw InvalidInput("choi_matrix: superoperator dim mismatch");
  ComplexMatrix choi(dim * dim, dim * dim);
  // Choi[(i,k),(j,l)] = <k| Gamma[|i><j|] |l>.
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j)
        for (int l = 0; l < dim; ++l)
          choi(i * dim + k, j * dim + l) = superop(l * dim + k, j * dim + i);
  return choi;
}

QuantumChannel::QuantumChannel(ComplexMatrix superop, int dim, double choi_min)
    : superop_(std::move(superop)), dim_(dim), choi_min_eigenvalue_(choi_min) {}

QuantumChannel QuantumChannel::from_superoperator(ComplexMatrix superop,
                                                  int dim) {
  const ComplexMatrix choi = choi_matrix(superop, dim);
  const linalg::EigResult eig = linalg::hermitian_eig(choi);
  const double min_eig = eig.values(eig.values.size() - 1);
  const double scale = std::max(1.0, eig.values(0));
  if (min_eig < -kChoiTolerance * scale) {
    std::ostringstream msg;
    msg << "QuantumChannel: Choi matrix not positive, min eigenvalue = "
        << min_eig;
    throw NumericError(msg.str());
  }
  // Trace non-increasing <=> dual image of identity <= 1.
  const ComplexMatrix dual_id =
      unvec(superop.adjoint() *
                vec(ComplexMatrix::Identity(dim, dim)),
            dim);
  const linalg::EigResult dual = linalg::hermitian_eig(dual_id);
  if (dual.values(0) > 1.0 + 1e-8) {
    std::ostringstream msg;
    msg << "QuantumChannel: trace-increasing map, |Gamma^dag[1]| = "
        << dual.values(0);
    throw NumericError(msg.str());
  }
  return QuantumChannel(std::move(superop), dim, min_eig);
}

QuantumChannel QuantumChannel::from_kraus(const ComplexMatrix& k) {
  if (k.rows() != k.cols()) throw InvalidInput("from_kraus: matrix must be square");
  return from_superoperator(sandwich_superoperator(k, k),
                            static_cast<int>(k.rows()));
}

QuantumChannel QuantumChannel::from_unitary(const HamiltonianFamily& h_full,
                                            const states::SubspaceProjector& p,
                                            double g, double t) {
  if (!h_full.hermitian)
    throw InvalidInput("from_unitary: full-space Hamiltonian must be Hermitian");
  if (h_full.dim != p.full_dim())
    throw InvalidInput("from_unitary: Hamiltonian/projector dim mismatch");
  const ComplexMatrix u =
      linalg::matrix_exp(-kImaginaryUnit * t * h_full(g));
  // Compression of U between the M bases: single Kraus operator.
  const ComplexMatrix k = p.isometry().adjoint() * u * p.isometry();
  return from_kraus(k);
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_)
    throw InvalidInput("QuantumChannel::apply: dimension mismatch");
  return unvec(superop_ * vec(x), dim_);
}

ComplexMatrix QuantumChannel::tensor_apply(int k, const ComplexMatrix& x) const {
  if (k < 1) throw InvalidInput("tensor_apply: need k >= 1");
  long total = 1;
  for (int i = 0; i < k; ++i) total *= dim_;
  if (x.rows() != total || x.cols() != total)
    throw InvalidInput("tensor_apply: operand dim mismatch");
  const std::vector<int> dims(static_cast<std::size_t>(k), dim_);
  ComplexMatrix out = x;
  for (int slot = 0; slot < k; ++slot)
    out = linalg::apply_superop_to_slot(out, dims, slot, superop_);
  return out;
}

LindbladGenerator LindbladGenerator::from_effective_hamiltonian(
    const ComplexMatrix& h) {
  if (h.rows() != h.cols())
    throw InvalidInput("LindbladGenerator: matrix must be square");
  const int d = static_cast<int>(h.rows());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  LindbladGenerator out;
  out.dim = d;
  // T[X] = -i(H X - X H^dag) = -i(1 (x)_sandwich H) + i(H (x)_sandwich 1).
  out.superop = -kImaginaryUnit * sandwich_superoperator(h, id) +
                kImaginaryUnit * sandwich_superoperator(id, h);
  return out;
}

ComplexMatrix LindbladGenerator::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim || x.cols() != dim)
    throw InvalidInput("LindbladGenerator::apply: dimension mismatch");
  return unvec(superop * vec(x), dim);
}

QuantumChannel channel_from_lindblad(const LindbladGenerator& generator,
                                     double t) {
  if (t < 0.0) throw InvalidInput("channel_from_lindblad: need t >= 0");
  return QuantumChannel::from_superoperator(
      linalg::matrix_exp(t * generator.superop), generator.dim);
}

states::DensityOperator evolve_nonhermitian(const HamiltonianFamily& h,
                                            const states::DensityOperator& rho0,
                                            double g, double t) {
  if (t < 0.0) throw InvalidInput("evolve_nonhermitian: need t >= 0");
  if (rho0.dim() != h.dim)
    throw InvalidInput("evolve_nonhermitian: state/Hamiltonian dim mismatch");
  const ComplexMatrix u = linalg::matrix_exp(-kImaginaryUnit * t * h(g));
  ComplexMatrix rho = u * rho0.matrix() * u.adjoint();
  const double tr = rho.trace().real();
  if (tr > 1.0 + 1e-6) {
    std::ostringstream msg;
    msg << "evolve_nonhermitian: trace grew to " << tr
        << " (non-dissipative effective Hamiltonian)";
    throw NumericError(msg.str());
  }
  return states::DensityOperator(std::move(rho),
                                 states::TraceClass::Subnormalized);
}

ComplexVector evolve_state(const HamiltonianFamily& h,
                           const ComplexVector& psi0, double g, double t) {
  if (psi0.size() != h.dim)
    throw InvalidInput("evolve_state: state/Hamiltonian dim mismatch");
  return linalg::matrix_exp(-kImaginaryUnit * t * h(g)) * psi0;
}

}  // namespace locfisher::dynamics
