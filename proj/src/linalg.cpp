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

#include "locfisher/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace locfisher::linalg {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return hermiticity_error(m) <= tolerance * std::max(1.0, max_abs(m));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) / 2.0;
}

EigResult hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw InvalidInput("hermitian_eig: matrix must be square");
  if (!is_hermitian(m)) {
    std::ostringstream msg;
    msg << "hermitian_eig: input not Hermitian, |M - M^dag|_max = "
        << hermiticity_error(m);
    throw InvalidInput(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success)
    throw NumericError("hermitian_eig: eigensolver failed to converge");
  // Eigen returns ascending order; flip to descending.
  EigResult out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SldResult solve_sld(const ComplexMatrix& rho, const ComplexMatrix& drho,
                    const SldOptions& options) {
  if (rho.rows() != rho.cols() || drho.rows() != drho.cols() ||
      rho.rows() != drho.rows())
    throw InvalidInput("solve_sld: rho and drho must be square, same dim");
  if (!is_hermitian(drho))
    throw InvalidInput("solve_sld: drho must be Hermitian");
  const EigResult eig = hermitian_eig(rho);
  const int n = static_cast<int>(rho.rows());
  const double lambda_max = std::max(eig.values(0), 0.0);
  const double cutoff = options.support_cutoff_relative * lambda_max;

  ComplexMatrix d_in_basis = eig.vectors.adjoint() * drho * eig.vectors;
  ComplexMatrix l_in_basis = ComplexMatrix::Zero(n, n);
  int support_rank = 0;
  for (int i = 0; i < n; ++i)
    if (eig.values(i) > cutoff) ++support_rank;

  double kernel_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = eig.values(i) + eig.values(j);
      if (s > cutoff) {
        l_in_basis(i, j) = 2.0 * d_in_basis(i, j) / s;
      } else {
        kernel_residual = std::max(kernel_residual, std::abs(d_in_basis(i, j)));
      }
    }
  }
  SldResult out;
  out.sld = hermitian_part(eig.vectors * l_in_basis * eig.vectors.adjoint());
  out.support_rank = support_rank;
  out.kernel_residual = kernel_residual;
  out.consistent = kernel_residual <= options.kernel_consistency_tolerance *
                                          std::max(1.0, max_abs(drho));
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, int k) {
  if (k < 0) throw InvalidInput("kron_power: negative power");
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (int i = 0; i < k; ++i) out = tensor(out, a);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<int>& dims,
                            const std::vector<int>& traced) {
  const int n_slots = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidInput("partial_trace: subsystem dims must be >= 1");
    total *= d;
  }
  if (m.rows() != total || m.cols() != total)
    throw InvalidInput("partial_trace: matrix dim does not match product of subsystem dims");
  std::vector<bool> is_traced(n_slots, false);
  for (int t : traced) {
    if (t < 0 || t >= n_slots)
      throw InvalidInput("partial_trace: traced index out of range");
    is_traced[t] = true;
  }
  std::vector<int> kept;
  for (int i = 0; i < n_slots; ++i)
    if (!is_traced[i]) kept.push_back(i);

  long kept_dim = 1;
  for (int i : kept) kept_dim *= dims[i];
  long traced_dim = total / kept_dim;

  // Strides of each slot in the row-major flattened index.
  std::vector<long> stride(n_slots, 1);
  for (int i = n_slots - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  // Offsets contributed by kept and traced multi-indices.
  std::vector<long> kept_offsets(kept_dim, 0);
  {
    std::vector<int> idx(kept.size(), 0);
    for (long c = 0; c < kept_dim; ++c) {
      long off = 0;
      for (std::size_t s = 0; s < kept.size(); ++s) off += idx[s] * stride[kept[s]];
      kept_offsets[c] = off;
      for (int s = static_cast<int>(kept.size()) - 1; s >= 0; --s) {
        if (++idx[s] < dims[kept[s]]) break;
        idx[s] = 0;
      }
    }
  }
  std::vector<long> traced_offsets(traced_dim, 0);
  {
    std::vector<int> tr;
    for (int i = 0; i < n_slots; ++i)
      if (is_traced[i]) tr.push_back(i);
    std::vector<int> idx(tr.size(), 0);
    for (long c = 0; c < traced_dim; ++c) {
      long off = 0;
      for (std::size_t s = 0; s < tr.size(); ++s) off += idx[s] * stride[tr[s]];
      traced_offsets[c] = off;
      for (int s = static_cast<int>(tr.size()) - 1; s >= 0; --s) {
        if (++idx[s] < dims[tr[s]]) break;
        idx[s] = 0;
      }
    }
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (long r = 0; r < kept_dim; ++r)
    for (long c = 0; c < kept_dim; ++c) {
      Complex sum = 0.0;
      for (long t = 0; t < traced_dim; ++t)
        sum += m(kept_offsets[r] + traced_offsets[t],
                 kept_offsets[c] + traced_offsets[t]);
      out(r, c) = sum;
    }
  return out;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix_exp: matrix must be square");
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(norm) || norm > 500.0) {
    std::ostringstream msg;
    msg << "matrix_exp: norm overflow, |M|_inf = " << norm;
    throw NumericError(msg.str());
  }
  return m.exp();
}

std::vector<ComplexMatrix> hermitian_basis(int dim) {
  if (dim < 1) throw InvalidInput("hermitian_basis: dim must be >= 1");
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim);
  // Symmetric pairs E_ab + E_ba, a < b.
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
      e(a, b) = 1.0;
      e(b, a) = 1.0;
      basis.push_back(e);
    }
  // Antisymmetric pairs i(E_ba - E_ab), a < b (dim 2 gives sigma_y).
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
      e(a, b) = -kImaginaryUnit;
      e(b, a) = kImaginaryUnit;
      basis.push_back(e);
    }
  // Diagonal traceless ladder, Tr[e^2] = 2.
  for (int l = 1; l < dim; ++l) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    const double f = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    for (int j = 0; j < l; ++j) e(j, j) = f;
    e(l, l) = -f * l;
    basis.push_back(e);
  }
  // Scaled identity, Tr[e^2] = 2.
  basis.push_back(std::sqrt(2.0 / dim) * ComplexMatrix::Identity(dim, dim));
  return basis;
}

ComplexMatrix clip_negative_eigenvalues(const ComplexMatrix& m,
                                        double clip_tolerance,
                                        double error_tolerance) {
  const EigResult eig = hermitian_eig(m);
  const int n = static_cast<int>(m.rows());
  bool clipped = false;
  RealVector values = eig.values;
  for (int i = 0; i < n; ++i) {
    if (values(i) < -error_tolerance) {
      std::ostringstream msg;
      msg << "clip_negative_eigenvalues: eigenvalue " << values(i)
          << " below -" << error_tolerance << " (implementation bug)";
      throw NumericError(msg.str());
    }
    if (values(i) < -clip_tolerance) {
      std::ostringstream msg;
      msg << "clip_negative_eigenvalues: eigenvalue " << values(i)
          << " beyond the clip band -" << clip_tolerance;
      throw NumericError(msg.str());
    }
    if (values(i) < 0.0) {
      values(i) = 0.0;
      clipped = true;
    }
  }
  if (!clipped) return m;
  return eig.vectors * values.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

ComplexMatrix embed_at(const ComplexMatrix& op, int n_slots, int slot) {
  if (slot < 0 || slot >= n_slots) throw InvalidInput("embed_at: slot out of range");
  const int d = static_cast<int>(op.rows());
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (int i = 0; i < n_slots; ++i)
    out = tensor(out, i == slot ? op : ComplexMatrix::Identity(d, d));
  return out;
}

ComplexMatrix apply_superop_to_slot(const ComplexMatrix& x,
                                    const std::vector<int>& dims, int slot,
                                    const ComplexMatrix& superop) {
  const int n_slots = static_cast<int>(dims.size());
  if (slot < 0 || slot >= n_slots)
    throw InvalidInput("apply_superop_to_slot: slot out of range");
  const int ds = dims[slot];
  if (superop.rows() != ds * ds || superop.cols() != ds * ds)
    throw InvalidInput("apply_superop_to_slot: superoperator dim mismatch");
  long left = 1, right = 1;
  for (int i = 0; i < slot; ++i) left *= dims[i];
  for (int i = slot + 1; i < n_slots; ++i) right *= dims[i];
  const long total = left * ds * right;
  if (x.rows() != total || x.cols() != total)
    throw InvalidInput("apply_superop_to_slot: operand dim mismatch");

  const auto vec_index = [ds](int row, int col) { return col * ds + row; };
  ComplexMatrix out(total, total);
  ComplexMatrix slot_in(ds, ds), slot_out(ds, ds);
  for (long il = 0; il < left; ++il)
    for (long ir = 0; ir < right; ++ir)
      for (long jl = 0; jl < left; ++jl)
        for (long jr = 0; jr < right; ++jr) {
          for (int a = 0; a < ds; ++a)
            for (int b = 0; b < ds; ++b)
              slot_in(a, b) = x((il * ds + a) * right + ir,
                                (jl * ds + b) * right + jr);
          for (int a = 0; a < ds; ++a)
            for (int b = 0; b < ds; ++b) {
              Complex sum = 0.0;
              for (int c = 0; c < ds; ++c)
                for (int d2 = 0; d2 < ds; ++d2)
                  sum += superop(vec_index(a, b), vec_index(c, d2)) *
                         slot_in(c, d2);
              slot_out(a, b) = sum;
            }
          for (int a = 0; a < ds; ++a)
            for (int b = 0; b < ds; ++b)
              out((il * ds + a) * right + ir, (jl * ds + b) * right + jr) =
                  slot_out(a, b);
        }
  return out;
}

}  // namespace locfisher::linalg
