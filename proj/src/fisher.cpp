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

#include "locfisher/fisher.hpp"

#include <cmath>
#include <sstream>

#include "locfisher/linalg.hpp"
#include "locfisher/numerics.hpp"

namespace locfisher::fisher {

namespace {

// Shared core of fisher_info / local_fisher: SLD, the two terms of the
// information, the extended SLD and the bound-attaining estimator.
FisherReport build_report(const ComplexMatrix& rho, const ComplexMatrix& drho,
                          bool allow_blank) {
  const linalg::SldResult sld = linalg::solve_sld(rho, drho);
  if (!sld.consistent) {
    std::ostringstream msg;
    msg << "fisher: derivative has kernel-to-kernel components (max "
        << sld.kernel_residual << ") no SLD can reproduce";
    throw InvalidInput(msg.str());
  }
  FisherReport report;
  report.sld = sld.sld;
  report.support_rank = sld.support_rank;
  report.accessible_term = (sld.sld * rho * sld.sld).trace().real();
  report.sld_trace = (sld.sld * rho).trace().real();

  const double trace_deficit = 1.0 - rho.trace().real();
  double blank_entry = 0.0;
  if (!allow_blank) {
    report.blank_term = 0.0;
  } else if (trace_deficit < kBlankEpsilon) {
    report.flags.insert(FisherFlag::NearUnitTrace);
    if (std::abs(report.sld_trace) < std::sqrt(kBlankEpsilon)) {
      report.blank_term = 0.0;
      report.flags.insert(FisherFlag::BlankTermDropped);
    } else {
      std::ostringstream msg;
      msg << "local_fisher: unit-trace family with Tr[L rho] = "
          << report.sld_trace << "; derivative inconsistent";
      throw InvalidInput(msg.str());
    }
  } else {
    report.blank_term =
        report.sld_trace * report.sld_trace / trace_deficit;
    blank_entry = -report.sld_trace / trace_deficit;
  }
  report.value = report.accessible_term + report.blank_term;

  const int d = static_cast<int>(rho.rows());
  report.sld_extended = ComplexMatrix::Zero(d + 1, d + 1);
  report.sld_extended.topLeftCorner(d, d) = report.sld;
  report.sld_extended(d, d) = blank_entry;
  report.optimal_estimator = LocalEstimator{report.sld, blank_entry};
  return report;
}

}  // namespace

FisherReport fisher_info(const states::DensityOperator& rho,
                         const ComplexMatrix& drho) {
  if (rho.trace_class() != states::TraceClass::Normalized)
    throw InvalidInput("fisher_info: expects a normalized family");
  const double dtrace = drho.trace().real();
  if (std::abs(dtrace) > 1e-8) {
    std::ostringstream msg;
    msg << "fisher_info: Tr[drho] = " << dtrace
        << " != 0; use local_fisher for trace-leaking families";
    throw InvalidInput(msg.str());
  }
  return build_report(rho.matrix(), drho, /*allow_blank=*/false);
}

FisherReport local_fisher(const states::DensityOperator& rho_par,
                          const ComplexMatrix& drho_par) {
  return build_report(rho_par.matrix(), drho_par, /*allow_blank=*/true);
}

LocalEstimator alternative_optimal_estimator(const FisherReport& report) {
  const int d = static_cast<int>(report.sld.rows());
  const double shift = -report.optimal_estimator.blank_value;
  return LocalEstimator{
      report.sld + shift * ComplexMatrix::Identity(d, d), 0.0};
}

PureFisherTerms pure_state_fisher_terms(const ComplexVector& psi,
                                        const ComplexVector& dpsi) {
  if (psi.size() != dpsi.size())
    throw InvalidInput("pure_state_fisher: psi/dpsi dim mismatch");
  const double norm2 = psi.squaredNorm();
  if (norm2 <= 0.0) throw InvalidInput("pure_state_fisher: zero-norm state");
  if (norm2 > 1.0 + states::kTraceTolerance)
    throw InvalidInput("pure_state_fisher: norm above 1");
  const Complex overlap = psi.dot(dpsi);  // <psi|dpsi>
  PureFisherTerms out;
  out.gradient_term =
      4.0 * (dpsi.squaredNorm() -
             overlap.imag() * overlap.imag() / norm2);
  const double deficit = 1.0 - norm2;
  const double numerator = overlap.real();
  if (deficit < kBlankEpsilon) {
    out.flags.insert(FisherFlag::NearUnitTrace);
    // Same guarded rule as local_fisher; Tr[d rho] = 2 Re<psi|dpsi>.
    if (std::abs(2.0 * numerator) < std::sqrt(kBlankEpsilon)) {
      out.blank_term = 0.0;
      out.flags.insert(FisherFlag::BlankTermDropped);
    } else {
      throw InvalidInput(
          "pure_state_fisher: unit-norm family with Re<psi|dpsi> != 0");
    }
  } else {
    out.blank_term = 4.0 * numerator * numerator / deficit;
  }
  out.value = out.gradient_term + out.blank_term;
  return out;
}

double pure_state_fisher(const ComplexVector& psi, const ComplexVector& dpsi) {
  return pure_state_fisher_terms(psi, dpsi).value;
}

ComplexMatrix StateFamily::accessible_derivative(double g) const {
  if (analytic_accessible_derivative) return analytic_accessible_derivative(g);
  // The derivative of a Hermitian family is Hermitian; differencing divides
  // roundoff asymmetry by h, so symmetrize the result.
  return linalg::hermitian_part(numerics::richardson_derivative(
      [this](double gv) -> ComplexMatrix {
        return eval(gv).accessible_block.matrix();
      },
      g));
}

FisherReport StateFamily::local_fisher_at(double g) const {
  return local_fisher(eval(g).accessible_block, accessible_derivative(g));
}

ErrorReport expected_error(const StateFamily& family,
                           const LocalEstimator& estimator, double g) {
  const states::BlankExtendedState state = family.eval(g);
  const double mean = states::expectation(state, estimator);
  const ComplexMatrix ext = estimator.extended_matrix();
  const double second_moment =
      (state.extended_matrix() * ext * ext).trace().real();
  const double variance = second_moment - mean * mean;
  const double sensitivity = numerics::richardson_derivative(
      [&](double gv) { return states::expectation(family.eval(gv), estimator); },
      g);
  if (std::abs(sensitivity) < kSensitivityEpsilon) {
    std::ostringstream msg;
    msg << "expected_error: estimator insensitive (|dE/dg| = "
        << std::abs(sensitivity) << "); no finite error exists";
    throw InvalidInput(msg.str());
  }
  ErrorReport out;
  out.variance = variance;
  out.sensitivity = sensitivity;
  out.delta_g = std::sqrt(std::max(variance, 0.0)) / std::abs(sensitivity);
  return out;
}

AffineCalibration calibrate_linear(const StateFamily& family,
                                   const LocalEstimator& estimator,
                                   double g0) {
  const double mean0 = states::expectation(family.eval(g0), estimator);
  const double slope = numerics::richardson_derivative(
      [&](double gv) { return states::expectation(family.eval(gv), estimator); },
      g0);
  if (std::abs(slope) < kSensitivityEpsilon)
    throw InvalidInput("calibrate_linear: estimator insensitive at g0");
  return AffineCalibration{1.0 / slope, g0 - mean0 / slope};
}

ComplexMatrix nsample_sld(const ComplexMatrix& l_single, int n) {
  if (n < 1) throw InvalidInput("nsample_sld: need n >= 1");
  if (l_single.rows() != l_single.cols())
    throw InvalidInput("nsample_sld: matrix must be square");
  const long dim_n = static_cast<long>(
      std::llround(std::pow(static_cast<double>(l_single.rows()), n)));
  ComplexMatrix out = ComplexMatrix::Zero(dim_n, dim_n);
  for (int site = 0; site < n; ++site)
    out += linalg::embed_at(l_single, n, site);
  return out;
}

}  // namespace locfisher::fisher
