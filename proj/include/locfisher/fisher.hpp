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

#ifndef LOCFISHER_FISHER_HPP
#define LOCFISHER_FISHER_HPP

#include <functional>
#include <set>

#include "locfisher/states.hpp"
#include "locfisher/types.hpp"

// Single-system information functionals: Fisher information of normalized
// families, local Fisher information of subnormalized (subspace-restricted)
// families including the blank term, the unnormalized pure-state formula,
// expected errors of arbitrary biased estimators, and construction of the
// estimators that attain the Cramer-Rao bound.
namespace locfisher::fisher {

using states::LocalEstimator;

// 1 - Tr[rho_par] below this triggers the guarded blank-term rule.
inline constexpr double kBlankEpsilon = 1e-9;
// |d/dg E[A]| below this marks an estimator insensitive.
inline constexpr double kSensitivityEpsilon = 1e-12;

enum class FisherFlag { BlankTermDropped, NearUnitTrace };

struct FisherReport {
  double value = 0.0;            // accessible_term + blank_term
  double accessible_term = 0.0;  // Tr[L^2 rho_par]
  double blank_term = 0.0;       // (Tr[L rho_par])^2 / (1 - Tr rho_par)
  double sld_trace = 0.0;        // Tr[L rho_par]
  ComplexMatrix sld;             // L on M
  ComplexMatrix sld_extended;    // L~ on M + C|B>, blank entry last
  LocalEstimator optimal_estimator;  // ~ L~, up to a factor and offset
  int support_rank = 0;
  std::set<FisherFlag> flags;

  bool has_flag(FisherFlag f) const { return flags.count(f) > 0; }
};

// Fisher information of a normalized family: J = Tr[L^2 rho] with
// (rho L + L rho)/2 = drho. Requires Tr[drho] ~ 0; trace-leaking families
// belong to local_fisher.
FisherReport fisher_info(const states::DensityOperator& rho,
                         const ComplexMatrix& drho);

// Local Fisher information of a subnormalized accessible family:
// J = Tr[L^2 rho_par] + (Tr[L rho_par])^2 / (1 - Tr rho_par), with the
// guarded rule when the trace is within kBlankEpsilon of 1. The optimal
// estimator A~_o = L - (Tr[L rho_par]/(1 - Tr rho_par)) |B><B| is attached.
FisherReport local_fisher(const states::DensityOperator& rho_par,
                          const ComplexMatrix& drho_par);

// The blank-free variant A~_o' = L + (Tr[L rho]/(1 - Tr rho)) P, which also
// attains the bound.
LocalEstimator alternative_optimal_estimator(const FisherReport& report);

struct PureFisherTerms {
  double value = 0.0;
  double gradient_term = 0.0;  // 4(<dpsi|dpsi> - Im<psi|dpsi>^2 / <psi|psi>)
  double blank_term = 0.0;     // 4 Re<psi|dpsi>^2 / (1 - <psi|psi>)
  std::set<FisherFlag> flags;

  bool has_flag(FisherFlag f) const { return flags.count(f) > 0; }
};

// Fisher information of an unnormalized pure family |psi(g)>.
PureFisherTerms pure_state_fisher_terms(const ComplexVector& psi,
                                        const ComplexVector& dpsi);
double pure_state_fisher(const ComplexVector& psi, const ComplexVector& dpsi);

// g -> unit-trace local description; the derivative strategy is Richardson
// finite differences unless an analytic derivative is supplied.
struct StateFamily {
  std::function<states::BlankExtendedState(double)> eval;
  std::function<ComplexMatrix(double)> analytic_accessible_derivative;

  states::BlankExtendedState operator()(double g) const { return eval(g); }
  // d/dg of the accessible block.
  ComplexMatrix accessible_derivative(double g) const;
  FisherReport local_fisher_at(double g) const;
};

struct ErrorReport {
  double delta_g = 0.0;      // sqrt(V) / |dE/dg|
  double variance = 0.0;     // V_g[A~]
  double sensitivity = 0.0;  // dE/dg
};

// Expected error of a (possibly biased) local estimator. Throws
// InvalidInput for insensitive estimators (no finite error exists).
ErrorReport expected_error(const StateFamily& family,
                           const LocalEstimator& estimator, double g);

// f(x) = (x - E_g0[A]) / (dE/dg)|_g0 + g0; locally unbiased to O((g-g0)^2).
struct AffineCalibration {
  double scale = 1.0;
  double offset = 0.0;
  double operator()(double x) const { return scale * x + offset; }
};

AffineCalibration calibrate_linear(const StateFamily& family,
                                   const LocalEstimator& estimator, double g0);

// Sum of N one-site embeddings of a single-system SLD.
ComplexMatrix nsample_sld(const ComplexMatrix& l_single, int n);

}  // namespace locfisher::fisher

#endif  // LOCFISHER_FISHER_HPP
