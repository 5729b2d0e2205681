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

#include "locfisher/scenarios.hpp"

#include <cmath>

#include "locfisher/linalg.hpp"
#include "locfisher/numerics.hpp"
#include "locfisher/rng.hpp"

namespace locfisher::scenarios {

namespace {

ComplexMatrix sigma_x() {
  ComplexMatrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

ComplexMatrix sigma_y() {
  ComplexMatrix s(2, 2);
  s << 0, -kImaginaryUnit, kImaginaryUnit, 0;
  return s;
}

}  // namespace

TwoLevelDecayModel::TwoLevelDecayModel(double gamma_plus, double gamma_minus)
    : gamma_plus_(gamma_plus), gamma_minus_(gamma_minus) {
  if (!(gamma_plus > 0.0) || !(gamma_minus > 0.0))
    throw InvalidInput("TwoLevelDecayModel: decay rates must be positive");
  if (gamma_plus == gamma_minus)
    throw InvalidInput("TwoLevelDecayModel: rates must differ");
}

ComplexMatrix TwoLevelDecayModel::effective_hamiltonian(double g) const {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = -kImaginaryUnit * gamma_plus_;
  h(1, 1) = -kImaginaryUnit * gamma_minus_;
  h += g * sigma_x();
  return h;
}

dynamics::HamiltonianFamily TwoLevelDecayModel::family() const {
  dynamics::HamiltonianFamily f;
  f.dim = 2;
  f.hermitian = false;
  f.builder = [model = *this](double g) {
    return model.effective_hamiltonian(g);
  };
  return f;
}

dynamics::QuantumChannel TwoLevelDecayModel::channel(double g, double t) const {
  return dynamics::QuantumChannel::from_kraus(
      linalg::matrix_exp(-kImaginaryUnit * t * effective_hamiltonian(g)));
}

dynamics::LindbladGenerator TwoLevelDecayModel::lindblad_generator(
    double g) const {
  return dynamics::LindbladGenerator::from_effective_hamiltonian(
      effective_hamiltonian(g));
}

double TwoLevelDecayModel::d(double t) const {
  return (std::exp(-gamma_plus_ * t) - std::exp(-gamma_minus_ * t)) /
         (gamma_plus_ - gamma_minus_);
}

double TwoLevelDecayModel::closed_form_j_single(double t) const {
  const double dt = d(t);
  return 4.0 * dt * dt;
}

TwoLevelDecayModel::OptimalTime TwoLevelDecayModel::optimal_time() const {
  OptimalTime out;
  const double delta = gamma_plus_ - gamma_minus_;
  out.t_star = (std::log(gamma_plus_) - std::log(gamma_minus_)) / delta;
  const double r = gamma_minus_ / gamma_plus_;
  const double a = std::pow(r, gamma_plus_ / delta);
  const double b = std::pow(gamma_plus_ / gamma_minus_,
                            gamma_minus_ / (gamma_minus_ - gamma_plus_));
  out.j_max = 4.0 / (delta * delta) * (a - b) * (a - b);
  const numerics::Extremum peak = numerics::golden_section_maximize(
      [this](double t) { return closed_form_j_single(t); }, 0.0,
      8.0 * out.t_star, 1e-9);
  out.t_star_numeric = peak.x;
  out.j_max_numeric = peak.value;
  return out;
}

double TwoLevelDecayModel::closed_form_composite(double t,
                                                 CompositeForm form) const {
  const double dt = d(t);
  const double d2 = dt * dt;
  const double ep = std::exp(-2.0 * gamma_plus_ * t);
  const double em = std::exp(-2.0 * gamma_minus_ * t);
  switch (form) {
    case CompositeForm::IidSmall:
      return 8.0 * d2 * ep;
    case CompositeForm::IidLarge:
      return 8.0 * d2;
    case CompositeForm::EntangledSmall:
      return 8.0 * d2 * (ep + em);
    case CompositeForm::EntangledLarge: {
      const double mix = 1.0 + 2.0 * std::exp(-(gamma_plus_ + gamma_minus_) * t);
      const double amp = std::exp(-gamma_plus_ * t) - std::exp(-gamma_minus_ * t);
      const double denom = ep * (1.0 - em) + em * (1.0 - ep);
      return 8.0 * d2 * (ep + em) +
             4.0 * d2 * mix * mix * amp * amp / denom;
    }
  }
  throw InvalidInput("closed_form_composite: unknown form");
}

double TwoLevelDecayModel::closed_form_iid_block(double t,
                                                 unsigned mask) const {
  const double d2 = d(t) * d(t);
  const double ep = std::exp(-2.0 * gamma_plus_ * t);
  switch (mask) {
    case 0u:  // accessible block
      return 8.0 * d2 * ep;
    case 1u:
    case 2u:  // one subsystem blank
      return 4.0 * d2 * (1.0 - ep);
    case 3u:  // both blank: O(g)
      return 0.0;
  }
  throw InvalidInput("closed_form_iid_block: mask out of range for N=2");
}

ComplexVector TwoLevelDecayModel::first_order_state(double g, double t,
                                                    bool upper) const {
  ComplexVector psi = ComplexVector::Zero(2);
  const double decay = upper ? gamma_plus_ : gamma_minus_;
  psi(upper ? 0 : 1) = std::exp(-decay * t);
  psi(upper ? 1 : 0) = kImaginaryUnit * g * d(t);
  return psi;
}

ComplexVector TwoLevelDecayModel::evolved_state(double g, double t,
                                                bool upper) const {
  ComplexVector psi0 = ComplexVector::Zero(2);
  psi0(upper ? 0 : 1) = 1.0;
  return dynamics::evolve_state(family(), psi0, g, t);
}

fisher::StateFamily TwoLevelDecayModel::single_system_family(double t) const {
  fisher::StateFamily family;
  family.eval = [model = *this, t](double g) {
    const ComplexVector psi = model.evolved_state(g, t);
    return states::extend_with_blank(states::DensityOperator::from_pure(
        psi, states::TraceClass::Subnormalized));
  };
  return family;
}

namespace {

composite::CompositeScenario make_pair_scenario(const TwoLevelDecayModel& model,
                                                const ComplexVector& psi0,
                                                int n) {
  composite::CompositeScenario scenario;
  scenario.n_subsystems = n;
  scenario.local_dim = 2;
  scenario.initial_state = states::DensityOperator::from_pure(
      psi0, states::TraceClass::Normalized);
  scenario.channel_family = [model](double g, double t) {
    return model.channel(g, t);
  };
  return scenario;
}

}  // namespace

composite::CompositeScenario TwoLevelDecayModel::iid_pair() const {
  return iid_n(2);
}

composite::CompositeScenario TwoLevelDecayModel::entangled_pair() const {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);  // |+->
  psi(2) = 1.0 / std::sqrt(2.0);  // |-+>
  return make_pair_scenario(*this, psi, 2);
}

composite::CompositeScenario TwoLevelDecayModel::iid_n(int n) const {
  if (n < 1) throw InvalidInput("iid_n: need n >= 1");
  long dim = 1;
  for (int i = 0; i < n; ++i) dim *= 2;
  ComplexVector psi = ComplexVector::Zero(dim);
  psi(0) = 1.0;  // |++...+>
  return make_pair_scenario(*this, psi, n);
}

states::LocalEstimator TwoLevelDecayModel::sigma_y_estimator() const {
  return states::LocalEstimator{sigma_y(), 0.0};
}

states::LocalEstimator TwoLevelDecayModel::sigma_x_estimator() const {
  return states::LocalEstimator{sigma_x(), 0.0};
}

fisher::StateFamily QuadraticLeakageModel::family_at(double t) const {
  fisher::StateFamily family;
  family.eval = [model = *this, t](double g) {
    return states::extend_with_blank(states::DensityOperator::from_pure(
        model.accessible_state(g, t), states::TraceClass::Subnormalized));
  };
  return family;
}

ComplexVector QuadraticLeakageModel::accessible_state(double g,
                                                      double t) const {
  const ComplexVector full = dynamics::evolve_state(
      hamiltonian, projector.isometry() * initial_state, g, t);
  return projector.isometry().adjoint() * full;
}

double QuadraticLeakageModel::leakage_coefficient(double g) const {
  const ComplexVector full = projector.isometry() * initial_state;
  const ComplexMatrix h = hamiltonian(g);
  const ComplexVector hpsi = h * full;
  return (hpsi.adjoint() * projector.complement() * hpsi)(0, 0).real();
}

QuadraticLeakageModel make_quadratic_leakage_model() {
  // Deterministic Hermitian pair with order-one coupling between M and its
  // complement, so both alpha(g) and d alpha/dg are order one.
  Rng rng(0x1eafULL);
  const ComplexMatrix h0 = random_hermitian(rng, 4);
  const ComplexMatrix h1 = random_hermitian(rng, 4);
  QuadraticLeakageModel model{
      dynamics::HamiltonianFamily{
          4, true,
          [h0, h1](double g) -> ComplexMatrix { return h0 + g * h1; }},
      states::SubspaceProjector::leading(4, 2), ComplexVector::Zero(2)};
  model.initial_state(0) = 1.0 / std::sqrt(2.0);
  model.initial_state(1) = kImaginaryUnit / std::sqrt(2.0);
  return model;
}

}  // namespace locfisher::scenarios
