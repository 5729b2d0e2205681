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

#ifndef LOCFISHER_SCENARIOS_HPP
#define LOCFISHER_SCENARIOS_HPP

#include "locfisher/composite.hpp"
#include "locfisher/dynamics.hpp"
#include "locfisher/fisher.hpp"

// Preset models: the decaying two-level system (single, i.i.d. pair,
// entangled pair) with both exact numerical evolution and the first-order
// closed forms for cross-checking, plus a quadratic-leakage reference model
// whose accessible norm decays as 1 - alpha(g) t^2 at early times.
namespace locfisher::scenarios {

// Two decaying levels coupled by a weak off-diagonal term:
// H = -i diag(gamma_plus, gamma_minus) + g sigma_x, valid for
// |g| << gamma_plus, gamma_minus, |gamma_plus - gamma_minus|.
class TwoLevelDecayModel {
 public:
  TwoLevelDecayModel(double gamma_plus, double gamma_minus);

  double gamma_plus() const { return gamma_plus_; }
  double gamma_minus() const { return gamma_minus_; }

  ComplexMatrix effective_hamiltonian(double g) const;
  dynamics::HamiltonianFamily family() const;
  dynamics::QuantumChannel channel(double g, double t) const;
  dynamics::LindbladGenerator lindblad_generator(double g) const;

  // Response function d(t) = (e^{-g+ t} - e^{-g- t}) / (g+ - g-).
  double d(double t) const;

  // Leading-order single-system information 4 d(t)^2.
  double closed_form_j_single(double t) const;

  struct OptimalTime {
    double t_star = 0.0;       // (ln g+ - ln g-) / (g+ - g-)
    double j_max = 0.0;        // closed form, equals 4 d(t_star)^2
    double t_star_numeric = 0.0;  // golden-section maximum of 4 d(t)^2
    double j_max_numeric = 0.0;
  };
  OptimalTime optimal_time() const;

  enum class CompositeForm { IidSmall, IidLarge, EntangledSmall, EntangledLarge };
  // Leading-order two-system informations: j2/J2 for the i.i.d. and
  // entangled pairs.
  double closed_form_composite(double t, CompositeForm form) const;
  // Leading-order per-block values of the i.i.d. J2 decomposition (mask bit
  // k set <=> subsystem k+1 blank).
  double closed_form_iid_block(double t, unsigned mask) const;

  // First-order solution e^{-g+- t}|+-> + i g d(t)|-+> (upper = |+>).
  ComplexVector first_order_state(double g, double t, bool upper = true) const;
  // Exact numerical evolution of |+-|->.
  ComplexVector evolved_state(double g, double t, bool upper = true) const;

  // g -> blank-extended evolved |+> at fixed t.
  fisher::StateFamily single_system_family(double t) const;

  composite::CompositeScenario iid_pair() const;        // |++>
  composite::CompositeScenario entangled_pair() const;  // (|+-> + |-+>)/sqrt2
  composite::CompositeScenario iid_n(int n) const;

  // sigma_y on the accessible block, zero on the blank: the observable that
  // attains the bound to leading order.
  states::LocalEstimator sigma_y_estimator() const;
  states::LocalEstimator sigma_x_estimator() const;

 private:
  double gamma_plus_;
  double gamma_minus_;
};

// Fixed four-level Hermitian model with a two-dimensional accessible
// subspace. Leakage out of M starts quadratically, so the accessible norm
// behaves as 1 - alpha(g) t^2 at early times (unlike the decay model, whose
// norm loss is linear in t). Used for the early-time blank-term checks.
struct QuadraticLeakageModel {
  dynamics::HamiltonianFamily hamiltonian;  // on the 4-dim full space
  states::SubspaceProjector projector;      // rank 2
  ComplexVector initial_state;              // in M

  fisher::StateFamily family_at(double t) const;
  // Accessible components V^dag e^{-iHt} psi0.
  ComplexVector accessible_state(double g, double t) const;
  // Quadratic leakage coefficient alpha(g) = <psi0| H (1-P) H |psi0>.
  double leakage_coefficient(double g) const;
};

QuadraticLeakageModel make_quadratic_leakage_model();

}  // namespace locfisher::scenarios

#endif  // LOCFISHER_SCENARIOS_HPP
