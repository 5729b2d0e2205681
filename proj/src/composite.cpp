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

#include "locfisher/composite.hpp"

#include <sstream>

#include "locfisher/linalg.hpp"
#include "locfisher/numerics.hpp"
#include "locfisher/rng.hpp"

namespace locfisher::composite {

namespace {

using states::mask_to_indices;
using states::popcount;

void check_scenario(const CompositeScenario& scenario) {
  if (scenario.n_subsystems < 1)
    throw InvalidInput("CompositeScenario: need at least one subsystem");
  if (!scenario.initial_state)
    throw InvalidInput("CompositeScenario: missing initial state");
  if (!scenario.channel_family)
    throw InvalidInput("CompositeScenario: missing channel family");
  long dim = 1;
  for (int i = 0; i < scenario.n_subsystems; ++i) dim *= scenario.local_dim;
  if (scenario.initial_state->dim() != dim)
    throw InvalidInput("CompositeScenario: initial state dim mismatch");
  if (scenario.initial_state->trace_class() != states::TraceClass::Normalized)
    throw InvalidInput("CompositeScenario: initial state must be unit trace");
}

// Memoized evolved descendants Gamma^(N-m)[Tr_J rho(0)], keyed by the
// traced subsequence J; shared by all outer blank patterns of one (g, t)
// evaluation.
class DescendantEvaluator {
 public:
  DescendantEvaluator(const CompositeScenario& scenario, double g, double t)
      : scenario_(scenario),
        channel_(scenario.channel_family(g, t)),
        dims_(static_cast<std::size_t>(scenario.n_subsystems),
              scenario.local_dim) {}

  const ComplexMatrix& evolved(unsigned traced_mask) {
    auto it = cache_.find(traced_mask);
    if (it != cache_.end()) return it->second;
    const int n = scenario_.n_subsystems;
    const ComplexMatrix reduced = linalg::partial_trace(
        scenario_.initial().matrix(), dims_, mask_to_indices(traced_mask, n));
    const int remaining = n - popcount(traced_mask);
    ComplexMatrix value = remaining == 0
                              ? reduced
                              : channel_.tensor_apply(remaining, reduced);
    return cache_.emplace(traced_mask, std::move(value)).first->second;
  }

  // Inclusion-exclusion over subsequences J of the blank pattern S.
  ComplexMatrix block(unsigned blank_mask) {
    const int n = scenario_.n_subsystems;
    ComplexMatrix acc;
    unsigned sub = blank_mask;
    while (true) {
      const ComplexMatrix& e = evolved(sub);
      // e lives on the slots not in `sub`; trace out the S-minus-J slots.
      std::vector<int> slots;
      for (int i = 0; i < n; ++i)
        if (!((sub >> i) & 1u)) slots.push_back(i);
      std::vector<int> traced_local;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if ((blank_mask >> slots[s]) & 1u)
          traced_local.push_back(static_cast<int>(s));
      const std::vector<int> local_dims(slots.size(), scenario_.local_dim);
      ComplexMatrix term = linalg::partial_trace(e, local_dims, traced_local);
      const double sign =
          (popcount(blank_mask) - popcount(sub)) % 2 == 0 ? 1.0 : -1.0;
      if (acc.size() == 0)
        acc = sign * term;
      else
        acc += sign * term;
      if (sub == 0) break;
      sub = (sub - 1) & blank_mask;
    }
    return acc;
  }

 private:
  const CompositeScenario& scenario_;
  dynamics::QuantumChannel channel_;
  std::vector<int> dims_;
  std::map<unsigned, ComplexMatrix> cache_;
};

std::map<unsigned, ComplexMatrix> raw_blocks_via_channels(
    const CompositeScenario& scenario, double g, double t) {
  DescendantEvaluator evaluator(scenario, g, t);
  std::map<unsigned, ComplexMatrix> out;
  const unsigned n_masks = 1u << scenario.n_subsystems;
  for (unsigned mask = 0; mask < n_masks; ++mask)
    out[mask] = evaluator.block(mask);
  return out;
}

std::map<unsigned, ComplexMatrix> raw_blocks_direct(
    const CompositeScenario& scenario, double g, double t) {
  if (!scenario.full_space)
    throw InvalidInput(
        "descendants_direct: no full-space model available; use "
        "descendants_via_channels");
  const int n = scenario.n_subsystems;
  const FullSpaceModel& model = *scenario.full_space;
  const ComplexMatrix u =
      linalg::matrix_exp(-kImaginaryUnit * t * model.hamiltonian(g));
  const ComplexMatrix u_n = linalg::kron_power(u, n);
  const ComplexMatrix v_n = linalg::kron_power(model.projector.isometry(), n);
  const ComplexMatrix rho_full =
      u_n * (v_n * scenario.initial().matrix() * v_n.adjoint()) * u_n.adjoint();
  const states::CompositeLocalState state = states::composite_local_state(
      states::DensityOperator(rho_full, states::TraceClass::Normalized),
      model.projector, n);
  return state.blocks;
}

ComplexMatrix clip_block(const ComplexMatrix& block) {
  if (block.size() == 1) {
    const double p = block(0, 0).real();
    if (p < -kBlockClipTolerance) {
      std::ostringstream msg;
      msg << "composite: scalar block weight " << p
          << (p < -kBlockErrorTolerance ? " (implementation bug)"
                                        : " beyond the clip band");
      throw NumericError(msg.str());
    }
    ComplexMatrix out(1, 1);
    out(0, 0) = std::max(p, 0.0);
    return out;
  }
  return linalg::clip_negative_eigenvalues(block, kBlockClipTolerance,
                                           kBlockErrorTolerance);
}

DescendantSet assemble(const CompositeScenario& scenario, double g,
                       const std::function<std::map<unsigned, ComplexMatrix>(
                           double)>& blocks_at) {
  DescendantSet out;
  out.n_subsystems = scenario.n_subsystems;
  out.local_dim = scenario.local_dim;
  std::map<unsigned, ComplexMatrix> center = blocks_at(g);

  // Richardson differences of whole block maps; the per-g descendant caches
  // are shared across all blank patterns of each evaluation.
  const double h = numerics::fd_step(g);
  std::map<unsigned, ComplexMatrix> p1 = blocks_at(g + h);
  std::map<unsigned, ComplexMatrix> m1 = blocks_at(g - h);
  std::map<unsigned, ComplexMatrix> p2 = blocks_at(g + h / 2.0);
  std::map<unsigned, ComplexMatrix> m2 = blocks_at(g - h / 2.0);
  for (auto& [mask, block] : center) {
    const ComplexMatrix coarse = (p1[mask] - m1[mask]) / (2.0 * h);
    const ComplexMatrix fine = (p2[mask] - m2[mask]) / h;
    out.dblocks[mask] =
        linalg::hermitian_part((4.0 * fine - coarse) / 3.0);
    out.blocks[mask] = clip_block(linalg::hermitian_part(block));
  }
  return out;
}

}  // namespace

const states::DensityOperator& CompositeScenario::initial() const {
  if (!initial_state)
    throw InvalidInput("CompositeScenario: missing initial state");
  return *initial_state;
}

states::CompositeLocalState DescendantSet::state() const {
  states::CompositeLocalState out;
  out.n_subsystems = n_subsystems;
  out.local_dim = local_dim;
  out.blocks = blocks;
  return out;
}

double DescendantSet::total_trace() const {
  double sum = 0.0;
  for (const auto& [mask, block] : blocks) sum += block.trace().real();
  return sum;
}

states::CompositeLocalState blocks_direct(const CompositeScenario& scenario,
                                          double g, double t) {
  check_scenario(scenario);
  if (scenario.n_subsystems > kMaxDirectSubsystems)
    throw InvalidInput("blocks_direct: n_subsystems above the direct-path cap");
  states::CompositeLocalState out;
  out.n_subsystems = scenario.n_subsystems;
  out.local_dim = scenario.local_dim;
  out.blocks = raw_blocks_direct(scenario, g, t);
  return out;
}

states::CompositeLocalState blocks_via_channels(
    const CompositeScenario& scenario, double g, double t) {
  check_scenario(scenario);
  if (scenario.n_subsystems > kMaxChannelSubsystems)
    throw InvalidInput(
        "blocks_via_channels: n_subsystems above the channel-path cap");
  states::CompositeLocalState out;
  out.n_subsystems = scenario.n_subsystems;
  out.local_dim = scenario.local_dim;
  out.blocks = raw_blocks_via_channels(scenario, g, t);
  return out;
}

DescendantSet descendants_direct(const CompositeScenario& scenario, double g,
                                 double t) {
  check_scenario(scenario);
  if (scenario.n_subsystems > kMaxDirectSubsystems)
    throw InvalidInput(
        "descendants_direct: n_subsystems above the direct-path cap");
  return assemble(scenario, g, [&](double gv) {
    return raw_blocks_direct(scenario, gv, t);
  });
}

DescendantSet descendants_via_channels(const CompositeScenario& scenario,
                                       double g, double t) {
  check_scenario(scenario);
  if (scenario.n_subsystems > kMaxChannelSubsystems)
    throw InvalidInput(
        "descendants_via_channels: n_subsystems above the channel-path cap");
  return assemble(scenario, g, [&](double gv) {
    return raw_blocks_via_channels(scenario, gv, t);
  });
}

fisher::FisherReport j_N(const CompositeScenario& scenario, double g,
                         double t) {
  check_scenario(scenario);
  const int n = scenario.n_subsystems;
  const auto accessible = [&](double gv) -> ComplexMatrix {
    const dynamics::QuantumChannel channel = scenario.channel_family(gv, t);
    return channel.tensor_apply(n, scenario.initial().matrix());
  };
  const ComplexMatrix rho = linalg::hermitian_part(accessible(g));
  const ComplexMatrix drho = linalg::hermitian_part(
      numerics::richardson_derivative(accessible, g));
  return fisher::local_fisher(
      states::DensityOperator(rho, states::TraceClass::Subnormalized), drho);
}

CompositeFisherReport J_N(const CompositeScenario& scenario, double g,
                          double t, bool use_direct_path) {
  CompositeFisherReport report;
  report.descendants = use_direct_path
                           ? descendants_direct(scenario, g, t)
                           : descendants_via_channels(scenario, g, t);
  for (const auto& [mask, block] : report.descendants.blocks) {
    const ComplexMatrix& dblock = report.descendants.dblocks.at(mask);
    double contribution = 0.0;
    if (block.size() == 1) {
      const double p = block(0, 0).real();
      const double dp = dblock(0, 0).real();
      if (p > kScalarBlockFloor) {
        contribution = dp * dp / p;
      } else {
        report.scalar_block_dropped = true;
      }
    } else {
      const linalg::SldResult sld = linalg::solve_sld(block, dblock);
      contribution = (block * sld.sld * sld.sld).trace().real();
    }
    report.per_block[mask] = contribution;
    report.value += contribution;
  }
  return report;
}

states::BlankExtendedState monotonicity_map_R(const DescendantSet& set) {
  const auto it = set.blocks.find(0u);
  if (it == set.blocks.end())
    throw InvalidInput("monotonicity_map_R: missing accessible block");
  return states::extend_with_blank(states::DensityOperator(
      it->second, states::TraceClass::Subnormalized));
}

CompositeScenario make_random_scenario(const RandomScenarioOptions& options,
                                       std::uint64_t seed) {
  if (options.local_dim >= options.full_dim)
    throw InvalidInput("make_random_scenario: need local_dim < full_dim");
  Rng rng = Rng::stream(seed, 0);
  const int dh = options.full_dim;
  const int dm = options.local_dim;
  const int n = options.n_subsystems;

  const ComplexMatrix h0 = random_hermitian(rng, dh);
  const ComplexMatrix h1 = random_hermitian(rng, dh);
  dynamics::HamiltonianFamily family;
  family.dim = dh;
  family.hermitian = true;
  family.builder = [h0, h1](double g) -> ComplexMatrix { return h0 + g * h1; };

  const states::SubspaceProjector projector =
      states::SubspaceProjector::leading(dh, dm);

  long dim_mn = 1;
  for (int i = 0; i < n; ++i) dim_mn *= dm;
  ComplexMatrix rho0;
  if (options.mixed_initial) {
    rho0 = random_density_matrix(rng, static_cast<int>(dim_mn));
  } else if (options.entangled_initial) {
    const ComplexVector psi = random_pure_state(rng, static_cast<int>(dim_mn));
    rho0 = psi * psi.adjoint();
  } else {
    const ComplexVector psi = random_pure_state(rng, dm);
    ComplexMatrix single = psi * psi.adjoint();
    rho0 = linalg::kron_power(single, n);
  }

  CompositeScenario scenario;
  scenario.n_subsystems = n;
  scenario.local_dim = dm;
  scenario.initial_state =
      states::DensityOperator(rho0, states::TraceClass::Normalized);
  scenario.channel_family = [family, projector](double g, double t) {
    return dynamics::QuantumChannel::from_unitary(family, projector, g, t);
  };
  scenario.full_space = FullSpaceModel{family, projector};
  return scenario;
}

}  // namespace locfisher::composite
