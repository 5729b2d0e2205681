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

#ifndef LOCFISHER_COMPOSITE_HPP
#define LOCFISHER_COMPOSITE_HPP

#include <cstdint>
#include <map>
#include <optional>

#include "locfisher/dynamics.hpp"
#include "locfisher/fisher.hpp"
#include "locfisher/states.hpp"

// The two composite-system Fisher informations: j_N on the single-blank
// extension of the accessible operator, and J_N through the block
// decomposition, with descendant blocks computed either directly from a
// full-space evolution or through the factorized-channel inclusion-exclusion
// formula. Both paths are kept as independent routes and equivalence-tested.
namespace locfisher::composite {

struct FullSpaceModel {
  dynamics::HamiltonianFamily hamiltonian;  // Hermitian, on H
  states::SubspaceProjector projector;      // H -> M
};

struct CompositeScenario {
  int n_subsystems = 0;
  int local_dim = 0;
  // Unit trace, supported in M^N.
  std::optional<states::DensityOperator> initial_state;
  // Factorized per-subsystem channel Gamma(g, t) on M.
  std::function<dynamics::QuantumChannel(double g, double t)> channel_family;
  // Optional full-space model; enables the direct descendant path.
  std::optional<FullSpaceModel> full_space;

  const states::DensityOperator& initial() const;
};

inline constexpr int kMaxDirectSubsystems = 3;
inline constexpr int kMaxChannelSubsystems = 4;
// Composite-block positivity thresholds: clip dust above -1e-9, hard error
// below -1e-6 (a genuine negativity signals an implementation bug).
inline constexpr double kBlockClipTolerance = 1e-9;
inline constexpr double kBlockErrorTolerance = 1e-6;
// Scalar (fully blank) blocks below this weight contribute zero.
inline constexpr double kScalarBlockFloor = 1e-12;

// Blank-pattern blocks and their g-derivatives.
struct DescendantSet {
  int n_subsystems = 0;
  int local_dim = 0;
  std::map<unsigned, ComplexMatrix> blocks;
  std::map<unsigned, ComplexMatrix> dblocks;

  states::CompositeLocalState state() const;
  double total_trace() const;
};

// Evolves the full-space state unitarily and extracts blocks (requires a
// full-space model and n <= kMaxDirectSubsystems).
states::CompositeLocalState blocks_direct(const CompositeScenario& scenario,
                                          double g, double t);
// Inclusion-exclusion over channel-evolved partial traces of the initial
// state, with the evolved descendants memoized per (g, t) evaluation.
states::CompositeLocalState blocks_via_channels(
    const CompositeScenario& scenario, double g, double t);

DescendantSet descendants_direct(const CompositeScenario& scenario, double g,
                                 double t);
DescendantSet descendants_via_channels(const CompositeScenario& scenario,
                                       double g, double t);

// Fisher information of the single-blank local description of the evolved
// accessible operator Gamma^(x)N [rho(0)].
fisher::FisherReport j_N(const CompositeScenario& scenario, double g, double t);

struct CompositeFisherReport {
  double value = 0.0;
  std::map<unsigned, double> per_block;
  DescendantSet descendants;
  bool scalar_block_dropped = false;
};

// Block-decomposed Fisher information: sum over blank patterns of
// Tr[block L^2] with the per-block SLD; fully blank scalar blocks
// contribute (dp/dg)^2 / p.
CompositeFisherReport J_N(const CompositeScenario& scenario, double g,
                          double t, bool use_direct_path = false);

// Collapses all blank-carrying blocks into a single blank weight; the
// Fisher information of the image family is j_N.
states::BlankExtendedState monotonicity_map_R(const DescendantSet& set);

// Deterministic random scenarios (full-space Hermitian model + channel
// family) for the property batteries; both descendant paths available.
struct RandomScenarioOptions {
  int n_subsystems = 2;
  int full_dim = 4;
  int local_dim = 2;
  bool entangled_initial = true;   // random pure state in M^N
  bool mixed_initial = false;      // random full-rank mixed state instead
};

CompositeScenario make_random_scenario(const RandomScenarioOptions& options,
                                       std::uint64_t seed);

}  // namespace locfisher::composite

#endif  // LOCFISHER_COMPOSITE_HPP
