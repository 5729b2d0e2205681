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

#ifndef LOCFISHER_SERIALIZATION_HPP
#define LOCFISHER_SERIALIZATION_HPP

#include <string>

#include <json.hpp>

#include "locfisher/composite.hpp"
#include "locfisher/scenarios.hpp"
#include "locfisher/states.hpp"

// JSON encodings for CLI round-trips. Floats are written as decimal strings
// with 17 significant digits, which reproduce the binary value exactly on
// parse. Block keys are comma-joined 1-based subsystem labels ("" for the
// accessible block), matching the blank-pattern notation.
namespace locfisher::serialization {

using nlohmann::json;

std::string format_double(double x);        // %.17g
double parse_double(const json& j);         // accepts string or number

json complex_matrix_to_json(const ComplexMatrix& m);  // row-major [re, im] pairs
ComplexMatrix complex_matrix_from_json(const json& j, int rows, int cols);

std::string mask_to_key(unsigned mask, int n);
unsigned key_to_mask(const std::string& key, int n);

json to_json(const states::CompositeLocalState& state);
states::CompositeLocalState composite_state_from_json(const json& j);

// A blank-extended state serializes as the N=1 composite shape.
json to_json(const states::BlankExtendedState& state);
states::BlankExtendedState blank_state_from_json(const json& j);

json to_json(const fisher::FisherReport& report);

// Model definition:
//   {"type": "two_level_decay", "params": {"gamma_plus": .., "gamma_minus": ..}}
//   {"type": "custom", "dim": d, "accessible_dim": k, "hermitian": bool,
//    "hamiltonian_coefficients": [M0, M1, ...]}   // H(g) = sum_k g^k M_k
struct ModelDefinition {
  std::string type;
  double gamma_plus = 2.0;
  double gamma_minus = 1.0;
  int dim = 0;
  int accessible_dim = 0;
  bool hermitian = true;
  std::vector<ComplexMatrix> coefficients;

  dynamics::HamiltonianFamily hamiltonian_family() const;
  bool is_two_level() const { return type == "two_level_decay"; }
  scenarios::TwoLevelDecayModel two_level() const;
  // Channel family on the accessible space (effective Kraus for
  // full-dimension non-Hermitian models, projected unitary otherwise).
  std::function<dynamics::QuantumChannel(double, double)> channel_family() const;
  int local_dim() const;
};

ModelDefinition model_from_json(const json& j);
json model_to_json(const ModelDefinition& model);

// Composite scenario file: {"N": n, "model": {...}, "g": ..,
//   "initial_state": "iid" | "entangled_pair" |
//                    {"type": "iid", "pure": [[re,im],...]} |
//                    {"type": "matrix", "data": [[re,im],...]},
//   "t_grid": {"start": .., "stop": .., "points": n, "scale": "lin"|"log"}}
struct ScenarioDefinition {
  int n_subsystems = 2;
  ModelDefinition model;
  json initial_state = "iid";
  double g = 1e-4;

  composite::CompositeScenario build() const;
};

ScenarioDefinition scenario_from_json(const json& j);

}  // namespace locfisher::serialization

#endif  // LOCFISHER_SERIALIZATION_HPP
