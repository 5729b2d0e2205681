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

#include "locfisher/serialization.hpp"

#include <cstdio>
#include <sstream>

#include "locfisher/linalg.hpp"

namespace locfisher::serialization {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const json& j) {
  if (j.is_string()) return std::stod(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw InvalidInput("parse_double: expected a number or decimal string");
}

json complex_matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out.push_back(json::array(
          {format_double(m(i, j).real()), format_double(m(i, j).imag())}));
  return out;
}

ComplexMatrix complex_matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * cols)
    throw InvalidInput("complex_matrix_from_json: wrong entry count");
  ComplexMatrix out(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++k) {
      const json& entry = j[k];
      if (!entry.is_array() || entry.size() != 2)
        throw InvalidInput("complex_matrix_from_json: entries must be [re, im]");
      out(r, c) = Complex(parse_double(entry[0]), parse_double(entry[1]));
    }
  return out;
}

std::string mask_to_key(unsigned mask, int n) {
  std::ostringstream out;
  bool first = true;
  for (int k = 0; k < n; ++k)
    if ((mask >> k) & 1u) {
      if (!first) out << ",";
      out << (k + 1);
      first = false;
    }
  return out.str();
}

unsigned key_to_mask(const std::string& key, int n) {
  unsigned mask = 0;
  std::istringstream in(key);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    const int label = std::stoi(token);
    if (label < 1 || label > n)
      throw InvalidInput("key_to_mask: subsystem label out of range");
    mask |= 1u << (label - 1);
  }
  return mask;
}

json to_json(const states::CompositeLocalState& state) {
  json blocks = json::object();
  for (const auto& [mask, block] : state.blocks)
    blocks[mask_to_key(mask, state.n_subsystems)] =
        complex_matrix_to_json(block);
  return json{{"n_subsystems", state.n_subsystems},
              {"local_dim", state.local_dim},
              {"blocks", blocks}};
}

states::CompositeLocalState composite_state_from_json(const json& j) {
  states::CompositeLocalState state;
  state.n_subsystems = j.at("n_subsystems").get<int>();
  state.local_dim = j.at("local_dim").get<int>();
  if (state.n_subsystems < 1 || state.local_dim < 1)
    throw InvalidInput("composite_state_from_json: bad dims");
  for (const auto& [key, value] : j.at("blocks").items()) {
    const unsigned mask = key_to_mask(key, state.n_subsystems);
    int dim = 1;
    for (int i = states::popcount(mask); i < state.n_subsystems; ++i)
      dim *= state.local_dim;
    state.blocks[mask] = complex_matrix_from_json(value, dim, dim);
  }
  return state;
}

json to_json(const states::BlankExtendedState& state) {
  states::CompositeLocalState as_composite;
  as_composite.n_subsystems = 1;
  as_composite.local_dim = state.local_dim();
  as_composite.blocks[0u] = state.accessible_block.matrix();
  ComplexMatrix blank(1, 1);
  blank(0, 0) = state.blank_weight;
  as_composite.blocks[1u] = blank;
  return to_json(as_composite);
}

json to_json(const fisher::FisherReport& report) {
  json flags = json::array();
  if (report.has_flag(fisher::FisherFlag::BlankTermDropped))
    flags.push_back("blank_term_dropped");
  if (report.has_flag(fisher::FisherFlag::NearUnitTrace))
    flags.push_back("near_unit_trace");
  return json{{"value", report.value},
              {"accessible_term", report.accessible_term},
              {"blank_term", report.blank_term},
              {"sld_trace", report.sld_trace},
              {"support_rank", report.support_rank},
              {"sld", complex_matrix_to_json(report.sld)},
              {"sld_extended", complex_matrix_to_json(report.sld_extended)},
              {"optimal_estimator",
               {{"accessible_block",
                 complex_matrix_to_json(report.optimal_estimator.accessible_block)},
                {"blank_value",
                 format_double(report.optimal_estimator.blank_value)}}},
              {"flags", flags}};
}

states::BlankExtendedState blank_state_from_json(const json& j) {
  const states::CompositeLocalState as_composite = composite_state_from_json(j);
  if (as_composite.n_subsystems != 1)
    throw InvalidInput("blank_state_from_json: expected a single subsystem");
  return states::BlankExtendedState{
      states::DensityOperator(as_composite.blocks.at(0u),
                              states::TraceClass::Subnormalized),
      as_composite.blocks.at(1u)(0, 0).real()};
}

dynamics::HamiltonianFamily ModelDefinition::hamiltonian_family() const {
  if (is_two_level()) return two_level().family();
  dynamics::HamiltonianFamily family;
  family.dim = dim;
  family.hermitian = hermitian;
  family.builder = [coeffs = coefficients, d = dim](double g) {
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    double power = 1.0;
    for (const ComplexMatrix& c : coeffs) {
      h += power * c;
      power *= g;
    }
    return h;
  };
  return family;
}

scenarios::TwoLevelDecayModel ModelDefinition::two_level() const {
  if (!is_two_level())
    throw InvalidInput("ModelDefinition: not a two_level_decay model");
  return scenarios::TwoLevelDecayModel(gamma_plus, gamma_minus);
}

std::function<dynamics::QuantumChannel(double, double)>
ModelDefinition::channel_family() const {
  if (is_two_level()) {
    const scenarios::TwoLevelDecayModel model = two_level();
    return [model](double g, double t) { return model.channel(g, t); };
  }
  const dynamics::HamiltonianFamily family = hamiltonian_family();
  if (accessible_dim == dim || accessible_dim == 0) {
    // Effective model directly on the accessible space.
    return [family](double g, double t) {
      return dynamics::QuantumChannel::from_kraus(
          linalg::matrix_exp(-kImaginaryUnit * t * family(g)));
    };
  }
  const states::SubspaceProjector projector =
      states::SubspaceProjector::leading(dim, accessible_dim);
  return [family, projector](double g, double t) {
    return dynamics::QuantumChannel::from_unitary(family, projector, g, t);
  };
}

int ModelDefinition::local_dim() const {
  if (is_two_level()) return 2;
  return accessible_dim == 0 ? dim : accessible_dim;
}

ModelDefinition model_from_json(const json& j) {
  ModelDefinition model;
  model.type = j.at("type").get<std::string>();
  if (model.type == "two_level_decay") {
    const json params = j.value("params", json::object());
    model.gamma_plus = params.contains("gamma_plus")
                           ? parse_double(params.at("gamma_plus"))
                           : 2.0;
    model.gamma_minus = params.contains("gamma_minus")
                            ? parse_double(params.at("gamma_minus"))
                            : 1.0;
    if (!(model.gamma_plus > 0.0) || !(model.gamma_minus > 0.0) ||
        model.gamma_plus == model.gamma_minus)
      throw InvalidInput("model: need positive, distinct decay rates");
  } else if (model.type == "custom") {
    model.dim = j.at("dim").get<int>();
    if (model.dim < 1) throw InvalidInput("model: dim must be >= 1");
    model.accessible_dim = j.value("accessible_dim", 0);
    if (model.accessible_dim < 0 || model.accessible_dim > model.dim)
      throw InvalidInput("model: accessible_dim out of range");
    model.hermitian = j.value("hermitian", true);
    const json& coeffs = j.at("hamiltonian_coefficients");
    if (!coeffs.is_array() || coeffs.empty())
      throw InvalidInput("model: need at least one coefficient matrix");
    for (const json& c : coeffs)
      model.coefficients.push_back(
          complex_matrix_from_json(c, model.dim, model.dim));
  } else {
    throw InvalidInput("model: unknown type '" + model.type + "'");
  }
  return model;
}

json model_to_json(const ModelDefinition& model) {
  if (model.is_two_level())
    return json{{"type", "two_level_decay"},
                {"params",
                 {{"gamma_plus", model.gamma_plus},
                  {"gamma_minus", model.gamma_minus}}}};
  json coeffs = json::array();
  for (const ComplexMatrix& c : model.coefficients)
    coeffs.push_back(complex_matrix_to_json(c));
  return json{{"type", "custom"},
              {"dim", model.dim},
              {"accessible_dim", model.accessible_dim},
              {"hermitian", model.hermitian},
              {"hamiltonian_coefficients", coeffs}};
}

composite::CompositeScenario ScenarioDefinition::build() const {
  composite::CompositeScenario scenario;
  scenario.n_subsystems = n_subsystems;
  scenario.local_dim = model.local_dim();
  scenario.channel_family = model.channel_family();

  long dim_mn = 1;
  for (int i = 0; i < n_subsystems; ++i) dim_mn *= scenario.local_dim;

  if (initial_state.is_string()) {
    const std::string name = initial_state.get<std::string>();
    if (name == "iid") {
      ComplexVector psi = ComplexVector::Zero(dim_mn);
      psi(0) = 1.0;
      scenario.initial_state = states::DensityOperator::from_pure(
          psi, states::TraceClass::Normalized);
    } else if (name == "entangled_pair") {
      if (n_subsystems != 2 || scenario.local_dim != 2)
        throw InvalidInput("scenario: entangled_pair needs N=2, local dim 2");
      ComplexVector psi = ComplexVector::Zero(4);
      psi(1) = 1.0 / std::sqrt(2.0);
      psi(2) = 1.0 / std::sqrt(2.0);
      scenario.initial_state = states::DensityOperator::from_pure(
          psi, states::TraceClass::Normalized);
    } else {
      throw InvalidInput("scenario: unknown initial state '" + name + "'");
    }
  } else if (initial_state.is_object()) {
    const std::string type = initial_state.at("type").get<std::string>();
    if (type == "iid") {
      const ComplexMatrix pure = complex_matrix_from_json(
          initial_state.at("pure"), scenario.local_dim, 1);
      ComplexVector psi = pure.col(0);
      psi.normalize();
      ComplexMatrix single = psi * psi.adjoint();
      scenario.initial_state = states::DensityOperator(
          linalg::kron_power(single, n_subsystems),
          states::TraceClass::Normalized);
    } else if (type == "matrix") {
      scenario.initial_state = states::DensityOperator(
          complex_matrix_from_json(initial_state.at("data"),
                                   static_cast<int>(dim_mn),
                                   static_cast<int>(dim_mn)),
          states::TraceClass::Normalized);
    } else {
      throw InvalidInput("scenario: unknown initial state type '" + type + "'");
    }
  } else {
    throw InvalidInput("scenario: initial_state must be a name or an object");
  }

  // Full-space model available only for projected-unitary custom models.
  if (!model.is_two_level() && model.accessible_dim > 0 &&
      model.accessible_dim < model.dim && model.hermitian) {
    scenario.full_space = composite::FullSpaceModel{
        model.hamiltonian_family(),
        states::SubspaceProjector::leading(model.dim, model.accessible_dim)};
  }
  return scenario;
}

ScenarioDefinition scenario_from_json(const json& j) {
  ScenarioDefinition def;
  def.n_subsystems = j.value("N", 2);
  if (def.n_subsystems < 1) throw InvalidInput("scenario: N must be >= 1");
  def.model = model_from_json(j.at("model"));
  if (j.contains("initial_state")) def.initial_state = j.at("initial_state");
  if (j.contains("g")) def.g = parse_double(j.at("g"));
  return def;
}

}  // namespace locfisher::serialization
