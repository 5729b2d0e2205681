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

#include <doctest.h>

#include "locfisher/rng.hpp"
#include "locfisher/serialization.hpp"
#include "test_support.hpp"

using namespace locfisher;
using serialization::json;

TEST_SUITE_BEGIN("serialization");

TEST_CASE("decimal strings round-trip doubles exactly") {
  for (double x : {1.0 / 3.0, 1e-300, -0.1, 2.5e17, 0.0}) {
    const std::string s = serialization::format_double(x);
    CHECK(serialization::parse_double(json(s)) == x);
  }
}

TEST_CASE("mask keys use 1-based comma-joined labels") {
  CHECK(serialization::mask_to_key(0u, 3) == "");
  CHECK(serialization::mask_to_key(0b101u, 3) == "1,3");
  CHECK(serialization::key_to_mask("1,3", 3) == 0b101u);
  CHECK(serialization::key_to_mask("", 3) == 0u);
  CHECK_THROWS_AS(serialization::key_to_mask("4", 3), InvalidInput);
}

TEST_CASE("custom effective model reproduces the decay channel") {
  // A full-dimension non-Hermitian custom model is interpreted as an
  // effective evolution on the accessible space itself.
  const json spec_json = {
      {"type", "custom"},
      {"dim", 2},
      {"accessible_dim", 2},
      {"hermitian", false},
      {"hamiltonian_coefficients",
       json::array({
           json::array({json::array({"0", "-2"}), json::array({"0", "0"}),
                        json::array({"0", "0"}), json::array({"0", "-1"})}),
           json::array({json::array({"0", "0"}), json::array({"1", "0"}),
                        json::array({"1", "0"}), json::array({"0", "0"})}),
       })}};
  const auto model = serialization::model_from_json(spec_json);
  const auto channels = model.channel_family();
  const scenarios::TwoLevelDecayModel reference(2.0, 1.0);
  Rng rng(3001);
  const ComplexMatrix rho = random_density_matrix(rng, 2);
  const double g = 0.03, t = 0.8;
  CHECK(linalg::max_abs(channels(g, t).apply(rho) -
                        reference.channel(g, t).apply(rho)) < 1e-12);
}

TEST_CASE("scenario initial-state forms") {
  json base = {{"N", 2},
               {"model",
                {{"type", "two_level_decay"},
                 {"params", {{"gamma_plus", 2.0}, {"gamma_minus", 1.0}}}}},
               {"g", 1e-3}};

  SUBCASE("iid of a given pure state") {
    base["initial_state"] = {
        {"type", "iid"},
        {"pure", json::array({json::array({"0.6", "0"}),
                              json::array({"0.8", "0"})})}};
    const auto scenario = serialization::scenario_from_json(base).build();
    // rho0 = (psi psi^dag)^(x)2 with psi = (0.6, 0.8).
    CHECK(scenario.initial().trace() == doctest::Approx(1.0));
    CHECK(scenario.initial().matrix()(0, 0).real() ==
          doctest::Approx(0.36 * 0.36));
  }

  SUBCASE("explicit matrix") {
    ComplexMatrix rho0 = ComplexMatrix::Zero(4, 4);
    rho0(0, 0) = 0.5;
    rho0(3, 3) = 0.5;
    base["initial_state"] = {
        {"type", "matrix"},
        {"data", serialization::complex_matrix_to_json(rho0)}};
    const auto scenario = serialization::scenario_from_json(base).build();
    CHECK(linalg::max_abs(scenario.initial().matrix() - rho0) == 0.0);
  }

  SUBCASE("unknown names are rejected") {
    base["initial_state"] = "squeezed";
    CHECK_THROWS_AS(serialization::scenario_from_json(base).build(),
                    InvalidInput);
  }
}

TEST_CASE("model validation errors") {
  CHECK_THROWS_AS(
      serialization::model_from_json(json{{"type", "unknown_model"}}),
      InvalidInput);
  CHECK_THROWS_AS(serialization::model_from_json(json{
                      {"type", "two_level_decay"},
                      {"params",
                       {{"gamma_plus", 1.0}, {"gamma_minus", 1.0}}}}),
                  InvalidInput);
  CHECK_THROWS_AS(
      serialization::model_from_json(json{{"type", "custom"},
                                          {"dim", 2},
                                          {"hamiltonian_coefficients",
                                           json::array()}}),
      InvalidInput);
}

TEST_SUITE_END();
