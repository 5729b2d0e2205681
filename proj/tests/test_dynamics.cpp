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

#include "locfisher/dynamics.hpp"
#include "locfisher/rng.hpp"
#include "locfisher/scenarios.hpp"
#include "test_support.hpp"

using namespace locfisher;
using dynamics::QuantumChannel;
using linalg::max_abs;
using states::DensityOperator;
using states::SubspaceProjector;
using states::TraceClass;

TEST_SUITE_BEGIN("dynamics");

namespace {

dynamics::HamiltonianFamily random_full_family(Rng& rng, int dim) {
  const ComplexMatrix h0 = random_hermitian(rng, dim);
  const ComplexMatrix h1 = random_hermitian(rng, dim);
  return dynamics::HamiltonianFamily{
      dim, true, [h0, h1](double g) -> ComplexMatrix { return h0 + g * h1; }};
}

}  // namespace

TEST_CASE("hermitian evolution preserves the trace") {
  Rng rng(101);
  const auto family = random_full_family(rng, 3);
  const DensityOperator rho0(random_density_matrix(rng, 3),
                             TraceClass::Normalized);
  const auto evolved = dynamics::evolve_nonhermitian(family, rho0, 0.4, 1.3);
  CHECK(evolved.trace() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-level model decays as exp(-2 gamma_plus t) at g=0") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  for (double t : {0.25, 1.0, 2.5}) {
    const auto evolved = dynamics::evolve_nonhermitian(
        model.family(), DensityOperator(rho0, TraceClass::Normalized), 0.0, t);
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 0) = std::exp(-2.0 * model.gamma_plus() * t);
    CHECK(max_abs(evolved.matrix() - expected) < 1e-12);
  }
}

TEST_CASE("two-level first-order coherence is i g d(t) e^{-gamma_plus t}") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const double g = 1e-4;
  ComplexMatrix rho0 = ComplexMatrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  for (double t : {0.3, 0.8, 1.7}) {
    const auto evolved = dynamics::evolve_nonhermitian(
        model.family(), DensityOperator(rho0, TraceClass::Normalized), g, t);
    const Complex coherence = evolved.matrix()(1, 0);  // <-|rho|+>
    const Complex expected = kImaginaryUnit * g * model.d(t) *
                             std::exp(-model.gamma_plus() * t);
    CHECK(std::abs(coherence - expected) < 10.0 * g * g);
  }
}

TEST_CASE("trace growth is rejected") {
  dynamics::HamiltonianFamily anti_dissipative{
      2, false, [](double) -> ComplexMatrix {
        return kImaginaryUnit * ComplexMatrix::Identity(2, 2);
      }};
  const DensityOperator rho0(ComplexMatrix::Identity(2, 2) / 2.0,
                             TraceClass::Normalized);
  CHECK_THROWS_AS(
      dynamics::evolve_nonhermitian(anti_dissipative, rho0, 0.0, 1.0),
      NumericError);
}

TEST_CASE("channel_from_unitary at t=0 is the identity on M") {
  Rng rng(103);
  const auto family = random_full_family(rng, 4);
  const auto p = SubspaceProjector::leading(4, 2);
  const auto channel = QuantumChannel::from_unitary(family, p, 0.3, 0.0);
  const ComplexMatrix x = random_hermitian(rng, 2);
  CHECK(max_abs(channel.apply(x) - x) < 1e-12);
}

TEST_CASE("channel with trivial projector is trace preserving") {
  Rng rng(107);
  const auto family = random_full_family(rng, 3);
  const auto p = SubspaceProjector::leading(3, 3);
  const auto channel = QuantumChannel::from_unitary(family, p, 0.2, 0.8);
  const ComplexMatrix rho = random_density_matrix(rng, 3);
  const ComplexMatrix out = channel.apply(rho);
  CHECK(out.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projected channel: Choi positive, trace non-increasing") {
  Rng rng(109);
  const auto family = random_full_family(rng, 4);
  const auto p = SubspaceProjector::leading(4, 2);
  const auto channel = QuantumChannel::from_unitary(family, p, 0.15, 1.1);
  CHECK(channel.choi_min_eigenvalue() >= -dynamics::kChoiTolerance);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix rho = random_density_matrix(rng, 2);
    const ComplexMatrix out = channel.apply(rho);
    CHECK(out.trace().real() <= 1.0 + 1e-10);
    const auto eig = linalg::hermitian_eig(linalg::hermitian_part(out));
    CHECK(eig.values(eig.values.size() - 1) >= -1e-10);
  }
}

TEST_CASE("channel rejects a non-Hermitian full Hamiltonian") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  CHECK_THROWS_AS(QuantumChannel::from_unitary(
                      model.family(), SubspaceProjector::leading(2, 1), 0.0, 1.0),
                  InvalidInput);
}

TEST_CASE("lindblad exponential matches the non-hermitian evolution") {
  // Two independent evolution paths for the decay model: superoperator
  // exponential against K rho K^dag.
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const double g = 0.05;
  Rng rng(113);
  const ComplexMatrix rho0 = random_density_matrix(rng, 2);
  for (double t : {0.0, 0.4, 1.2}) {
    const auto channel =
        dynamics::channel_from_lindblad(model.lindblad_generator(g), t);
    const auto direct = dynamics::evolve_nonhermitian(
        model.family(), DensityOperator(rho0, TraceClass::Normalized), g, t);
    CHECK(max_abs(channel.apply(rho0) - direct.matrix()) < 1e-9);
  }
}

TEST_CASE("semigroup property of the lindblad channel") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const auto generator = model.lindblad_generator(0.1);
  const auto g1 = dynamics::channel_from_lindblad(generator, 0.3);
  const auto g2 = dynamics::channel_from_lindblad(generator, 0.9);
  const auto g12 = dynamics::channel_from_lindblad(generator, 1.2);
  Rng rng(127);
  const ComplexMatrix rho = random_density_matrix(rng, 2);
  CHECK(max_abs(g12.apply(rho) - g2.apply(g1.apply(rho))) < 1e-9);
}

TEST_CASE("generator consistency with finite differences") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const auto generator = model.lindblad_generator(0.07);
  Rng rng(131);
  const ComplexMatrix x = random_hermitian(rng, 2);
  const double delta = 1e-6;
  const auto channel = dynamics::channel_from_lindblad(generator, delta);
  const ComplexMatrix fd = (channel.apply(x) - x) / delta;
  CHECK(max_abs(fd - generator.apply(x)) < 1e-4);
}

TEST_CASE("tensor_apply factorizes on product inputs") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const auto channel = model.channel(0.03, 0.6);
  Rng rng(137);
  const ComplexMatrix a = random_hermitian(rng, 2);
  const ComplexMatrix b = random_hermitian(rng, 2);
  CHECK(max_abs(channel.tensor_apply(1, a) - channel.apply(a)) < 1e-13);
  const ComplexMatrix product = linalg::tensor(a, b);
  const ComplexMatrix expected =
      linalg::tensor(channel.apply(a), channel.apply(b));
  CHECK(max_abs(channel.tensor_apply(2, product) - expected) < 1e-12);
}

TEST_CASE("tensor_apply matches the permuted Kronecker superoperator oracle") {
  // Entangled input at k=2 against an independent construction: the
  // two-site superoperator built from matrix elements
  // <i'|G[|i><j|]|j'> <k'|G[|k><l|]|l'> contracted explicitly.
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const auto channel = model.channel(0.08, 0.9);
  const ComplexMatrix& s = channel.superoperator();
  const int d = 2;
  const auto element = [&](int i2, int j2, int i1, int j1) {
    return s(j2 * d + i2, j1 * d + i1);  // <i2|G[|i1><j1|]|j2>
  };
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix x = bell * bell.adjoint();

  ComplexMatrix oracle = ComplexMatrix::Zero(4, 4);
  for (int ia = 0; ia < d; ++ia)
    for (int ib = 0; ib < d; ++ib)
      for (int ja = 0; ja < d; ++ja)
        for (int jb = 0; jb < d; ++jb) {
          Complex sum = 0.0;
          for (int ka = 0; ka < d; ++ka)
            for (int kb = 0; kb < d; ++kb)
              for (int la = 0; la < d; ++la)
                for (int lb = 0; lb < d; ++lb)
                  sum += element(ia, ja, ka, la) * element(ib, jb, kb, lb) *
                         x(ka * d + kb, la * d + lb);
          oracle(ia * d + ib, ja * d + jb) = sum;
        }
  CHECK(max_abs(channel.tensor_apply(2, x) - oracle) < 1e-10);
}

TEST_CASE("channels preserve positivity on random inputs") {
  Rng rng(139);
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const auto channel = model.channel(0.02, 0.7);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix rho = random_density_matrix(rng, 2);
    const auto eig =
        linalg::hermitian_eig(linalg::hermitian_part(channel.apply(rho)));
    CHECK(eig.values(eig.values.size() - 1) >= -1e-10);
  }
}

TEST_CASE("trace is monotone in t for the dissipative model") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  Rng rng(149);
  const ComplexMatrix rho = random_density_matrix(rng, 2);
  double previous = 1.0;
  for (double t = 0.0; t <= 3.0; t += 0.1) {
    const double trace = model.channel(0.05, t).apply(rho).trace().real();
    CHECK(trace <= previous + 1e-12);
    previous = trace;
  }
}

TEST_SUITE_END();
