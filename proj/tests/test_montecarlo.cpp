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

#include <numeric>

#include "locfisher/montecarlo.hpp"
#include "locfisher/numerics.hpp"
#include "locfisher/scenarios.hpp"
#include "test_support.hpp"

using namespace locfisher;
using montecarlo::MeasurementModel;

TEST_SUITE_BEGIN("montecarlo");

namespace {

MeasurementModel coin_model() {
  // Measuring sigma_x in |0>: outcomes +-1 with probability 1/2 each.
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  return MeasurementModel::from_matrices(rho, test::pauli_x());
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return v / static_cast<double>(xs.size() - 1);
}

}  // namespace

TEST_CASE("eigenstates are dispersion free") {
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  const auto model = MeasurementModel::from_matrices(rho, test::pauli_z());
  const auto outcomes = montecarlo::sample_outcomes(model, 100, 7);
  for (double x : outcomes) CHECK(x == doctest::Approx(1.0));
  CHECK(model.variance() == doctest::Approx(0.0));
}

TEST_CASE("fair coin sample mean within 4 sigma") {
  const auto model = coin_model();
  CHECK(model.probabilities.size() == 2);
  CHECK(model.probabilities[0] == doctest::Approx(0.5));
  const auto outcomes = montecarlo::sample_outcomes(model, 1000000, 12345);
  // 4 sigma = 4 / sqrt(n) = 0.004.
  CHECK(std::abs(mean_of(outcomes)) < 0.004);
}

TEST_CASE("chi-square goodness of fit at alpha = 0.001") {
  // Unequal three-outcome distribution from a diagonal estimator.
  ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.3;
  rho(2, 2) = 0.2;
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 2) = 5.0;
  const auto model = MeasurementModel::from_matrices(rho, a);
  const std::size_t n = 100000;
  const auto outcomes = montecarlo::sample_outcomes(model, n, 99);
  std::vector<double> counts(model.outcomes.size(), 0.0);
  for (double x : outcomes)
    for (std::size_t k = 0; k < model.outcomes.size(); ++k)
      if (x == model.outcomes[k]) ++counts[k];
  double chi2 = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double expected = model.probabilities[k] * static_cast<double>(n);
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  // Critical value of chi^2 with 2 degrees of freedom at alpha = 0.001.
  CHECK(chi2 < 13.816);
}

TEST_CASE("sampling is deterministic per seed and decorrelated per stream") {
  const auto model = coin_model();
  const auto a = montecarlo::sample_outcomes(model, 1000, 42);
  const auto b = montecarlo::sample_outcomes(model, 1000, 42);
  CHECK(a == b);
  const auto c = montecarlo::sample_outcomes(model, 1000, 43);
  CHECK(a != c);
}

TEST_CASE("degenerate eigenvalues merge into one outcome") {
  ComplexMatrix rho = ComplexMatrix::Identity(3, 3) / 3.0;
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0 + 1e-14;
  a(2, 2) = 2.0;
  const auto model = MeasurementModel::from_matrices(rho, a);
  REQUIRE(model.outcomes.size() == 2);
  // Outcomes are in descending order: {2, merged 1}.
  CHECK(model.outcomes[0] == doctest::Approx(2.0));
  CHECK(model.outcomes[1] == doctest::Approx(1.0));
  CHECK(model.probabilities[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("estimate_from_shots recovers g exactly for dispersion-free states") {
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  const auto model = MeasurementModel::from_matrices(rho, test::pauli_z());
  const auto outcomes = montecarlo::sample_outcomes(model, 1, 3);
  // Calibration: g = (x - 1) / 2 + 0.5, so a mean of 1 maps to g = 0.5.
  const fisher::AffineCalibration f{0.5, 0.0};
  const auto stats = montecarlo::estimate_from_shots(outcomes, f, 0.5, 3);
  CHECK(stats.g_estimate == doctest::Approx(0.5));
  CHECK(stats.empirical_mse == doctest::Approx(0.0));
  CHECK(stats.sample_variance == doctest::Approx(0.0));
}

TEST_CASE("empirical error matches the Cramer-Rao prediction") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const double g = 1e-3;
  const double t = model.optimal_time().t_star;
  const auto family = model.single_system_family(t);
  const auto report = family.local_fisher_at(g);
  const auto check = montecarlo::empirical_cr_check(
      family, report.optimal_estimator, g, 100000, 10, 2024);
  CHECK(check.fisher_information == doctest::Approx(report.value));
  CHECK(check.mean_ratio == doctest::Approx(1.0).epsilon(0.05));
  // Estimates land close to the true g.
  for (const auto& stats : check.repeats)
    CHECK(std::abs(stats.g_estimate - g) <
          5.0 / std::sqrt(100000.0 * report.value));
}

TEST_CASE("sigma_x is exactly insensitive in the decay model") {
  // The upper amplitude stays real and the lower stays imaginary for every
  // order in g, so E[sigma_x] = 2 Re rho_01 vanishes identically and no
  // calibration exists.
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const auto family = model.single_system_family(model.optimal_time().t_star);
  CHECK_THROWS_AS(
      fisher::calibrate_linear(family, model.sigma_x_estimator(), 1e-3),
      InvalidInput);
}

TEST_CASE("suboptimal estimator has a ratio well above one") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const double g = 1e-3;
  const double t = model.optimal_time().t_star;
  const auto family = model.single_system_family(t);
  // sigma_y + 5 sigma_z is sensitive but variance-heavy.
  states::LocalEstimator detuned = model.sigma_y_estimator();
  detuned.accessible_block += 5.0 * test::pauli_z();
  const auto check =
      montecarlo::empirical_cr_check(family, detuned, g, 20000, 5, 77);
  CHECK(check.mean_ratio > 10.0);
}

TEST_CASE("variance of the sample mean decays as 1/n") {
  const auto model = coin_model();
  std::vector<double> ns{1000, 10000, 100000};
  std::vector<double> variances;
  for (double n : ns) {
    const auto outcomes = montecarlo::sample_outcomes(
        model, static_cast<std::size_t>(n), 5150);
    // Variance of the mean estimated from the sample variance.
    variances.push_back(variance_of(outcomes) / n);
  }
  const double slope = numerics::loglog_slope(ns, variances);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("averaged estimator variance scales as 1/N") {
  const scenarios::TwoLevelDecayModel model(2.0, 1.0);
  const double g = 1e-3, t = 0.9;
  const auto family = model.single_system_family(t);
  const auto measurement =
      MeasurementModel::from_state(family.eval(g), model.sigma_y_estimator());
  const double v1 = measurement.variance();
  for (int n_average : {1, 2, 4, 8}) {
    const auto outcomes = montecarlo::sample_average_outcomes(
        measurement, n_average, 200000, 31 + n_average);
    CHECK(variance_of(outcomes) * n_average ==
          doctest::Approx(v1).epsilon(0.1));
  }
}

TEST_SUITE_END();
