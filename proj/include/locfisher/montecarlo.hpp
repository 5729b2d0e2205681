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

#ifndef LOCFISHER_MONTECARLO_HPP
#define LOCFISHER_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "locfisher/fisher.hpp"
#include "locfisher/states.hpp"

// Simulated projective measurements of local estimators, empirical error
// statistics, and the statistical side of the Cramer-Rao checks. Sampling is
// bit-reproducible given the seed (mt19937_64 + SplitMix64 substreams;
// uniforms derived from raw engine output).
namespace locfisher::montecarlo {

// Spectral measurement of an estimator in a given state: outcomes are the
// merged eigenvalues, probabilities the Born weights of their projectors.
struct MeasurementModel {
  std::vector<double> outcomes;
  std::vector<double> probabilities;

  static MeasurementModel from_matrices(const ComplexMatrix& rho,
                                        const ComplexMatrix& estimator);
  static MeasurementModel from_state(const states::BlankExtendedState& state,
                                     const states::LocalEstimator& estimator);

  double expectation() const;
  double variance() const;
};

// Eigenvalues closer than this (relative to the spectral radius) are merged
// into one outcome; Born probabilities depend only on spectral projectors.
inline constexpr double kDegeneracyTolerance = 1e-10;

// n_shots i.i.d. Born draws; deterministic given the seed.
std::vector<double> sample_outcomes(const MeasurementModel& model,
                                    std::size_t n_shots, std::uint64_t seed);

// Per-shot averages of n_average independent single-system draws: the Born
// statistics of the averaged estimator on a product state, where the one-site
// observables commute and are jointly measurable.
std::vector<double> sample_average_outcomes(const MeasurementModel& model,
                                            int n_average,
                                            std::size_t n_shots,
                                            std::uint64_t seed);

struct RunStatistics {
  std::size_t n_shots = 0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;  // unbiased, n-1 denominator
  double g_estimate = 0.0;
  double empirical_mse = 0.0;  // (g_estimate - g_reference)^2
  std::uint64_t rng_seed = 0;
};

RunStatistics estimate_from_shots(const std::vector<double>& outcomes,
                                  const fisher::AffineCalibration& calibration,
                                  double g_reference, std::uint64_t seed_used);

struct CrCheckReport {
  double fisher_information = 0.0;
  double mean_ratio = 0.0;  // mean over repeats of (empirical dg^2) * J
  double ratio_standard_error = 0.0;
  std::vector<RunStatistics> repeats;
};

// Empirical delta-g^2 over repeated shot batches against 1/J.
CrCheckReport empirical_cr_check(const fisher::StateFamily& family,
                                 const states::LocalEstimator& estimator,
                                 double g, std::size_t n_shots, int n_repeats,
                                 std::uint64_t seed);

}  // namespace locfisher::montecarlo

#endif  // LOCFISHER_MONTECARLO_HPP
