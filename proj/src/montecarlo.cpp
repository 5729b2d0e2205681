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

#include "locfisher/montecarlo.hpp"

#include <cmath>
#include <sstream>

#include "locfisher/linalg.hpp"
#include "locfisher/rng.hpp"

namespace locfisher::montecarlo {

MeasurementModel MeasurementModel::from_matrices(
    const ComplexMatrix& rho, const ComplexMatrix& estimator) {
  if (rho.rows() != estimator.rows() || rho.cols() != estimator.cols())
    throw InvalidInput("MeasurementModel: state/estimator dim mismatch");
  if (!linalg::is_hermitian(estimator))
    throw InvalidInput("MeasurementModel: estimator must be Hermitian");
  const linalg::EigResult eig = linalg::hermitian_eig(estimator);
  const int n = static_cast<int>(eig.values.size());
  const double scale = std::max(std::abs(eig.values(0)),
                                std::abs(eig.values(n - 1)));
  const double merge = kDegeneracyTolerance * std::max(scale, 1e-300);

  MeasurementModel model;
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && std::abs(eig.values(stop) - eig.values(start)) < merge)
      ++stop;
    // Projector probability summed over the degenerate group.
    double p = 0.0;
    double value = 0.0;
    for (int i = start; i < stop; ++i) {
      p += (eig.vectors.col(i).adjoint() * rho * eig.vectors.col(i))(0, 0)
               .real();
      value += eig.values(i);
    }
    value /= (stop - start);
    if (p < -1e-12) {
      std::ostringstream msg;
      msg << "MeasurementModel: Born probability " << p << " below tolerance";
      throw NumericError(msg.str());
    }
    model.outcomes.push_back(value);
    model.probabilities.push_back(std::max(p, 0.0));
    start = stop;
  }
  double total = 0.0;
  for (double p : model.probabilities) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "MeasurementModel: probabilities sum to " << total;
    throw NumericError(msg.str());
  }
  return model;
}

MeasurementModel MeasurementModel::from_state(
    const states::BlankExtendedState& state,
    const states::LocalEstimator& estimator) {
  return from_matrices(state.extended_matrix(), estimator.extended_matrix());
}

double MeasurementModel::expectation() const {
  double e = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    e += probabilities[i] * outcomes[i];
  return e;
}

double MeasurementModel::variance() const {
  const double e = expectation();
  double v = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    v += probabilities[i] * (outcomes[i] - e) * (outcomes[i] - e);
  return v;
}

namespace {

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0 + 1e-15;  // guard the final bin against rounding
  return cdf;
}

inline std::size_t draw(const std::vector<double>& cdf, double u) {
  std::size_t k = 0;
  while (u >= cdf[k]) ++k;
  return k;
}

}  // namespace

std::vector<double> sample_outcomes(const MeasurementModel& model,
                                    std::size_t n_shots, std::uint64_t seed) {
  if (n_shots < 1) throw InvalidInput("sample_outcomes: need n_shots >= 1");
  const std::vector<double> cdf = cumulative(model.probabilities);
  Rng rng(seed);
  std::vector<double> out(n_shots);
  for (std::size_t s = 0; s < n_shots; ++s)
    out[s] = model.outcomes[draw(cdf, rng.uniform())];
  return out;
}

std::vector<double> sample_average_outcomes(const MeasurementModel& model,
                                            int n_average,
                                            std::size_t n_shots,
                                            std::uint64_t seed) {
  if (n_average < 1)
    throw InvalidInput("sample_average_outcomes: need n_average >= 1");
  if (n_shots < 1)
    throw InvalidInput("sample_average_outcomes: need n_shots >= 1");
  const std::vector<double> cdf = cumulative(model.probabilities);
  Rng rng(seed);
  std::vector<double> out(n_shots);
  for (std::size_t s = 0; s < n_shots; ++s) {
    double sum = 0.0;
    for (int i = 0; i < n_average; ++i)
      sum += model.outcomes[draw(cdf, rng.uniform())];
    out[s] = sum / n_average;
  }
  return out;
}

RunStatistics estimate_from_shots(const std::vector<double>& outcomes,
                                  const fisher::AffineCalibration& calibration,
                                  double g_reference,
                                  std::uint64_t seed_used) {
  if (outcomes.empty())
    throw InvalidInput("estimate_from_shots: no outcomes");
  RunStatistics stats;
  stats.n_shots = outcomes.size();
  stats.rng_seed = seed_used;
  double mean = 0.0;
  for (double x : outcomes) mean += x;
  mean /= static_cast<double>(outcomes.size());
  double var = 0.0;
  for (double x : outcomes) var += (x - mean) * (x - mean);
  var = outcomes.size() > 1 ? var / static_cast<double>(outcomes.size() - 1)
                            : 0.0;
  stats.sample_mean = mean;
  stats.sample_variance = var;
  stats.g_estimate = calibration(mean);
  stats.empirical_mse =
      (stats.g_estimate - g_reference) * (stats.g_estimate - g_reference);
  return stats;
}

CrCheckReport empirical_cr_check(const fisher::StateFamily& family,
                                 const states::LocalEstimator& estimator,
                                 double g, std::size_t n_shots, int n_repeats,
                                 std::uint64_t seed) {
  if (n_repeats < 1)
    throw InvalidInput("empirical_cr_check: need n_repeats >= 1");
  const fisher::FisherReport info = family.local_fisher_at(g);
  const fisher::AffineCalibration calibration =
      fisher::calibrate_linear(family, estimator, g);
  const MeasurementModel model =
      MeasurementModel::from_state(family.eval(g), estimator);

  CrCheckReport report;
  report.fisher_information = info.value;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < n_repeats; ++r) {
    const std::uint64_t repeat_seed =
        Rng::stream_seed(seed, static_cast<std::uint64_t>(r));
    std::vector<double> outcomes = sample_outcomes(model, n_shots, repeat_seed);
    RunStatistics stats =
        estimate_from_shots(outcomes, calibration, g, repeat_seed);
    // Empirical dg^2: the sampled variance pulled back through the
    // calibration slope.
    const double dg_sq =
        stats.sample_variance * calibration.scale * calibration.scale;
    const double ratio = dg_sq * info.value;
    sum += ratio;
    sum_sq += ratio * ratio;
    report.repeats.push_back(stats);
  }
  const double n = static_cast<double>(n_repeats);
  report.mean_ratio = sum / n;
  if (n_repeats > 1) {
    const double var = (sum_sq - sum * sum / n) / (n - 1.0);
    report.ratio_standard_error = std::sqrt(std::max(var, 0.0) / n);
  }
  return report;
}

}  // namespace locfisher::montecarlo
