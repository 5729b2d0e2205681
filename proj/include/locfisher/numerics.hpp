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

#ifndef LOCFISHER_NUMERICS_HPP
#define LOCFISHER_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

namespace locfisher::numerics {

inline double fd_step(double g) { return std::max(1e-6, 1e-6 * std::abs(g)); }

// Central difference with one Richardson extrapolation step, ~O(h^4).
// f may return a scalar or an Eigen matrix (anything with +,-,/double).
template <typename F>
auto richardson_derivative(F&& f, double g) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  const double h = fd_step(g);
  T coarse = (f(g + h) - f(g - h)) / (2.0 * h);
  T fine = (f(g + h / 2.0) - f(g - h / 2.0)) / h;
  T out = (4.0 * fine - coarse) / 3.0;
  return out;
}

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section maximum of a unimodal function on [a, b].
Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double a, double b, double x_tolerance);

// Least-squares slope of log(y) against log(x). Requires positive data.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> linear_grid(double start, double stop, int points);
std::vector<double> log_grid(double start, double stop, int points);

}  // namespace locfisher::numerics

#endif  // LOCFISHER_NUMERICS_HPP
