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

#include "locfisher/numerics.hpp"

#include <stdexcept>

#include "locfisher/types.hpp"

namespace locfisher::numerics {

Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double a, double b, double x_tolerance) {
  if (!(a < b)) throw InvalidInput("golden_section_maximize: need a < b");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = (a + b) / 2.0;
  return {x, f(x)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("loglog_slope: need matching series of length >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw InvalidInput("loglog_slope: data must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> linear_grid(double start, double stop, int points) {
  if (points < 1) throw InvalidInput("grid: need at least one point");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  for (int i = 0; i < points; ++i)
    out[i] = start + (stop - start) * i / (points - 1);
  return out;
}

std::vector<double> log_grid(double start, double stop, int points) {
  if (points < 1) throw InvalidInput("grid: need at least one point");
  if (start <= 0.0 || stop <= 0.0)
    throw InvalidInput("log grid requires positive endpoints");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  const double ls = std::log(start);
  const double le = std::log(stop);
  for (int i = 0; i < points; ++i)
    out[i] = std::exp(ls + (le - ls) * i / (points - 1));
  return out;
}

}  // namespace locfisher::numerics
