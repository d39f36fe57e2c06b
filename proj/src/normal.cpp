// Copyright 2026 The MMACC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmacc/normal.hpp"

#include <cmath>
#include <limits>

#include "mmacc/errors.hpp"

namespace mmacc {
namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;

// Acklam's rational approximation to the standard normal quantile.
double quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw OutOfRangeError("standard_normal_quantile: p must be in (0, 1)");
  }
  double x = quantile_estimate(p);
  // Two Halley refinement steps against the erfc-based CDF.
  for (int i = 0; i < 2; ++i) {
    double e = standard_normal_cdf(x) - p;
    double pdf = std::exp(-0.5 * x * x) / kSqrt2Pi;
    if (pdf <= 0.0) break;
    double u = e / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double gaussian_delta(double epsilon, double sensitivity, double sigma) {
  if (sensitivity <= 0.0) return 0.0;
  double a = sensitivity / (2.0 * sigma);
  double b = epsilon * sigma / sensitivity;
  return standard_normal_cdf(a - b) -
         std::exp(epsilon) * standard_normal_cdf(-a - b);
}

double gaussian_epsilon(double delta, double sensitivity, double sigma) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfRangeError("gaussian_epsilon: delta must be in (0, 1)");
  }
  if (gaussian_delta(0.0, sensitivity, sigma) <= delta) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (gaussian_delta(hi, sensitivity, sigma) > delta) {
    hi *= 2.0;
    if (hi > 1e9) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (gaussian_delta(mid, sensitivity, sigma) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace mmacc
