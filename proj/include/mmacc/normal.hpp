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

#ifndef MMACC_NORMAL_HPP_
#define MMACC_NORMAL_HPP_

namespace mmacc {

// Standard normal CDF, accurate in both tails (erfc based).
double standard_normal_cdf(double x);

// Standard normal quantile (inverse CDF). Rational approximation refined by
// Halley steps; relative error well below 1e-9 across (0, 1).
double standard_normal_quantile(double p);

// Hockey-stick divergence of the Gaussian pair (N(sens, sigma^2), N(0,
// sigma^2)) at epsilon:
//   delta = Phi(sens/(2 sigma) - eps sigma/sens)
//           - e^eps Phi(-sens/(2 sigma) - eps sigma/sens).
double gaussian_delta(double epsilon, double sensitivity, double sigma);

// Smallest epsilon >= 0 with gaussian_delta(epsilon) <= delta, by bisection.
double gaussian_epsilon(double delta, double sensitivity, double sigma);

}  // namespace mmacc

#endif  // MMACC_NORMAL_HPP_
