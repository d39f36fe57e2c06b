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

#ifndef MMACC_APPLICATIONS_HPP_
#define MMACC_APPLICATIONS_HPP_

#include <cstdint>

#include "mmacc/pld.hpp"

namespace mmacc {

// Last iterate of noisy SGD on linear losses over `rounds` subsampled steps:
// a single Gaussian mechanism with Binomial(rounds, p) sensitivity and
// standard deviation sigma * sqrt(rounds). Uses the dominating pair with the
// no-record Gaussian as the numerator.
double last_iterate_linear_epsilon(std::int64_t rounds, double p, double sigma,
                                   double delta,
                                   const DiscretizationConfig& cfg = {});

// Group privacy for DP-SGD with Poisson sampling: the n-fold composition of
// a Gaussian mechanism with Binomial(group_size, p) sensitivity.
double group_privacy_dpsgd_epsilon(std::int64_t group_size, double p,
                                   double sigma, std::int64_t rounds,
                                   double delta,
                                   const DiscretizationConfig& cfg = {});

// Fixed-size-batch variant: the per-round sensitivity counts group members
// in a batch of `batch` drawn from `population` without replacement
// (hypergeometric instead of binomial).
double group_privacy_fixed_batch_epsilon(std::int64_t group_size,
                                         std::int64_t population,
                                         std::int64_t batch, double sigma,
                                         std::int64_t rounds, double delta,
                                         const DiscretizationConfig& cfg = {});

}  // namespace mmacc

#endif  // MMACC_APPLICATIONS_HPP_
