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

#include "mmacc/applications.hpp"

#include <algorithm>
#include <cmath>

#include "mmacc/errors.hpp"
#include "mmacc/mog.hpp"

namespace mmacc {
namespace {

double max_epsilon_both(const MixtureGaussian& mog,
                        const DiscretizationConfig& cfg, std::int64_t copies,
                        double delta) {
  double epsilon = 0.0;
  for (Adjacency adjacency : {Adjacency::kRemove, Adjacency::kAdd}) {
    DiscretePLD pld = pld_from_mog(mog, cfg, adjacency);
    DiscretePLD composed = compose_all({{pld, copies}});
    epsilon = std::max(
        epsilon, epsilon_for_delta(composed, delta, cfg.inverse_tolerance));
  }
  return epsilon;
}

}  // namespace

double last_iterate_linear_epsilon(std::int64_t rounds, double p, double sigma,
                                   double delta,
                                   const DiscretizationConfig& cfg) {
  if (rounds < 1 || !(p > 0.0 && p < 1.0) || !(sigma > 0.0)) {
    throw OutOfRangeError("last_iterate_linear_epsilon: invalid parameters");
  }
  MixtureGaussian mog = mog_from_binomial(
      rounds, p, 1.0, sigma * std::sqrt(static_cast<double>(rounds)));
  // The last-iterate dominating pair puts the no-record Gaussian in the
  // numerator, so only that orientation is composed.
  DiscretePLD pld = pld_from_mog(mog, cfg, Adjacency::kAdd);
  return epsilon_for_delta(pld, delta, cfg.inverse_tolerance);
}

double group_privacy_dpsgd_epsilon(std::int64_t group_size, double p,
                                   double sigma, std::int64_t rounds,
                                   double delta,
                                   const DiscretizationConfig& cfg) {
  if (group_size < 1 || rounds < 1 || !(p > 0.0 && p < 1.0) ||
      !(sigma > 0.0)) {
    throw OutOfRangeError("group_privacy_dpsgd_epsilon: invalid parameters");
  }
  MixtureGaussian mog = mog_from_binomial(group_size, p, 1.0, sigma);
  return max_epsilon_both(mog, cfg, rounds, delta);
}

double group_privacy_fixed_batch_epsilon(std::int64_t group_size,
                                         std::int64_t population,
                                         std::int64_t batch, double sigma,
                                         std::int64_t rounds, double delta,
                                         const DiscretizationConfig& cfg) {
  if (group_size < 1 || rounds < 1 || !(sigma > 0.0)) {
    throw OutOfRangeError("group_privacy_fixed_batch_epsilon: invalid "
                          "parameters");
  }
  MixtureGaussian mog =
      mog_from_hypergeometric(population, group_size, batch, 1.0, sigma);
  return max_epsilon_both(mog, cfg, rounds, delta);
}

}  // namespace mmacc
