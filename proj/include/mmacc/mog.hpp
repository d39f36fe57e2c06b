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

#ifndef MMACC_MOG_HPP_
#define MMACC_MOG_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "mmacc/pld.hpp"

namespace mmacc {

// Gaussian mechanism whose sensitivity is a random scalar: with probability
// probabilities[i] the output is N(sensitivities[i], sigma^2), compared
// against the reference N(0, sigma^2).
struct MixtureGaussian {
  std::vector<double> probabilities;  // sum to 1
  std::vector<double> sensitivities;  // each >= 0
  double sigma = 1.0;

  void validate() const;
};

// Mixture induced by independent per-column inclusions: column j contributes
// sensitivities[j] with probability probabilities[j] (probabilities do NOT
// sum to 1).
struct ProductMixture {
  std::vector<double> probabilities;
  std::vector<double> sensitivities;
  double sigma = 1.0;

  void validate() const;
};

// PMF of a sum of independent scaled Bernoullis on the lattice k * grid.
struct SensitivityPMF {
  double grid = 1e-3;
  // (integer multiple of grid, probability), ascending, probabilities > 0.
  std::vector<std::pair<std::int64_t, double>> masses;
};

// Which side of the zero-out adjacency the PLD is built for.
enum class Adjacency { kRemove, kAdd };

// Privacy loss under the decreasing-loss convention:
//   L(x) = ln(sum_i p_i exp((-2 c_i x - c_i^2) / (2 sigma^2))),
// computed with a stable log-sum-exp.
double privacy_loss(const MixtureGaussian& mog, double x);

// CDF of the sampling distribution matching privacy_loss's orientation:
//   F(x) = sum_i p_i Phi((x + c_i) / sigma).
double mixture_cdf(const MixtureGaussian& mog, double x);

// Smallest integer multiple x* of delta1_grid with L(x*) <= y; guarantees
// L(x*) <= y < L(x* - delta1_grid). Throws OutOfRangeError when y is outside
// the open range of L.
double inverse_privacy_loss(const MixtureGaussian& mog, double y,
                            double delta1_grid);

// Pessimistic DiscretePLD of the (mixture, single Gaussian) pair under the
// given adjacency. Bucket masses are differences of the sampling CDF at the
// inverted grid losses; both tails are truncated at cfg.tail_truncation_mass
// with the upper tail folded into infinity_mass and the lower tail into the
// lowest retained bucket.
DiscretePLD pld_from_mog(const MixtureGaussian& mog,
                         const DiscretizationConfig& cfg, Adjacency adjacency);

// PMF of the product mixture's total sensitivity after rounding every
// sensitivity up to a multiple of `grid`; the convolution of the two-point
// per-column PMFs, computed divide-and-conquer (FFT for long operands).
SensitivityPMF sensitivity_pmf(const ProductMixture& pm, double grid);

// Collapse a product mixture to a MixtureGaussian on the rounded-sensitivity
// lattice (cfg.sensitivity_grid).
MixtureGaussian discretize_pmog(const ProductMixture& pm,
                                const DiscretizationConfig& cfg);

// Mixture with sensitivities {k * unit_sensitivity} and Binomial(trials,
// prob) probabilities, computed in log space.
MixtureGaussian mog_from_binomial(std::int64_t trials, double prob,
                                  double unit_sensitivity, double sigma);

// Fixed-size-batch variant: number of the `group` records appearing in a
// batch of `draws` out of `population` follows a hypergeometric law.
MixtureGaussian mog_from_hypergeometric(std::int64_t population,
                                        std::int64_t group, std::int64_t draws,
                                        double unit_sensitivity, double sigma);

}  // namespace mmacc

#endif  // MMACC_MOG_HPP_
