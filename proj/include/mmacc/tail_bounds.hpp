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

#ifndef MMACC_TAIL_BOUNDS_HPP_
#define MMACC_TAIL_BOUNDS_HPP_

#include <cstdint>
#include <vector>

#include "mmacc/matrices.hpp"

namespace mmacc {

// High-probability upper bounds on the conditional participation
// probabilities, one per matrix entry.
struct TailBoundTable {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> values;  // row-major; 1 exactly where C is 0
  double base_probability = 0.0;
  double failure_budget = 0.0;
  // Budget per non-trivial entry; 0 when the table is all-trivial and no
  // union bound is needed.
  double per_event_budget = 0.0;
  double normal_quantile = 0.0;
  // True when every nonzero entry is its column's first nonzero, so the
  // failure budget is never spent.
  bool trivial = false;

  double at(std::int64_t i, std::int64_t j) const {
    return values[static_cast<std::size_t>(i * cols + j)];
  }
};

// Smallest integer t with Pr[Binomial(trials, prob) > t] <= budget, by exact
// log-space PMF summation.
std::int64_t binomial_tail_count(std::int64_t trials, double prob,
                                 double budget);

// Over-approximation of the worst-case second moment s_{i,j}: with
// t = binomial_tail_count(i+1, prob, budget) (i is 0-based here), the sum of
// the t largest prefix dot products <C_{0:i,j}, C_{0:i,j'}> over j' <= i.
double s_upper_bound(const EncoderMatrix& C, std::int64_t i, std::int64_t j,
                     double prob, double budget);

// The full participation tail-bound table: for nonzero C_{i,j},
//   eps_{i,j} = z ||C_{0:i-1,j}|| / sigma
//               + (2 s_{i,j} - ||C_{0:i-1,j}||^2) / (2 sigma^2),
//   ptilde    = p e^eps / (p e^eps + 1 - p),
// with z the (1 - delta') normal quantile and delta' = delta1 / (2 *
// (nnz - columns with a nonzero)). When every nonzero is a column head the
// table is trivial and delta' is never computed.
TailBoundTable probability_tail_bounds(const EncoderMatrix& C, double p,
                                       double sigma, double delta1);

}  // namespace mmacc

#endif  // MMACC_TAIL_BOUNDS_HPP_
