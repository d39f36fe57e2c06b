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

#ifndef MMACC_PLD_HPP_
#define MMACC_PLD_HPP_

#include <cstdint>
#include <utility>
#include <vector>

namespace mmacc {

// Discretization knobs shared by the PLD and mixture pipelines.
struct DiscretizationConfig {
  // Grid spacing of the discretized privacy-loss lattice.
  double pld_grid = 1e-4;
  // Grid to which sensitivities are rounded up before PMF convolution.
  double sensitivity_grid = 1e-3;
  // Grid of the privacy-loss inversion binary search.
  double inverse_tolerance = 1e-6;
  // Probability mass folded pessimistically per truncated tail.
  double tail_truncation_mass = 1e-12;

  void validate() const;
};

// A privacy loss distribution on the lattice k * grid_spacing. masses[k] is
// the probability that the (pessimistically rounded) loss equals
// (origin_index + k) * grid_spacing; infinity_mass is the probability of an
// infinite loss (distinguishing event).
struct DiscretePLD {
  double grid_spacing = 1e-4;
  std::int64_t origin_index = 0;
  std::vector<double> masses;
  double infinity_mass = 0.0;

  void validate() const;

  // Point mass at loss zero: the PLD of two identical distributions and the
  // identity element of compose().
  static DiscretePLD point_mass_at_zero(double grid_spacing);
};

// Hockey-stick divergence at epsilon evaluated on the PLD:
//   infinity_mass + sum_k masses[k] * max{1 - exp(epsilon - loss_k), 0}.
double delta_for_epsilon(const DiscretePLD& pld, double epsilon);

// Smallest epsilon >= 0 with delta_for_epsilon(pld, epsilon) <= delta, found
// by binary search on [0, max grid loss + grid_spacing] to `tolerance`.
// Throws UnachievableError when delta < infinity_mass.
double epsilon_for_delta(const DiscretePLD& pld, double delta,
                         double tolerance = 1e-6);

// PLD of the composition of two independent mechanisms: convolution of the
// finite masses, infinity masses combine as 1 - (1-a)(1-b), origins add.
DiscretePLD compose(const DiscretePLD& a, const DiscretePLD& b);

// Composition with repetition counts. Entries with bit-identical content are
// merged first (summing counts, keeping first-occurrence order); each merged
// entry is self-composed by repeated squaring; the merged entries are then
// combined left to right. The result is deterministic and independent of how
// callers grouped duplicate PLDs.
DiscretePLD compose_all(
    const std::vector<std::pair<DiscretePLD, std::int64_t>>& plds);

}  // namespace mmacc

#endif  // MMACC_PLD_HPP_
