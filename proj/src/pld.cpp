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

#include "mmacc/pld.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "mmacc/convolution.hpp"
#include "mmacc/errors.hpp"

namespace mmacc {
namespace {

constexpr double kMassTolerance = 1e-9;

DiscretePLD compose_self(const DiscretePLD& a) {
  DiscretePLD out;
  out.grid_spacing = a.grid_spacing;
  out.origin_index = 2 * a.origin_index;
  out.masses = convolve_self(a.masses);
  double kept = 1.0 - a.infinity_mass;
  out.infinity_mass = 1.0 - kept * kept;
  return out;
}

// Repeated squaring over convolution; the canonical expansion of a
// repetition count.
DiscretePLD compose_power(const DiscretePLD& base, std::int64_t count) {
  std::optional<DiscretePLD> result;
  DiscretePLD square = base;
  std::int64_t remaining = count;
  while (true) {
    if (remaining & 1) {
      result = result ? compose(*result, square) : square;
    }
    remaining >>= 1;
    if (remaining == 0) break;
    square = compose_self(square);
  }
  return *result;
}

bool same_content(const DiscretePLD& a, const DiscretePLD& b) {
  return a.grid_spacing == b.grid_spacing &&
         a.origin_index == b.origin_index &&
         a.infinity_mass == b.infinity_mass && a.masses == b.masses;
}

}  // namespace

void DiscretizationConfig::validate() const {
  if (!(pld_grid > 0.0) || !(sensitivity_grid > 0.0) ||
      !(inverse_tolerance > 0.0) || !(tail_truncation_mass > 0.0) ||
      tail_truncation_mass > 1e-6) {
    throw OutOfRangeError("DiscretizationConfig: fields out of range");
  }
}

void DiscretePLD::validate() const {
  if (!(grid_spacing > 0.0)) {
    throw OutOfRangeError("DiscretePLD: grid_spacing must be positive");
  }
  if (infinity_mass < 0.0 || infinity_mass > 1.0) {
    throw OutOfRangeError("DiscretePLD: infinity_mass outside [0, 1]");
  }
  double sum = infinity_mass;
  for (double m : masses) {
    if (m < 0.0) throw OutOfRangeError("DiscretePLD: negative mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw OutOfRangeError("DiscretePLD: total mass differs from 1");
  }
}

DiscretePLD DiscretePLD::point_mass_at_zero(double grid_spacing) {
  DiscretePLD pld;
  pld.grid_spacing = grid_spacing;
  pld.origin_index = 0;
  pld.masses = {1.0};
  pld.infinity_mass = 0.0;
  return pld;
}

double delta_for_epsilon(const DiscretePLD& pld, double epsilon) {
  double delta = pld.infinity_mass;
  // Losses are ascending; only losses above epsilon contribute. Accumulate
  // from the top so the smallest contributions are added first.
  for (std::int64_t k = static_cast<std::int64_t>(pld.masses.size()) - 1;
       k >= 0; --k) {
    double loss = static_cast<double>(pld.origin_index + k) * pld.grid_spacing;
    if (loss <= epsilon) break;
    delta += pld.masses[static_cast<std::size_t>(k)] *
             (1.0 - std::exp(epsilon - loss));
  }
  return delta;
}

double epsilon_for_delta(const DiscretePLD& pld, double delta,
                         double tolerance) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw OutOfRangeError("epsilon_for_delta: delta must be in (0, 1)");
  }
  if (delta < pld.infinity_mass) {
    throw UnachievableError(
        "epsilon_for_delta: delta is below the infinity mass; no finite "
        "epsilon achieves it");
  }
  if (delta_for_epsilon(pld, 0.0) <= delta) return 0.0;
  double max_loss =
      static_cast<double>(pld.origin_index +
                          static_cast<std::int64_t>(pld.masses.size()) - 1) *
      pld.grid_spacing;
  double lo = 0.0;
  double hi = std::max(max_loss, 0.0) + pld.grid_spacing;
  while (hi - lo > tolerance) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (delta_for_epsilon(pld, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

DiscretePLD compose(const DiscretePLD& a, const DiscretePLD& b) {
  if (a.grid_spacing != b.grid_spacing) {
    throw GridMismatchError("compose: grid spacings differ");
  }
  DiscretePLD out;
  out.grid_spacing = a.grid_spacing;
  out.origin_index = a.origin_index + b.origin_index;
  out.masses = convolve(a.masses, b.masses);
  out.infinity_mass = 1.0 - (1.0 - a.infinity_mass) * (1.0 - b.infinity_mass);
  return out;
}

DiscretePLD compose_all(
    const std::vector<std::pair<DiscretePLD, std::int64_t>>& plds) {
  if (plds.empty()) {
    throw OutOfRangeError("compose_all: empty input");
  }
  for (const auto& [pld, count] : plds) {
    if (count < 1) throw OutOfRangeError("compose_all: count must be >= 1");
    if (pld.grid_spacing != plds.front().first.grid_spacing) {
      throw GridMismatchError("compose_all: grid spacings differ");
    }
  }
  // Merge entries with bit-identical content, keeping first-occurrence order.
  std::vector<std::pair<const DiscretePLD*, std::int64_t>> merged;
  for (const auto& [pld, count] : plds) {
    bool found = false;
    for (auto& [existing, existing_count] : merged) {
      if (same_content(*existing, pld)) {
        existing_count += count;
        found = true;
        break;
      }
    }
    if (!found) merged.emplace_back(&pld, count);
  }
  std::optional<DiscretePLD> result;
  for (const auto& [pld, count] : merged) {
    DiscretePLD group = compose_power(*pld, count);
    result = result ? compose(*result, group) : std::move(group);
  }
  return *result;
}

}  // namespace mmacc
