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

#ifndef MMACC_ACCOUNTANT_HPP_
#define MMACC_ACCOUNTANT_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "mmacc/matrices.hpp"
#include "mmacc/mog.hpp"
#include "mmacc/pld.hpp"

namespace mmacc {

enum class AdjacencyMode { kRemove, kAdd, kBoth };

struct AccountingParams {
  double p = 0.0;       // per-round sampling probability, (0, 1]
  double sigma = 1.0;   // noise standard deviation
  double delta1 = 0.0;  // tail-bound failure budget
  double delta2 = 0.0;  // PLD query budget
  std::int64_t b = 1;   // min-separation; 1 = i.i.d. sampling
  AdjacencyMode adjacency = AdjacencyMode::kBoth;
  DiscretizationConfig discretization;

  void validate() const;
};

struct AccountingResult {
  double epsilon = 0.0;
  double delta_total = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  // Largest participation bound actually used, and its ratio to the base
  // sampling probability of the analysis (p, or b*p when b > 1).
  double max_ptilde = 0.0;
  double max_ptilde_over_p = 0.0;
  std::int64_t unique_row_count = 0;
  std::int64_t row_count = 0;
  std::int64_t runtime_ms = 0;
  // True when C is not square lower-triangular; the guarantee then covers
  // non-adaptively chosen inputs only.
  bool non_adaptive_only = false;
  // True when the failure budget was never spent (trivial table or p = 1);
  // delta_total is then delta2 alone.
  bool delta1_unused = false;
};

// Composition with a bad-event budget: composes the per-row PLDs and returns
// (epsilon_for_delta(composed, delta2), delta1 + delta2). delta1 = 0 reduces
// to plain composition.
std::pair<double, double> compose_with_failure(
    const std::vector<std::pair<DiscretePLD, std::int64_t>>& row_plds,
    double delta1, double delta2, double tolerance = 1e-6);

// Per-row PLD construction kernel. The parallel path partitions rows across
// threads and is bit-identical to the serial path (kept as the reference
// implementation for testing and benchmarking).
std::vector<DiscretePLD> build_row_plds(const std::vector<ProductMixture>& rows,
                                        const DiscretizationConfig& cfg,
                                        Adjacency adjacency,
                                        bool parallel = true);

// Amplified accounting for matrix C under i.i.d. sampling (params.b == 1):
// tail-bound table, per-row product mixtures, PLDs (deduplicated by row
// signature), composition, and the (epsilon, delta1 + delta2) guarantee.
AccountingResult mmcc(const EncoderMatrix& C, const AccountingParams& params);

// Same pipeline with every participation bound replaced by p and no failure
// budget. A heuristic lower-bound diagnostic, not a DP guarantee.
AccountingResult mmcc_independent_lower(const EncoderMatrix& C,
                                        const AccountingParams& params);

// Accounting under b-min-sep sampling: keep every b-th column, tail bounds on
// the reduced matrix with probability b*p and budget b*delta1, collapse row
// blocks of size b to column-segment norms, then compose as in mmcc. With
// b = 1 this is arithmetically identical to mmcc. The guarantee covers the
// first sampling group.
AccountingResult generalized_mmcc(const EncoderMatrix& C,
                                  const AccountingParams& params);

// Worst case over all b sampling groups: drops the first g rows and columns
// for g = 0..b-1 and returns the maximum-epsilon result.
AccountingResult generalized_mmcc_all_groups(const EncoderMatrix& C,
                                             const AccountingParams& params);

}  // namespace mmacc

#endif  // MMACC_ACCOUNTANT_HPP_
