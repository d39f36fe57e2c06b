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

#include "mmacc/accountant.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "mmacc/errors.hpp"
#include "mmacc/tail_bounds.hpp"
#include "mmacc/threading.hpp"

namespace mmacc {
namespace {

using Clock = std::chrono::steady_clock;

// Row signature for deduplication: the sorted (sensitivity, probability)
// pairs. Rows with identical signatures produce identical PLDs.
using RowSignature = std::vector<std::pair<double, double>>;

RowSignature signature_of(const ProductMixture& row) {
  RowSignature sig;
  sig.reserve(row.sensitivities.size());
  for (std::size_t k = 0; k < row.sensitivities.size(); ++k) {
    sig.emplace_back(row.sensitivities[k], row.probabilities[k]);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

std::vector<Adjacency> adjacencies_for(AdjacencyMode mode) {
  switch (mode) {
    case AdjacencyMode::kRemove:
      return {Adjacency::kRemove};
    case AdjacencyMode::kAdd:
      return {Adjacency::kAdd};
    default:
      return {Adjacency::kRemove, Adjacency::kAdd};
  }
}

struct PipelineInput {
  std::vector<ProductMixture> rows;
  double base_probability = 0.0;
  double max_ptilde = 0.0;
  bool delta1_unused = false;
  bool non_adaptive_only = false;
};

// Deduplicate rows, build per-unique-row PLDs for each adjacency, compose in
// canonical order (rows ascending by first occurrence), and query epsilon.
AccountingResult run_pipeline(const PipelineInput& input,
                              const AccountingParams& params) {
  auto start = Clock::now();

  // Dedup by signature, preserving first-occurrence order.
  std::map<RowSignature, std::size_t> seen;
  std::vector<ProductMixture> unique_rows;
  std::vector<std::int64_t> counts;
  for (const ProductMixture& row : input.rows) {
    RowSignature sig = signature_of(row);
    auto it = seen.find(sig);
    if (it == seen.end()) {
      seen.emplace(std::move(sig), unique_rows.size());
      unique_rows.push_back(row);
      counts.push_back(1);
    } else {
      ++counts[it->second];
    }
  }

  double delta2 = params.delta2;
  double delta1 = input.delta1_unused ? 0.0 : params.delta1;
  double epsilon = 0.0;
  for (Adjacency adjacency : adjacencies_for(params.adjacency)) {
    std::vector<DiscretePLD> plds =
        build_row_plds(unique_rows, params.discretization, adjacency);
    std::vector<std::pair<DiscretePLD, std::int64_t>> with_counts;
    with_counts.reserve(plds.size());
    for (std::size_t k = 0; k < plds.size(); ++k) {
      with_counts.emplace_back(std::move(plds[k]), counts[k]);
    }
    auto [eps, unused_total] = compose_with_failure(
        with_counts, delta1, delta2, params.discretization.inverse_tolerance);
    epsilon = std::max(epsilon, eps);
  }

  AccountingResult result;
  result.epsilon = epsilon;
  result.delta1 = delta1;
  result.delta2 = delta2;
  result.delta_total = delta1 + delta2;
  result.max_ptilde = input.max_ptilde;
  result.max_ptilde_over_p =
      input.base_probability > 0.0 ? input.max_ptilde / input.base_probability
                                   : 0.0;
  result.unique_row_count = static_cast<std::int64_t>(unique_rows.size());
  result.row_count = static_cast<std::int64_t>(input.rows.size());
  result.non_adaptive_only = input.non_adaptive_only;
  result.delta1_unused = input.delta1_unused;
  result.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          Clock::now() - start)
                          .count();
  return result;
}

// Shared construction for mmcc (b = 1) and generalized_mmcc (b >= 1). With
// b = 1 every step is the identity transform, so the two entry points are
// arithmetically the same.
AccountingResult generalized_impl(const EncoderMatrix& C,
                                  const AccountingParams& params,
                                  bool force_independent) {
  C.validate();
  params.validate();
  const std::int64_t b = params.b;

  // Keep columns 0, b, 2b, ...
  EncoderMatrix reduced;
  reduced.rows = C.rows;
  reduced.cols = (C.cols + b - 1) / b;
  reduced.entries.reserve(static_cast<std::size_t>(reduced.rows * reduced.cols));
  for (std::int64_t i = 0; i < C.rows; ++i) {
    for (std::int64_t j = 0; j < C.cols; j += b) {
      reduced.entries.push_back(C.at(i, j));
    }
  }

  const double q = std::min(static_cast<double>(b) * params.p, 1.0);
  const bool unamplified = (q >= 1.0);

  TailBoundTable table;
  if (!unamplified && !force_independent) {
    double budget = static_cast<double>(b) * params.delta1;
    table = probability_tail_bounds(reduced, q, params.sigma, budget);
  }

  // Collapse blocks of b rows to column-segment norms; the participation
  // bound of a block is the bound of its first row. Single-row blocks reuse
  // the entry itself so that b = 1 stays bit-identical to the flat pipeline.
  const std::int64_t block_count = (reduced.rows + b - 1) / b;
  PipelineInput input;
  input.base_probability = q;
  input.delta1_unused = unamplified || force_independent || table.trivial;
  input.non_adaptive_only = !C.lower_triangular();
  input.rows.reserve(static_cast<std::size_t>(block_count));
  for (std::int64_t blk = 0; blk < block_count; ++blk) {
    const std::int64_t row_begin = blk * b;
    const std::int64_t row_end = std::min(row_begin + b, reduced.rows);
    ProductMixture row;
    row.sigma = params.sigma;
    for (std::int64_t j = 0; j < reduced.cols; ++j) {
      double sens;
      if (row_end - row_begin == 1) {
        sens = reduced.at(row_begin, j);
      } else {
        double sum_sq = 0.0;
        for (std::int64_t i = row_begin; i < row_end; ++i) {
          double v = reduced.at(i, j);
          sum_sq += v * v;
        }
        sens = std::sqrt(sum_sq);
      }
      if (sens <= 0.0) continue;
      double prob;
      if (unamplified) {
        prob = 1.0;
      } else if (force_independent) {
        prob = q;
      } else {
        prob = table.at(row_begin, j);
      }
      row.probabilities.push_back(prob);
      row.sensitivities.push_back(sens);
      input.max_ptilde = std::max(input.max_ptilde, prob);
    }
    if (row.sensitivities.empty()) continue;  // all-zero block adds nothing
    input.rows.push_back(std::move(row));
  }
  if (input.rows.empty()) {
    throw InvalidMatrixError("accounting: matrix has no nonzero entries");
  }
  return run_pipeline(input, params);
}

}  // namespace

void AccountingParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw OutOfRangeError("AccountingParams: p must be in (0, 1]");
  }
  if (!(sigma > 0.0)) {
    throw OutOfRangeError("AccountingParams: sigma must be positive");
  }
  if (!(delta1 >= 0.0) || !(delta2 > 0.0 && delta2 < 1.0) ||
      !(delta1 + delta2 < 1.0)) {
    throw OutOfRangeError("AccountingParams: invalid delta split");
  }
  if (b < 1) {
    throw OutOfRangeError("AccountingParams: b must be >= 1");
  }
  discretization.validate();
}

std::pair<double, double> compose_with_failure(
    const std::vector<std::pair<DiscretePLD, std::int64_t>>& row_plds,
    double delta1, double delta2, double tolerance) {
  if (!(delta1 >= 0.0) || !(delta2 > 0.0 && delta2 < 1.0)) {
    throw OutOfRangeError("compose_with_failure: invalid budgets");
  }
  DiscretePLD composed = compose_all(row_plds);
  double epsilon = epsilon_for_delta(composed, delta2, tolerance);
  return {epsilon, delta1 + delta2};
}

std::vector<DiscretePLD> build_row_plds(const std::vector<ProductMixture>& rows,
                                        const DiscretizationConfig& cfg,
                                        Adjacency adjacency, bool parallel) {
  std::vector<DiscretePLD> plds(rows.size());
  if (parallel) {
    const int threads = thread_count();
    const auto n = static_cast<std::int64_t>(rows.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t k = 0; k < n; ++k) {
      plds[static_cast<std::size_t>(k)] = pld_from_mog(
          discretize_pmog(rows[static_cast<std::size_t>(k)], cfg), cfg,
          adjacency);
    }
  } else {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      plds[k] = pld_from_mog(discretize_pmog(rows[k], cfg), cfg, adjacency);
    }
  }
  return plds;
}

AccountingResult mmcc(const EncoderMatrix& C, const AccountingParams& params) {
  if (params.b != 1) {
    throw OutOfRangeError("mmcc: requires b == 1 (use generalized_mmcc)");
  }
  return generalized_impl(C, params, /*force_independent=*/false);
}

AccountingResult mmcc_independent_lower(const EncoderMatrix& C,
                                        const AccountingParams& params) {
  return generalized_impl(C, params, /*force_independent=*/true);
}

AccountingResult generalized_mmcc(const EncoderMatrix& C,
                                  const AccountingParams& params) {
  return generalized_impl(C, params, /*force_independent=*/false);
}

AccountingResult generalized_mmcc_all_groups(const EncoderMatrix& C,
                                             const AccountingParams& params) {
  C.validate();
  params.validate();
  AccountingResult worst;
  bool first = true;
  for (std::int64_t g = 0; g < params.b; ++g) {
    if (g >= C.rows || g >= C.cols) break;
    EncoderMatrix sub;
    sub.rows = C.rows - g;
    sub.cols = C.cols - g;
    sub.entries.reserve(static_cast<std::size_t>(sub.rows * sub.cols));
    for (std::int64_t i = g; i < C.rows; ++i) {
      for (std::int64_t j = g; j < C.cols; ++j) {
        sub.entries.push_back(C.at(i, j));
      }
    }
    AccountingResult result = generalized_impl(sub, params, false);
    if (first || result.epsilon > worst.epsilon) {
      worst = result;
      first = false;
    }
  }
  if (first) {
    throw InvalidMatrixError("generalized_mmcc_all_groups: empty matrix");
  }
  return worst;
}

}  // namespace mmacc
