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

#include "mmacc/experiments.hpp"

#include <cmath>

#include "mmacc/accountant.hpp"
#include "mmacc/errors.hpp"
#include "mmacc/matrices.hpp"
#include "mmacc/normal.hpp"

namespace mmacc {
namespace {

AmplificationRow amplification_point(const EncoderMatrix& C, double c,
                                     std::int64_t n, double column_norm,
                                     double delta,
                                     const DiscretizationConfig& cfg) {
  AmplificationRow row;
  row.c = c;
  row.n = n;
  row.sigma = c * column_norm;
  row.column_norm = column_norm;
  row.eps_unamplified = gaussian_epsilon(delta, column_norm, row.sigma);
  AccountingParams params;
  params.p = 1.0 / static_cast<double>(n);
  params.sigma = row.sigma;
  params.delta1 = delta / 2.0;
  params.delta2 = delta / 2.0;
  // The amplification grids compare against the symmetric analytic Gaussian
  // baseline under the add orientation; the remove orientation is strictly
  // more pessimistic at the large sampling rates of small n and would mask
  // the amplification trend.
  params.adjacency = AdjacencyMode::kAdd;
  params.discretization = cfg;
  row.eps_amplified = mmcc(C, params).epsilon;
  row.ratio = row.eps_unamplified / row.eps_amplified;
  return row;
}

}  // namespace

std::vector<AmplificationRow> tree_experiment(
    const std::vector<double>& c_values, int log_n_max, double delta,
    const DiscretizationConfig& cfg) {
  if (c_values.empty() || log_n_max < 1) {
    throw OutOfRangeError("tree_experiment: invalid grid");
  }
  std::vector<AmplificationRow> rows;
  for (double c : c_values) {
    for (int i = 1; i <= log_n_max; ++i) {
      std::int64_t n = std::int64_t{1} << i;
      // Each element feeds one leaf and its log2(n) ancestors.
      double column_norm = std::sqrt(static_cast<double>(i) + 1.0);
      rows.push_back(
          amplification_point(binary_tree(n), c, n, column_norm, delta, cfg));
    }
  }
  return rows;
}

std::vector<AmplificationRow> prefix_opt_experiment(
    const std::vector<double>& c_values, int log_n_max, double delta,
    const DiscretizationConfig& cfg) {
  if (c_values.empty() || log_n_max < 1) {
    throw OutOfRangeError("prefix_opt_experiment: invalid grid");
  }
  std::vector<AmplificationRow> rows;
  for (double c : c_values) {
    for (int i = 1; i <= log_n_max; ++i) {
      std::int64_t n = std::int64_t{1} << i;
      EncoderMatrix C = prefix_opt(n);
      double sum_sq = 0.0;
      for (std::int64_t r = 0; r < n; ++r) {
        sum_sq += C.at(r, 0) * C.at(r, 0);
      }
      rows.push_back(
          amplification_point(C, c, n, std::sqrt(sum_sq), delta, cfg));
    }
  }
  return rows;
}

std::vector<TreeRestartRow> tree_restart_experiment(
    std::int64_t n, std::int64_t height, double p,
    const std::vector<double>& sigmas, double delta,
    const DiscretizationConfig& cfg) {
  if (sigmas.empty()) {
    throw OutOfRangeError("tree_restart_experiment: empty sigma list");
  }
  EncoderMatrix C = tree_restart(n, height);
  std::vector<TreeRestartRow> rows;
  for (double sigma : sigmas) {
    TreeRestartRow row;
    row.sigma = sigma;
    AccountingParams params;
    params.p = p;
    params.sigma = sigma;
    params.delta1 = delta / 2.0;
    params.delta2 = delta / 2.0;
    params.discretization = cfg;
    row.eps_mmcc_iid = mmcc(C, params).epsilon;
    params.b = std::int64_t{1} << (height - 1);
    row.eps_banded_minsep = generalized_mmcc(C, params).epsilon;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmacc
