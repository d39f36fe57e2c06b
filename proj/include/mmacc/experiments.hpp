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

#ifndef MMACC_EXPERIMENTS_HPP_
#define MMACC_EXPERIMENTS_HPP_

#include <cstdint>
#include <vector>

#include "mmacc/pld.hpp"

namespace mmacc {

// One grid point of the amplification experiments: unamplified epsilon from
// the analytic Gaussian formula at single participation, amplified epsilon
// from the matrix accounting with p = 1/n.
struct AmplificationRow {
  double c = 0.0;
  std::int64_t n = 0;
  double sigma = 0.0;
  double column_norm = 0.0;  // sensitivity of a single participation
  double eps_unamplified = 0.0;
  double eps_amplified = 0.0;
  double ratio = 0.0;
};

// Binary-tree aggregation with sigma = c * sqrt(log2(n) + 1), n = 2^i for
// i = 1..log_n_max, sampling probability 1/n, delta split evenly.
std::vector<AmplificationRow> tree_experiment(
    const std::vector<double>& c_values, int log_n_max, double delta,
    const DiscretizationConfig& cfg = {});

// Near-optimal continual-counting Toeplitz matrix with sigma = c * ||C e_1||.
std::vector<AmplificationRow> prefix_opt_experiment(
    const std::vector<double>& c_values, int log_n_max, double delta,
    const DiscretizationConfig& cfg = {});

struct TreeRestartRow {
  double sigma = 0.0;
  double eps_mmcc_iid = 0.0;
  double eps_banded_minsep = 0.0;
};

// Restarted binary trees of the given height: i.i.d. sampling accounting
// versus min-separation accounting with b = 2^(height-1).
std::vector<TreeRestartRow> tree_restart_experiment(
    std::int64_t n, std::int64_t height, double p,
    const std::vector<double>& sigmas, double delta,
    const DiscretizationConfig& cfg = {});

}  // namespace mmacc

#endif  // MMACC_EXPERIMENTS_HPP_
