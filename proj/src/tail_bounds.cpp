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

#include "mmacc/tail_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mmacc/errors.hpp"
#include "mmacc/normal.hpp"

namespace mmacc {
namespace {

// Sum of the t largest values of a non-negative list; values beyond the list
// act as implicit zeros.
double sum_of_largest(std::vector<double>& values, std::int64_t t) {
  if (t <= 0) return 0.0;
  auto count = std::min<std::int64_t>(t, static_cast<std::int64_t>(values.size()));
  std::partial_sort(values.begin(), values.begin() + count, values.end(),
                    std::greater<>());
  double s = 0.0;
  for (std::int64_t k = 0; k < count; ++k) {
    s += values[static_cast<std::size_t>(k)];
  }
  return s;
}

double ptilde_from_eps(double p, double eps) {
  double amplified = p * std::exp(eps);
  return std::min(amplified / (amplified + 1.0 - p), 1.0);
}

}  // namespace

std::int64_t binomial_tail_count(std::int64_t trials, double prob,
                                 double budget) {
  if (trials < 0 || !(prob >= 0.0 && prob <= 1.0) ||
      !(budget > 0.0 && budget < 1.0)) {
    throw OutOfRangeError("binomial_tail_count: invalid arguments");
  }
  if (trials == 0 || prob == 0.0) return 0;
  if (prob == 1.0) return trials;
  const double log_p = std::log(prob);
  const double log_q = std::log1p(-prob);
  const double lgamma_n1 = std::lgamma(static_cast<double>(trials + 1));
  // tail(t) = Pr[X > t]; accumulate from k = trials down so the smallest
  // terms are summed first, and return the first t whose tail fits.
  std::vector<double> pmf(static_cast<std::size_t>(trials + 1));
  for (std::int64_t k = 0; k <= trials; ++k) {
    double lp = lgamma_n1 - std::lgamma(static_cast<double>(k + 1)) -
                std::lgamma(static_cast<double>(trials - k + 1)) +
                static_cast<double>(k) * log_p +
                static_cast<double>(trials - k) * log_q;
    pmf[static_cast<std::size_t>(k)] = std::exp(lp);
  }
  double tail = 0.0;
  std::int64_t t = trials;
  for (std::int64_t k = trials; k >= 1; --k) {
    tail += pmf[static_cast<std::size_t>(k)];
    if (tail > budget) break;
    t = k - 1;
  }
  return t;
}

double s_upper_bound(const EncoderMatrix& C, std::int64_t i, std::int64_t j,
                     double prob, double budget) {
  C.validate();
  if (i < 0 || i >= C.rows || j < 0 || j >= C.cols) {
    throw OutOfRangeError("s_upper_bound: index out of range");
  }
  std::int64_t t = binomial_tail_count(i + 1, prob, budget);
  std::int64_t j_count = std::min(i + 1, C.cols);
  std::vector<double> dots(static_cast<std::size_t>(j_count), 0.0);
  for (std::int64_t r = 0; r < i; ++r) {
    double cj = C.at(r, j);
    if (cj == 0.0) continue;
    for (std::int64_t jp = 0; jp < j_count; ++jp) {
      dots[static_cast<std::size_t>(jp)] += cj * C.at(r, jp);
    }
  }
  return sum_of_largest(dots, t);
}

TailBoundTable probability_tail_bounds(const EncoderMatrix& C, double p,
                                       double sigma, double delta1) {
  C.validate();
  if (!(p > 0.0 && p < 1.0)) {
    throw OutOfRangeError("probability_tail_bounds: p must be in (0, 1)");
  }
  if (!(sigma > 0.0)) {
    throw OutOfRangeError("probability_tail_bounds: sigma must be positive");
  }

  std::int64_t nnz = 0;
  std::vector<bool> column_started(static_cast<std::size_t>(C.cols), false);
  std::int64_t started_columns = 0;
  for (std::int64_t i = 0; i < C.rows; ++i) {
    for (std::int64_t j = 0; j < C.cols; ++j) {
      if (C.at(i, j) != 0.0) {
        ++nnz;
        if (!column_started[static_cast<std::size_t>(j)]) {
          column_started[static_cast<std::size_t>(j)] = true;
          ++started_columns;
        }
      }
    }
  }

  TailBoundTable table;
  table.rows = C.rows;
  table.cols = C.cols;
  table.values.assign(static_cast<std::size_t>(C.rows * C.cols), 1.0);
  table.base_probability = p;
  table.failure_budget = delta1;
  table.trivial = (nnz == started_columns);

  if (table.trivial) {
    for (std::int64_t i = 0; i < C.rows; ++i) {
      for (std::int64_t j = 0; j < C.cols; ++j) {
        if (C.at(i, j) != 0.0) {
          table.values[static_cast<std::size_t>(i * C.cols + j)] = p;
        }
      }
    }
    return table;
  }

  if (!(delta1 > 0.0 && delta1 < 1.0)) {
    throw OutOfRangeError(
        "probability_tail_bounds: delta1 must be in (0, 1) for a non-trivial "
        "matrix");
  }
  const double delta_prime =
      delta1 / (2.0 * static_cast<double>(nnz - started_columns));
  const double z = standard_normal_quantile(1.0 - delta_prime);
  table.per_event_budget = delta_prime;
  table.normal_quantile = z;

  // Gram matrix of the row prefix: before handling row i, gram[j][j'] =
  // <C_{0:i-1,j}, C_{0:i-1,j'}>.
  const auto n = static_cast<std::size_t>(C.cols);
  std::vector<double> gram(n * n, 0.0);
  const double two_sigma_sq = 2.0 * sigma * sigma;
  for (std::int64_t i = 0; i < C.rows; ++i) {
    std::int64_t t = -1;  // computed lazily; shared by all columns of row i
    std::int64_t j_count = std::min(i + 1, C.cols);
    for (std::int64_t j = 0; j < C.cols; ++j) {
      if (C.at(i, j) == 0.0) continue;
      double norm_sq = gram[static_cast<std::size_t>(j) * n +
                            static_cast<std::size_t>(j)];
      if (norm_sq == 0.0) {
        // First nonzero of the column: the bound is exactly p.
        table.values[static_cast<std::size_t>(i * C.cols + j)] = p;
        continue;
      }
      if (t < 0) t = binomial_tail_count(i + 1, p, delta_prime);
      std::vector<double> dots(static_cast<std::size_t>(j_count));
      for (std::int64_t jp = 0; jp < j_count; ++jp) {
        dots[static_cast<std::size_t>(jp)] =
            gram[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(jp)];
      }
      double s = sum_of_largest(dots, t);
      double eps = z * std::sqrt(norm_sq) / sigma +
                   (2.0 * s - norm_sq) / two_sigma_sq;
      // A probability bound below the prior is never needed; clamping keeps
      // the table within [p, 1] and is pessimistic-safe.
      eps = std::max(eps, 0.0);
      table.values[static_cast<std::size_t>(i * C.cols + j)] =
          ptilde_from_eps(p, eps);
    }
    // Fold row i into the prefix Gram matrix.
    for (std::int64_t j = 0; j < C.cols; ++j) {
      double cj = C.at(i, j);
      if (cj == 0.0) continue;
      for (std::int64_t jp = 0; jp < C.cols; ++jp) {
        double cjp = C.at(i, jp);
        if (cjp == 0.0) continue;
        gram[static_cast<std::size_t>(j) * n + static_cast<std::size_t>(jp)] +=
            cj * cjp;
      }
    }
  }
  return table;
}

}  // namespace mmacc
