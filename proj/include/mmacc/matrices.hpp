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

#ifndef MMACC_MATRICES_HPP_
#define MMACC_MATRICES_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mmacc {

// Dense non-negative encoder matrix C (m rows, n columns), row-major.
struct EncoderMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> entries;

  double at(std::int64_t i, std::int64_t j) const {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }
  double& at(std::int64_t i, std::int64_t j) {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }

  // True iff square with zeros strictly above the diagonal.
  bool lower_triangular() const;

  // Throws InvalidMatrixError on negative entries or shape mismatch.
  void validate() const;
};

// Binary-tree aggregation matrix: one row per dyadic interval of [n],
// level-major (singletons first, the full interval last); (2n-1) x n.
EncoderMatrix binary_tree(std::int64_t n);

// Lower-triangular Toeplitz matrix C_{i,j} = f(i-j) with f(0) = 1 and
// f(k) = f(k-1) * (1 - 1/(2k)).
EncoderMatrix prefix_opt(std::int64_t n);

// Block-diagonal stack of n / 2^(h-1) copies of binary_tree(2^(h-1)).
EncoderMatrix tree_restart(std::int64_t n, std::int64_t height);

EncoderMatrix identity(std::int64_t n);

// CSV interchange: no header, comma-separated, shortest round-trip decimal
// formatting; load(save(M)) is bit-exact.
EncoderMatrix load_csv(const std::string& path);
void save_csv(const EncoderMatrix& matrix, const std::string& path);
void write_csv(const EncoderMatrix& matrix, std::ostream& out);

}  // namespace mmacc

#endif  // MMACC_MATRICES_HPP_
