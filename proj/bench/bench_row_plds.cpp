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

// Benchmarks the per-row PLD kernel: serial reference vs the parallel path.
// Usage: bench_row_plds [n] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "mmacc/accountant.hpp"
#include "mmacc/matrices.hpp"
#include "mmacc/mog.hpp"
#include "mmacc/pld.hpp"
#include "mmacc/tail_bounds.hpp"
#include "mmacc/threading.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_build(const std::vector<mmacc::ProductMixture>& rows,
                  const mmacc::DiscretizationConfig& cfg, bool parallel,
                  std::vector<mmacc::DiscretePLD>* out) {
  auto start = Clock::now();
  *out = mmacc::build_row_plds(rows, cfg, mmacc::Adjacency::kRemove, parallel);
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool identical(const std::vector<mmacc::DiscretePLD>& a,
               const std::vector<mmacc::DiscretePLD>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].origin_index != b[i].origin_index ||
        a[i].infinity_mass != b[i].infinity_mass ||
        a[i].masses != b[i].masses) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 64;
  int threads = argc > 2 ? std::atoi(argv[2]) : 0;
  mmacc::set_thread_count(threads);

  mmacc::EncoderMatrix tree = mmacc::binary_tree(n);
  double p = 1.0 / static_cast<double>(n);
  double sigma = 8.0;
  mmacc::TailBoundTable table =
      mmacc::probability_tail_bounds(tree, p, sigma, 1e-7);

  std::vector<mmacc::ProductMixture> rows(tree.rows);
  for (std::int64_t i = 0; i < tree.rows; ++i) {
    rows[i].sigma = sigma;
    for (std::int64_t j = 0; j < tree.cols; ++j) {
      if (tree.at(i, j) == 0.0) continue;
      rows[i].sensitivities.push_back(tree.at(i, j));
      rows[i].probabilities.push_back(table.at(i, j));
    }
  }

  mmacc::DiscretizationConfig cfg;
  std::vector<mmacc::DiscretePLD> serial_out, parallel_out;
  double serial = time_build(rows, cfg, /*parallel=*/false, &serial_out);
  double parallel = time_build(rows, cfg, /*parallel=*/true, &parallel_out);

  std::printf("rows=%lld threads=%d\n", static_cast<long long>(tree.rows),
              mmacc::thread_count());
  std::printf("serial:   %.3f s\n", serial);
  std::printf("parallel: %.3f s (speedup %.2fx)\n", parallel,
              serial / parallel);
  if (!identical(serial_out, parallel_out)) {
    std::printf("ERROR: serial and parallel outputs differ\n");
    return 1;
  }
  std::printf("outputs bit-identical\n");
  return 0;
}
