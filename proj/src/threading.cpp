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

#include "mmacc/threading.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmacc {
namespace {
std::atomic<int> g_thread_count{0};
}  // namespace

void set_thread_count(int n) { g_thread_count.store(n > 0 ? n : 0); }

int thread_count() {
  int n = g_thread_count.load();
  if (n > 0) return n;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mmacc
