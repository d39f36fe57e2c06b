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

#ifndef MMACC_THREADING_HPP_
#define MMACC_THREADING_HPP_

namespace mmacc {

// Worker count for parallel kernels; n <= 0 restores the hardware default.
// All parallel code paths produce output identical to the serial path, so
// this only affects wall-clock time.
void set_thread_count(int n);
int thread_count();

}  // namespace mmacc

#endif  // MMACC_THREADING_HPP_
