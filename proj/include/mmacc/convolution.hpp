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

#ifndef MMACC_CONVOLUTION_HPP_
#define MMACC_CONVOLUTION_HPP_

#include <cstddef>
#include <vector>

namespace mmacc {

// Operand length below which convolutions are computed directly.
inline constexpr std::size_t kFftThreshold = 256;

// Linear convolution of two non-negative mass sequences. Short operands use
// the direct O(n*m) sum; long operands use a radix-2 FFT. FFT results are
// clipped at zero and the largest output entry is adjusted so the total mass
// equals sum(a) * sum(b) exactly (adjustment stays below 1e-12 in practice).
std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b);

// Convolution of a sequence with itself; avoids the second forward FFT.
std::vector<double> convolve_self(const std::vector<double>& a);

}  // namespace mmacc

#endif  // MMACC_CONVOLUTION_HPP_
