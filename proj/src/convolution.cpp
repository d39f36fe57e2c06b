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

#include "mmacc/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace mmacc {
namespace {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT (inverse when invert is true).
void fft(std::vector<cplx>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / static_cast<double>(len) * (invert ? -1.0 : 1.0);
    cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (invert) {
    double inv_n = 1.0 / static_cast<double>(n);
    for (cplx& x : a) x *= inv_n;
  }
}

std::vector<double> direct_convolve(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    const double ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += ai * b[j];
    }
  }
  return out;
}

// Clip negative FFT noise and restore the exact target total mass by
// adjusting the largest entry.
void fix_mass(std::vector<double>& out, double target) {
  double sum = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) out[i] = 0.0;
    sum += out[i];
    if (out[i] > out[largest]) largest = i;
  }
  if (!out.empty()) out[largest] += target - sum;
}

std::vector<double> fft_convolve(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  std::size_t result_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < result_len) n <<= 1;
  std::vector<cplx> fa(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = cplx(a[i], 0.0);
  std::vector<cplx> fb(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = cplx(b[i], 0.0);
  fft(fa, false);
  fft(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fb.clear();
  fb.shrink_to_fit();
  fft(fa, true);
  std::vector<double> out(result_len);
  for (std::size_t i = 0; i < result_len; ++i) out[i] = fa[i].real();
  double target = std::accumulate(a.begin(), a.end(), 0.0) *
                  std::accumulate(b.begin(), b.end(), 0.0);
  fix_mass(out, target);
  return out;
}

}  // namespace

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  if (a.size() < kFftThreshold || b.size() < kFftThreshold) {
    return direct_convolve(a, b);
  }
  return fft_convolve(a, b);
}

std::vector<double> convolve_self(const std::vector<double>& a) {
  if (a.empty()) return {};
  if (a.size() < kFftThreshold) return direct_convolve(a, a);
  std::size_t result_len = 2 * a.size() - 1;
  std::size_t n = 1;
  while (n < result_len) n <<= 1;
  std::vector<cplx> fa(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = cplx(a[i], 0.0);
  fft(fa, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fa[i];
  fft(fa, true);
  std::vector<double> out(result_len);
  for (std::size_t i = 0; i < result_len; ++i) out[i] = fa[i].real();
  double s = std::accumulate(a.begin(), a.end(), 0.0);
  fix_mass(out, s * s);
  return out;
}

}  // namespace mmacc
