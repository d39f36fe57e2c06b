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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

namespace oracle {
namespace {

double normal_pdf(double x, double sigma) {
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  double z = x / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

// Log density of the mixture sum_i p_i N(c_i, sigma^2), by log-sum-exp.
double mixture_log_pdf(const mmacc::MixtureGaussian& mog, double x) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(mog.probabilities.size());
  for (std::size_t i = 0; i < mog.probabilities.size(); ++i) {
    if (mog.probabilities[i] <= 0.0) continue;
    double z = (x - mog.sensitivities[i]) / mog.sigma;
    double t = std::log(mog.probabilities[i]) - 0.5 * z * z;
    terms.push_back(t);
    best = std::max(best, t);
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - best);
  return best + std::log(sum) - std::log(2.0 * 3.14159265358979323846) / 2.0 -
         std::log(mog.sigma);
}

double reference_log_pdf(double x, double sigma) {
  double z = x / sigma;
  return -0.5 * z * z - std::log(2.0 * 3.14159265358979323846) / 2.0 -
         std::log(sigma);
}

double mixture_pdf(const mmacc::MixtureGaussian& mog, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mog.probabilities.size(); ++i) {
    sum += mog.probabilities[i] * normal_pdf(x - mog.sensitivities[i],
                                             mog.sigma);
  }
  return sum;
}

// Log density ratio ln(mixture / reference), increasing in x for
// non-negative sensitivities.
double log_ratio(const mmacc::MixtureGaussian& mog, double x) {
  return mixture_log_pdf(mog, x) - reference_log_pdf(x, mog.sigma);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (!(b > a)) return 0.0;
  double fa = f(a);
  double fb = f(b);
  double fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Root of log_ratio(x) = target on [lo, hi], assuming monotone increase.
double crossing_point(const mmacc::MixtureGaussian& mog, double target,
                      double lo, double hi) {
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (log_ratio(mog, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double hockey_stick_numeric(const mmacc::MixtureGaussian& mog, double epsilon,
                            mmacc::Adjacency adjacency) {
  mog.validate();
  if (mog.probabilities.size() > 16) {
    throw TooLargeError("hockey_stick_numeric: more than 16 components");
  }
  double c_max = 0.0;
  for (double c : mog.sensitivities) c_max = std::max(c_max, c);
  double lo = -c_max - 12.0 * mog.sigma;
  double hi = c_max + 12.0 * mog.sigma;
  double e_eps = std::exp(epsilon);
  bool remove = adjacency == mmacc::Adjacency::kRemove;
  auto integrand = [&](double x) {
    double p = mixture_pdf(mog, x);
    double q = normal_pdf(x, mog.sigma);
    double diff = remove ? p - e_eps * q : q - e_eps * p;
    return std::max(diff, 0.0);
  };
  // The density ratio is monotone, so the integrand is positive on one side
  // of a single crossing; locating it keeps the quadrature well behaved.
  double ratio_lo = log_ratio(mog, lo);
  double ratio_hi = log_ratio(mog, hi);
  constexpr double kTol = 1e-10;
  if (remove) {
    if (ratio_hi <= epsilon) return 0.0;
    if (ratio_lo >= epsilon) return integrate(integrand, lo, hi, kTol);
    double split = crossing_point(mog, epsilon, lo, hi);
    return integrate(integrand, split, hi, kTol);
  }
  // Reversed pair: positive where ln(reference / mixture) > epsilon, i.e.
  // where the mixture-over-reference log ratio is below -epsilon.
  if (ratio_lo >= -epsilon) return 0.0;
  if (ratio_hi <= -epsilon) return integrate(integrand, lo, hi, kTol);
  double split = crossing_point(mog, -epsilon, lo, hi);
  return integrate(integrand, lo, split, kTol);
}

MonteCarloEstimate hockey_stick_monte_carlo(const mmacc::MixtureGaussian& mog,
                                            double epsilon,
                                            mmacc::Adjacency adjacency,
                                            std::int64_t samples,
                                            std::uint64_t seed) {
  mog.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, mog.sigma);
  std::discrete_distribution<std::size_t> component(
      mog.probabilities.begin(), mog.probabilities.end());
  bool remove = adjacency == mmacc::Adjacency::kRemove;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    // Sample from the first argument of the divergence and average the
    // clipped likelihood-ratio payoff max{1 - e^eps Q(x)/P(x), 0}.
    double x;
    double log_p;
    double log_q;
    if (remove) {
      x = mog.sensitivities[component(rng)] + noise(rng);
      log_p = mixture_log_pdf(mog, x);
      log_q = reference_log_pdf(x, mog.sigma);
    } else {
      x = noise(rng);
      log_p = reference_log_pdf(x, mog.sigma);
      log_q = mixture_log_pdf(mog, x);
    }
    double value = std::max(1.0 - std::exp(epsilon + log_q - log_p), 0.0);
    sum += value;
    sum_sq += value * value;
  }
  MonteCarloEstimate estimate;
  double n = static_cast<double>(samples);
  estimate.mean = sum / n;
  double variance = std::max(sum_sq / n - estimate.mean * estimate.mean, 0.0);
  estimate.std_error = std::sqrt(variance / n);
  return estimate;
}

mmacc::MixtureGaussian brute_force_pmog(const mmacc::ProductMixture& pm) {
  pm.validate();
  std::size_t k = pm.probabilities.size();
  if (k > 20) {
    throw TooLargeError("brute_force_pmog: more than 20 columns");
  }
  std::map<double, double> by_sensitivity;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double prob = 1.0;
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask & (std::uint64_t{1} << j)) {
        prob *= pm.probabilities[j];
        total += pm.sensitivities[j];
      } else {
        prob *= 1.0 - pm.probabilities[j];
      }
    }
    if (prob > 0.0) by_sensitivity[total] += prob;
  }
  mmacc::MixtureGaussian mog;
  mog.sigma = pm.sigma;
  for (const auto& [sensitivity, prob] : by_sensitivity) {
    mog.sensitivities.push_back(sensitivity);
    mog.probabilities.push_back(prob);
  }
  return mog;
}

double exact_min_s(const mmacc::EncoderMatrix& C, std::int64_t i,
                   std::int64_t j, double prob, double budget) {
  C.validate();
  std::int64_t k = std::min(i + 1, C.cols);
  if (k > 20) {
    throw TooLargeError("exact_min_s: more than 2^20 participation vectors");
  }
  if (budget >= 1.0) return 0.0;
  std::vector<double> dots(static_cast<std::size_t>(k), 0.0);
  for (std::int64_t jp = 0; jp < k; ++jp) {
    for (std::int64_t r = 0; r < i; ++r) {
      dots[static_cast<std::size_t>(jp)] += C.at(r, j) * C.at(r, jp);
    }
  }
  std::map<double, double> tail;  // total -> probability of that total
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    double mass = 1.0;
    double total = 0.0;
    for (std::int64_t jp = 0; jp < k; ++jp) {
      if (mask & (std::uint64_t{1} << jp)) {
        mass *= prob;
        total += dots[static_cast<std::size_t>(jp)];
      } else {
        mass *= 1.0 - prob;
      }
    }
    tail[total] += mass;
  }
  // Pr[total > s] drops as s passes each distinct value; take the smallest
  // value whose strict upper tail fits in the budget.
  double above = 0.0;
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
    if (above > budget) {
      // The previous (larger) value was the smallest feasible s.
      auto prev = it;
      --prev;
      return prev->first;
    }
    above += it->second;
  }
  return tail.begin()->first;
}

}  // namespace oracle
