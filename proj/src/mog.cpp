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

#include "mmacc/mog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include "mmacc/convolution.hpp"
#include "mmacc/errors.hpp"
#include "mmacc/normal.hpp"

namespace mmacc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbTolerance = 1e-9;

// Components with positive probability, sensitivities ascending, duplicate
// sensitivities merged. zero_prob is the total probability on c = 0.
struct Components {
  std::vector<double> log_prob;
  std::vector<double> c;
  double sigma = 1.0;
  double zero_prob = 0.0;
  bool any_positive = false;
};

Components clean_components(const MixtureGaussian& mog) {
  std::map<double, double> merged;
  for (std::size_t i = 0; i < mog.probabilities.size(); ++i) {
    if (mog.probabilities[i] > 0.0) {
      merged[mog.sensitivities[i]] += mog.probabilities[i];
    }
  }
  Components out;
  out.sigma = mog.sigma;
  for (const auto& [c, p] : merged) {
    out.log_prob.push_back(std::log(p));
    out.c.push_back(c);
    if (c == 0.0) out.zero_prob += p;
    if (c > 0.0) out.any_positive = true;
  }
  return out;
}

// Merge the highest-sensitivity components whose total probability is at most
// tail_mass into a single component at the largest sensitivity. Moving mass
// to a larger sensitivity only increases the reported divergence, so this is
// a pessimistic reduction; it keeps the component count small for mixtures
// with long negligible tails (e.g. binomial sensitivities).
void prune_components(Components& comps, double tail_mass) {
  const std::size_t n = comps.c.size();
  if (n < 3) return;
  double suffix = 0.0;
  std::size_t cut = n;
  for (std::size_t i = n; i-- > 0;) {
    suffix += std::exp(comps.log_prob[i]);
    if (suffix > tail_mass) break;
    cut = i;
  }
  if (cut + 2 > n) return;  // nothing to merge
  double merged_prob = 0.0;
  for (std::size_t i = cut; i < n; ++i) {
    merged_prob += std::exp(comps.log_prob[i]);
  }
  double merged_c = comps.c[n - 1];
  comps.log_prob.resize(cut);
  comps.c.resize(cut);
  comps.log_prob.push_back(std::log(merged_prob));
  comps.c.push_back(merged_c);
}

// Decreasing privacy loss and its sampling distribution for one adjacency
// orientation.
//   remove: L(x) = lse_i(ln p_i + (-2 c_i x - c_i^2)/(2 sigma^2)),
//           sampling CDF sum_i p_i Phi((x + c_i)/sigma);
//   add:    L(x) = -lse_i(ln p_i + (+2 c_i x - c_i^2)/(2 sigma^2)),
//           sampling CDF Phi(x / sigma).
struct LossProfile {
  const Components* comps;
  Adjacency adjacency;
  // Per-component affine coefficients of the exponent: t_i = a_i x + b_i.
  std::vector<double> slope;
  std::vector<double> intercept;
  mutable std::vector<double> scratch;

  LossProfile(const Components* comps_in, Adjacency adjacency_in)
      : comps(comps_in), adjacency(adjacency_in) {
    const double two_sigma_sq = 2.0 * comps->sigma * comps->sigma;
    const double sign = adjacency == Adjacency::kRemove ? -1.0 : 1.0;
    const std::size_t n = comps->c.size();
    slope.reserve(n);
    intercept.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      slope.push_back(sign * 2.0 * comps->c[i] / two_sigma_sq);
      intercept.push_back(comps->log_prob[i] -
                          comps->c[i] * comps->c[i] / two_sigma_sq);
    }
    scratch.resize(n);
  }

  double loss(double x) const {
    double max_term = -kInf;
    const std::size_t n = slope.size();
    for (std::size_t i = 0; i < n; ++i) {
      double t = intercept[i] + slope[i] * x;
      scratch[i] = t;
      if (t > max_term) max_term = t;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::exp(scratch[i] - max_term);
    }
    double lse = max_term + std::log(sum);
    return adjacency == Adjacency::kRemove ? lse : -lse;
  }

  double cdf(double x) const {
    if (adjacency == Adjacency::kAdd) {
      return standard_normal_cdf(x / comps->sigma);
    }
    double f = 0.0;
    for (std::size_t i = 0; i < comps->c.size(); ++i) {
      f += std::exp(comps->log_prob[i]) *
           standard_normal_cdf((x + comps->c[i]) / comps->sigma);
    }
    return f;
  }

  // Supremum / infimum of the loss over the real line.
  double loss_sup() const {
    if (adjacency == Adjacency::kRemove) {
      return comps->any_positive ? kInf : 0.0;
    }
    return comps->zero_prob > 0.0 ? -std::log(comps->zero_prob)
                                  : (comps->any_positive ? kInf : 0.0);
  }
  double loss_inf() const {
    if (adjacency == Adjacency::kRemove) {
      return comps->zero_prob > 0.0 ? std::log(comps->zero_prob)
                                    : (comps->any_positive ? -kInf : 0.0);
    }
    return comps->any_positive ? -kInf : 0.0;
  }
};

// Smallest integer n with loss(n * grid) <= y. `guess` is a search start
// that may lie on either side of the answer; `known_hi`, when provided, must
// already satisfy the condition.
std::int64_t grid_inverse(const LossProfile& profile, double y, double grid,
                          std::optional<std::int64_t> guess = std::nullopt,
                          std::optional<std::int64_t> known_hi = std::nullopt) {
  std::int64_t hi;
  if (guess && profile.loss(static_cast<double>(*guess) * grid) <= y) {
    hi = *guess;
  } else {
    hi = guess.value_or(0);
    std::int64_t step = 1;
    while (profile.loss(static_cast<double>(hi) * grid) > y) {
      if (known_hi && hi + step >= *known_hi) {
        hi = *known_hi;
        break;
      }
      hi += step;
      step *= 2;
      if (step > (std::int64_t{1} << 60)) {
        throw OutOfRangeError("grid_inverse: no satisfying point found");
      }
    }
  }
  std::int64_t lo = hi - 1;
  std::int64_t step = 1;
  while (profile.loss(static_cast<double>(lo) * grid) <= y) {
    hi = lo;
    lo -= step;
    step *= 2;
    if (step > (std::int64_t{1} << 60)) {
      throw OutOfRangeError("grid_inverse: no violating point found");
    }
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (profile.loss(static_cast<double>(mid) * grid) <= y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Smallest x with cdf(x) >= q, by bracket expansion and bisection.
double cdf_quantile(const LossProfile& profile, double q) {
  if (profile.adjacency == Adjacency::kAdd) {
    return profile.comps->sigma * standard_normal_quantile(q);
  }
  double lo = -1.0, hi = 1.0;
  while (profile.cdf(lo) > q) lo *= 2.0;
  while (profile.cdf(hi) < q) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (profile.cdf(mid) >= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Round a loss value up to the grid, guarding against the division landing
// on the optimistic side of an exact lattice point.
std::int64_t ceil_loss_index(double loss, double grid) {
  auto k = static_cast<std::int64_t>(std::ceil(loss / grid));
  while (static_cast<double>(k) * grid < loss) ++k;
  while (static_cast<double>(k - 1) * grid >= loss) --k;
  return k;
}

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) -
         std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

void validate_pairs(const std::vector<double>& probabilities,
                    const std::vector<double>& sensitivities, double sigma,
                    const char* what) {
  if (probabilities.size() != sensitivities.size()) {
    throw OutOfRangeError(std::string(what) + ": length mismatch");
  }
  if (!(sigma > 0.0)) {
    throw OutOfRangeError(std::string(what) + ": sigma must be positive");
  }
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw OutOfRangeError(std::string(what) + ": probability outside [0,1]");
    }
  }
  for (double c : sensitivities) {
    if (!(c >= 0.0)) {
      throw OutOfRangeError(std::string(what) + ": negative sensitivity");
    }
  }
}

}  // namespace

void MixtureGaussian::validate() const {
  validate_pairs(probabilities, sensitivities, sigma, "MixtureGaussian");
  double sum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw OutOfRangeError("MixtureGaussian: probabilities do not sum to 1");
  }
}

void ProductMixture::validate() const {
  validate_pairs(probabilities, sensitivities, sigma, "ProductMixture");
}

double privacy_loss(const MixtureGaussian& mog, double x) {
  mog.validate();
  Components comps = clean_components(mog);
  return LossProfile{&comps, Adjacency::kRemove}.loss(x);
}

double mixture_cdf(const MixtureGaussian& mog, double x) {
  mog.validate();
  Components comps = clean_components(mog);
  return LossProfile{&comps, Adjacency::kRemove}.cdf(x);
}

double inverse_privacy_loss(const MixtureGaussian& mog, double y,
                            double delta1_grid) {
  mog.validate();
  if (!(delta1_grid > 0.0)) {
    throw OutOfRangeError("inverse_privacy_loss: grid must be positive");
  }
  Components comps = clean_components(mog);
  LossProfile profile{&comps, Adjacency::kRemove};
  if (!(y > profile.loss_inf() && y < profile.loss_sup())) {
    throw OutOfRangeError(
        "inverse_privacy_loss: y outside the open range of the loss");
  }
  std::int64_t n = grid_inverse(profile, y, delta1_grid, std::nullopt);
  return static_cast<double>(n) * delta1_grid;
}

DiscretePLD pld_from_mog(const MixtureGaussian& mog,
                         const DiscretizationConfig& cfg,
                         Adjacency adjacency) {
  mog.validate();
  cfg.validate();
  Components comps = clean_components(mog);
  if (!comps.any_positive) {
    return DiscretePLD::point_mass_at_zero(cfg.pld_grid);
  }
  prune_components(comps, cfg.tail_truncation_mass);
  LossProfile profile{&comps, adjacency};

  const double x_lo = cdf_quantile(profile, cfg.tail_truncation_mass);
  const double x_hi = cdf_quantile(profile, 1.0 - cfg.tail_truncation_mass);
  const double loss_hi = profile.loss(x_lo);
  const double loss_lo = profile.loss(x_hi);
  const double grid = cfg.pld_grid;
  std::int64_t k_lo = ceil_loss_index(loss_lo, grid);
  std::int64_t k_hi = std::max(ceil_loss_index(loss_hi, grid), k_lo);

  const double sup = profile.loss_sup();
  const double inverse_grid = cfg.inverse_tolerance;
  DiscretePLD pld;
  pld.grid_spacing = grid;
  pld.origin_index = k_lo;
  pld.masses.resize(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);

  // Boundary b_k = smallest inverse-grid point with loss <= k * grid; bucket
  // k covers x in [b_k, b_{k-1}) and is assigned the rounded-up loss k*grid.
  // Boundaries are non-increasing in k, so each previous boundary brackets
  // the next search. A target above the loss supremum has no boundary (all x
  // qualify, CDF contribution 0).
  std::optional<std::int64_t> prev;
  std::int64_t last_step = 0;
  double prev_cdf = 1.0;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    double target = static_cast<double>(k) * grid;
    double cdf_at_boundary = 0.0;
    if (target < sup) {
      // Boundaries drift down by a slowly varying step, so the previous step
      // is a near-exact prediction of the next boundary.
      std::optional<std::int64_t> guess;
      if (prev) guess = *prev - last_step;
      std::int64_t b = grid_inverse(profile, target, inverse_grid, guess, prev);
      cdf_at_boundary = profile.cdf(static_cast<double>(b) * inverse_grid);
      if (prev) last_step = *prev - b;
      prev = b;
    } else {
      prev = std::nullopt;
      // All later targets are above the supremum as well.
    }
    double mass = prev_cdf - cdf_at_boundary;
    pld.masses[static_cast<std::size_t>(k - k_lo)] = std::max(mass, 0.0);
    prev_cdf = cdf_at_boundary;
    if (!prev && target >= sup) {
      // CDF at all remaining boundaries is 0; the loop body above would keep
      // producing zero masses, so stop early.
      break;
    }
  }
  pld.infinity_mass = prev_cdf;
  return pld;
}

SensitivityPMF sensitivity_pmf(const ProductMixture& pm, double grid) {
  pm.validate();
  if (!(grid > 0.0)) {
    throw OutOfRangeError("sensitivity_pmf: grid must be positive");
  }
  // Round sensitivities up to the grid; columns with zero sensitivity or
  // zero probability contribute nothing.
  std::vector<std::int64_t> units;
  std::vector<double> probs;
  for (std::size_t j = 0; j < pm.sensitivities.size(); ++j) {
    double c = pm.sensitivities[j];
    double p = pm.probabilities[j];
    if (c <= 0.0 || p <= 0.0) continue;
    auto u = static_cast<std::int64_t>(std::ceil(c / grid));
    while (static_cast<double>(u) * grid < c) ++u;
    while (u > 1 && static_cast<double>(u - 1) * grid >= c) --u;
    units.push_back(u);
    probs.push_back(p);
  }
  SensitivityPMF out;
  out.grid = grid;
  if (units.empty()) {
    out.masses.emplace_back(0, 1.0);
    return out;
  }
  // All supports live on multiples of the unit gcd; convolving on the reduced
  // lattice is exact and much smaller for matrices with equal entries.
  std::int64_t g = 0;
  for (std::int64_t u : units) g = std::gcd(g, u);
  // Sparse path: each factor is two-point, so the product support is the set
  // of attainable unit sums. Repeated entries collapse the support (w equal
  // columns give w + 1 sums), keeping the atom count far below the dense
  // lattice length. Falls back to dense convolution if the support grows.
  constexpr std::size_t kSparseLimit = 1 << 14;
  {
    std::vector<std::pair<std::int64_t, double>> sparse{{0, 1.0}};
    std::vector<std::pair<std::int64_t, double>> merged;
    bool sparse_ok = true;
    for (std::size_t j = 0; j < units.size() && sparse_ok; ++j) {
      const std::int64_t shift = units[j] / g;
      const double p = probs[j];
      const double q = 1.0 - p;
      merged.clear();
      std::size_t a = 0, b = 0;  // a: stay terms, b: shifted terms
      while (a < sparse.size() || b < sparse.size()) {
        std::int64_t key_a = a < sparse.size()
                                 ? sparse[a].first
                                 : std::numeric_limits<std::int64_t>::max();
        std::int64_t key_b = b < sparse.size()
                                 ? sparse[b].first + shift
                                 : std::numeric_limits<std::int64_t>::max();
        if (key_a < key_b) {
          merged.emplace_back(key_a, sparse[a].second * q);
          ++a;
        } else if (key_b < key_a) {
          merged.emplace_back(key_b, sparse[b].second * p);
          ++b;
        } else {
          merged.emplace_back(key_a,
                              sparse[a].second * q + sparse[b].second * p);
          ++a;
          ++b;
        }
      }
      if (merged.size() > kSparseLimit) {
        sparse_ok = false;
        break;
      }
      std::swap(sparse, merged);
    }
    if (sparse_ok) {
      for (const auto& [sum, prob] : sparse) {
        if (prob > 0.0) out.masses.emplace_back(sum * g, prob);
      }
      return out;
    }
  }
  std::vector<std::vector<double>> layer;
  layer.reserve(units.size());
  for (std::size_t j = 0; j < units.size(); ++j) {
    std::vector<double> two_point(static_cast<std::size_t>(units[j] / g) + 1,
                                  0.0);
    two_point.front() = 1.0 - probs[j];
    two_point.back() = probs[j];
    layer.push_back(std::move(two_point));
  }
  // Balanced divide-and-conquer merge.
  while (layer.size() > 1) {
    std::vector<std::vector<double>> next;
    next.reserve((layer.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
      next.push_back(convolve(layer[i], layer[i + 1]));
    }
    if (layer.size() % 2 == 1) next.push_back(std::move(layer.back()));
    layer = std::move(next);
  }
  const std::vector<double>& pmf = layer.front();
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k] > 0.0) {
      out.masses.emplace_back(static_cast<std::int64_t>(k) * g, pmf[k]);
    }
  }
  return out;
}

MixtureGaussian discretize_pmog(const ProductMixture& pm,
                                const DiscretizationConfig& cfg) {
  cfg.validate();
  SensitivityPMF pmf = sensitivity_pmf(pm, cfg.sensitivity_grid);
  MixtureGaussian mog;
  mog.sigma = pm.sigma;
  mog.probabilities.reserve(pmf.masses.size());
  mog.sensitivities.reserve(pmf.masses.size());
  for (const auto& [units, prob] : pmf.masses) {
    mog.probabilities.push_back(prob);
    mog.sensitivities.push_back(static_cast<double>(units) * pmf.grid);
  }
  return mog;
}

MixtureGaussian mog_from_binomial(std::int64_t trials, double prob,
                                  double unit_sensitivity, double sigma) {
  if (trials < 0 || !(prob >= 0.0 && prob <= 1.0)) {
    throw OutOfRangeError("mog_from_binomial: invalid trials or prob");
  }
  MixtureGaussian mog;
  mog.sigma = sigma;
  if (trials == 0 || prob == 0.0 || prob == 1.0) {
    double c = prob == 1.0 ? static_cast<double>(trials) * unit_sensitivity
                           : 0.0;
    mog.probabilities = {1.0};
    mog.sensitivities = {c};
    return mog;
  }
  const double log_p = std::log(prob);
  const double log_q = std::log1p(-prob);
  for (std::int64_t k = 0; k <= trials; ++k) {
    double lp = log_choose(trials, k) + static_cast<double>(k) * log_p +
                static_cast<double>(trials - k) * log_q;
    mog.probabilities.push_back(std::exp(lp));
    mog.sensitivities.push_back(static_cast<double>(k) * unit_sensitivity);
  }
  // Exponentiation loses a few ulps; restore an exact total on the bulk atom.
  double sum =
      std::accumulate(mog.probabilities.begin(), mog.probabilities.end(), 0.0);
  std::size_t largest = 0;
  for (std::size_t i = 1; i < mog.probabilities.size(); ++i) {
    if (mog.probabilities[i] > mog.probabilities[largest]) largest = i;
  }
  mog.probabilities[largest] += 1.0 - sum;
  return mog;
}

MixtureGaussian mog_from_hypergeometric(std::int64_t population,
                                        std::int64_t group, std::int64_t draws,
                                        double unit_sensitivity, double sigma) {
  if (population < 1 || group < 0 || group > population || draws < 0 ||
      draws > population) {
    throw OutOfRangeError("mog_from_hypergeometric: invalid parameters");
  }
  MixtureGaussian mog;
  mog.sigma = sigma;
  std::int64_t k_min = std::max<std::int64_t>(0, draws + group - population);
  std::int64_t k_max = std::min(group, draws);
  double log_denom = log_choose(population, draws);
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    double lp = log_choose(group, k) + log_choose(population - group, draws - k) -
                log_denom;
    mog.probabilities.push_back(std::exp(lp));
    mog.sensitivities.push_back(static_cast<double>(k) * unit_sensitivity);
  }
  double sum =
      std::accumulate(mog.probabilities.begin(), mog.probabilities.end(), 0.0);
  std::size_t largest = 0;
  for (std::size_t i = 1; i < mog.probabilities.size(); ++i) {
    if (mog.probabilities[i] > mog.probabilities[largest]) largest = i;
  }
  mog.probabilities[largest] += 1.0 - sum;
  return mog;
}

}  // namespace mmacc
