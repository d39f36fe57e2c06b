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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mmacc/errors.hpp"
#include "mmacc/mog.hpp"
#include "mmacc/pld.hpp"
#include "oracle.hpp"

using mmacc::Adjacency;
using mmacc::delta_for_epsilon;
using mmacc::discretize_pmog;
using mmacc::DiscretizationConfig;
using mmacc::inverse_privacy_loss;
using mmacc::mixture_cdf;
using mmacc::MixtureGaussian;
using mmacc::mog_from_binomial;
using mmacc::pld_from_mog;
using mmacc::privacy_loss;
using mmacc::ProductMixture;

namespace {

MixtureGaussian make_mog(std::vector<double> probs, std::vector<double> cs,
                         double sigma) {
  MixtureGaussian mog;
  mog.probabilities = std::move(probs);
  mog.sensitivities = std::move(cs);
  mog.sigma = sigma;
  return mog;
}

MixtureGaussian random_mog(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k_dist(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sens(0.0, 2.0);
  std::uniform_real_distribution<double> sigma_dist(0.5, 5.0);
  int k = k_dist(rng);
  MixtureGaussian mog;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double w = unit(rng) + 0.05;
    mog.probabilities.push_back(w);
    mog.sensitivities.push_back(sens(rng));
    total += w;
  }
  for (double& w : mog.probabilities) w /= total;
  mog.sigma = sigma_dist(rng);
  return mog;
}

}  // namespace

TEST_CASE("privacy loss at reference points") {
  CHECK(privacy_loss(make_mog({1.0}, {0.0}, 1.7), 0.3) == 0.0);
  CHECK(privacy_loss(make_mog({0.5, 0.5}, {1.0, 0.0}, 1.0), -0.5) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(privacy_loss(make_mog({1.0}, {1.0}, 1.0), 0.0) ==
        doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("privacy loss is non-increasing in x") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xs(-20.0, 20.0);
  for (int instance = 0; instance < 5; ++instance) {
    MixtureGaussian mog = random_mog(rng);
    std::vector<double> points;
    for (int i = 0; i < 1000; ++i) points.push_back(xs(rng));
    std::sort(points.begin(), points.end());
    double prev = privacy_loss(mog, points.front());
    for (double x : points) {
      double l = privacy_loss(mog, x);
      CHECK(l <= prev + 1e-12);
      prev = l;
    }
  }
}

TEST_CASE("mixture cdf at reference points") {
  CHECK(mixture_cdf(make_mog({1.0}, {0.0}, 1.0), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mixture_cdf(make_mog({1.0}, {0.0}, 1.0), 1.959964) ==
        doctest::Approx(0.975).epsilon(1e-6));
  CHECK(mixture_cdf(make_mog({0.5, 0.5}, {1.0, 0.0}, 1.0), -0.5) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("inverse privacy loss at reference points") {
  CHECK(inverse_privacy_loss(make_mog({0.5, 0.5}, {1.0, 0.0}, 1.0), 0.0,
                             0.25) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(inverse_privacy_loss(make_mog({1.0}, {1.0}, 1.0), -0.5, 0.1) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inverse_privacy_loss(make_mog({1.0}, {1.0}, 1.0), -0.55, 0.1) ==
        doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("inverse privacy loss grid contract") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int instance = 0; instance < 20; ++instance) {
    MixtureGaussian mog = random_mog(rng);
    if (*std::max_element(mog.sensitivities.begin(),
                          mog.sensitivities.end()) == 0.0) {
      continue;
    }
    double grid = 1e-3;
    double lo = privacy_loss(mog, 50.0 * mog.sigma);
    double hi = privacy_loss(mog, -50.0 * mog.sigma);
    double y = lo + (hi - lo) * (0.1 + 0.8 * unit(rng));
    double x = inverse_privacy_loss(mog, y, grid);
    CHECK(privacy_loss(mog, x) <= y);
    CHECK(privacy_loss(mog, x - grid) > y);
    CHECK(std::abs(x / grid - std::round(x / grid)) < 1e-6);
  }
}

TEST_CASE("out-of-range inversion targets are rejected") {
  MixtureGaussian mog = make_mog({0.5, 0.5}, {1.0, 0.0}, 1.0);
  // The loss is bounded below by ln(0.5) when a zero-sensitivity component
  // is present.
  CHECK_THROWS_AS(inverse_privacy_loss(mog, std::log(0.5) - 0.1, 0.1),
                  mmacc::OutOfRangeError);
}

TEST_CASE("zero-sensitivity mixture gives the zero PLD") {
  DiscretizationConfig cfg;
  for (Adjacency adj : {Adjacency::kRemove, Adjacency::kAdd}) {
    mmacc::DiscretePLD pld = pld_from_mog(make_mog({1.0}, {0.0}, 2.0), cfg,
                                          adj);
    CHECK(pld.infinity_mass == 0.0);
    CHECK(delta_for_epsilon(pld, 0.0) <= 1e-9);
  }
}

TEST_CASE("pld_from_mog brackets the quadrature reference") {
  std::mt19937_64 rng(9);
  DiscretizationConfig cfg;
  for (int instance = 0; instance < 4; ++instance) {
    MixtureGaussian mog = random_mog(rng);
    for (Adjacency adj : {Adjacency::kRemove, Adjacency::kAdd}) {
      mmacc::DiscretePLD pld = pld_from_mog(mog, cfg, adj);
      for (double eps : {0.0, 0.5, 1.0, 2.0}) {
        double reference = oracle::hockey_stick_numeric(mog, eps, adj);
        double engine = delta_for_epsilon(pld, eps);
        CHECK(engine >= reference - 1e-9);
        CHECK(engine <= reference + 1e-4);
      }
    }
  }
}

TEST_CASE("monotone dominance in sensitivities") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> bump(0.1, 1.0);
  DiscretizationConfig cfg;
  for (int instance = 0; instance < 10; ++instance) {
    MixtureGaussian lo = random_mog(rng);
    MixtureGaussian hi = lo;
    for (double& c : hi.sensitivities) c += bump(rng);
    for (Adjacency adj : {Adjacency::kRemove, Adjacency::kAdd}) {
      mmacc::DiscretePLD pld_lo = pld_from_mog(lo, cfg, adj);
      mmacc::DiscretePLD pld_hi = pld_from_mog(hi, cfg, adj);
      for (double eps : {0.0, 0.5, 1.0}) {
        CHECK(delta_for_epsilon(pld_hi, eps) >=
              delta_for_epsilon(pld_lo, eps) - 1e-9);
      }
    }
  }
}

TEST_CASE("discretize_pmog rounds up and enumerates subsets") {
  ProductMixture pm;
  pm.probabilities = {0.5, 0.5};
  pm.sensitivities = {0.3, 0.4};
  pm.sigma = 1.0;
  DiscretizationConfig cfg;
  cfg.sensitivity_grid = 0.25;
  MixtureGaussian mog = discretize_pmog(pm, cfg);
  REQUIRE(mog.sensitivities.size() == 3);
  CHECK(mog.sensitivities[0] == doctest::Approx(0.0));
  CHECK(mog.sensitivities[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mog.sensitivities[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mog.probabilities[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mog.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mog.probabilities[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("single column reduces to the subsampled gaussian") {
  ProductMixture pm;
  pm.probabilities = {0.3};
  pm.sensitivities = {1.0};
  pm.sigma = 2.0;
  DiscretizationConfig cfg;
  cfg.sensitivity_grid = 1.0;
  MixtureGaussian mog = discretize_pmog(pm, cfg);
  REQUIRE(mog.sensitivities.size() == 2);
  CHECK(mog.sensitivities[0] == 0.0);
  CHECK(mog.sensitivities[1] == doctest::Approx(1.0));
  CHECK(mog.probabilities[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(mog.probabilities[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("all-zero inclusion probabilities collapse to a point mass") {
  ProductMixture pm;
  pm.probabilities = {0.0, 0.0};
  pm.sensitivities = {1.0, 2.0};
  pm.sigma = 1.0;
  MixtureGaussian mog = discretize_pmog(pm, DiscretizationConfig{});
  REQUIRE(mog.sensitivities.size() == 1);
  CHECK(mog.sensitivities[0] == 0.0);
  CHECK(mog.probabilities[0] == doctest::Approx(1.0));
}

TEST_CASE("discretize_pmog is exact on divisor lattices") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> cols(1, 12);
  std::uniform_int_distribution<int> mult(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DiscretizationConfig cfg;
  cfg.sensitivity_grid = 0.25;  // power of two: lattice sums are exact
  for (int instance = 0; instance < 10; ++instance) {
    ProductMixture pm;
    pm.sigma = 1.0;
    int k = cols(rng);
    for (int j = 0; j < k; ++j) {
      pm.probabilities.push_back(unit(rng));
      pm.sensitivities.push_back(0.25 * mult(rng));
    }
    MixtureGaussian engine = discretize_pmog(pm, cfg);
    MixtureGaussian exact = oracle::brute_force_pmog(pm);
    REQUIRE(engine.sensitivities.size() == exact.sensitivities.size());
    for (std::size_t a = 0; a < engine.sensitivities.size(); ++a) {
      CHECK(engine.sensitivities[a] ==
            doctest::Approx(exact.sensitivities[a]).epsilon(1e-12));
      CHECK(engine.probabilities[a] ==
            doctest::Approx(exact.probabilities[a]).epsilon(1e-12));
    }
  }
}

TEST_CASE("discretize_pmog is pessimistic off the lattice") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> cols(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sens(0.05, 2.0);
  DiscretizationConfig cfg;
  for (int instance = 0; instance < 8; ++instance) {
    ProductMixture pm;
    pm.sigma = 1.0 + unit(rng);
    int k = cols(rng);
    for (int j = 0; j < k; ++j) {
      pm.probabilities.push_back(unit(rng));
      pm.sensitivities.push_back(sens(rng));
    }
    MixtureGaussian rounded = discretize_pmog(pm, cfg);
    MixtureGaussian exact = oracle::brute_force_pmog(pm);
    for (Adjacency adj : {Adjacency::kRemove, Adjacency::kAdd}) {
      mmacc::DiscretePLD pld = pld_from_mog(rounded, cfg, adj);
      for (double eps : {0.0, 0.5, 1.0}) {
        CHECK(oracle::hockey_stick_numeric(exact, eps, adj) <=
              delta_for_epsilon(pld, eps) + 1e-9);
      }
    }
  }
}

TEST_CASE("binomial mixtures") {
  MixtureGaussian point = mog_from_binomial(0, 0.5, 1.0, 1.0);
  REQUIRE(point.sensitivities.size() == 1);
  CHECK(point.sensitivities[0] == 0.0);
  CHECK(point.probabilities[0] == doctest::Approx(1.0));

  MixtureGaussian coin = mog_from_binomial(2, 0.5, 1.0, 1.0);
  REQUIRE(coin.probabilities.size() == 3);
  CHECK(coin.probabilities[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(coin.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(coin.probabilities[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(coin.sensitivities[2] == doctest::Approx(2.0));

  // Log-space evaluation holds up at large trial counts.
  MixtureGaussian big = mog_from_binomial(10000, 1e-3, 1.0, 1.0);
  double total = 0.0;
  for (double w : big.probabilities) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  big.validate();
}

TEST_CASE("hypergeometric mixture matches direct evaluation") {
  // Population 5, group 2, draws 2: counts 0,1,2 with probs 3/10, 6/10, 1/10.
  MixtureGaussian mog = mmacc::mog_from_hypergeometric(5, 2, 2, 1.0, 1.0);
  REQUIRE(mog.probabilities.size() == 3);
  CHECK(mog.probabilities[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(mog.probabilities[1] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(mog.probabilities[2] == doctest::Approx(0.1).epsilon(1e-12));
}
