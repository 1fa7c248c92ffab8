// Copyright 2026 The rtv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "rtv/belief.hpp"
#include "rtv/error.hpp"

namespace rtv {
namespace {

std::vector<double> probs_of(const BeliefState& b) {
  return {b.probabilities().begin(), b.probabilities().end()};
}

BeliefState after(const std::vector<double>& zs) {
  BeliefState b = belief_init();
  for (double z : zs) b = belief_update(b, z);
  return b;
}

BeliefState random_belief(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BeliefState b;
  for (std::size_t i = 0; i < n; ++i) b = belief_update(b, u(rng));
  return b;
}

TEST(TruthProbability, Examples) {
  EXPECT_DOUBLE_EQ(truth_probability(0.0, 1.0, ZMode::UnitPeak), 1.0);
  EXPECT_NEAR(truth_probability(2.5, 2.5, ZMode::UnitPeak), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(truth_probability(0.0, 1.0, ZMode::LiteralDensity), 1.0 / std::sqrt(2 * std::numbers::pi),
              1e-15);
  EXPECT_NEAR(truth_probability(0.0, 1.0, ZMode::LiteralDensity), 0.39894, 1e-5);
}

TEST(TruthProbability, LiteralDensityIsClamped) {
  EXPECT_DOUBLE_EQ(truth_probability(0.0, 0.01, ZMode::LiteralDensity), 1.0);
}

TEST(TruthProbability, MissingResidualUsesDefault) {
  EXPECT_DOUBLE_EQ(truth_probability(std::nullopt, 1.0, ZMode::UnitPeak), 0.5);
  EXPECT_DOUBLE_EQ(truth_probability(std::nullopt, 1.0, ZMode::UnitPeak, 0.9), 0.9);
}

TEST(TruthProbability, RejectsBadSigma) {
  EXPECT_THROW(truth_probability(1.0, 0.0, ZMode::UnitPeak), Error);
  EXPECT_THROW(truth_probability(-1.0, 1.0, ZMode::UnitPeak), Error);
}

TEST(BeliefInit, SingleState) {
  const BeliefState b = belief_init();
  EXPECT_EQ(b.count(), 0u);
  EXPECT_EQ(probs_of(b), std::vector<double>{1.0});
  EXPECT_DOUBLE_EQ(posterior_mean(b), 0.5);
}

TEST(BeliefUpdate, TwoStepExample) {
  BeliefState b = belief_update(belief_init(), 0.9);
  ASSERT_EQ(b.count(), 1u);
  EXPECT_NEAR(b.probabilities()[0], 0.1, 1e-15);
  EXPECT_NEAR(b.probabilities()[1], 0.9, 1e-15);
  b = belief_update(b, 0.8);
  ASSERT_EQ(b.count(), 2u);
  EXPECT_NEAR(b.probabilities()[0], 0.02, 1e-15);
  EXPECT_NEAR(b.probabilities()[1], 0.26, 1e-15);
  EXPECT_NEAR(b.probabilities()[2], 0.72, 1e-15);
}

TEST(BeliefUpdate, CertainTrueShiftsUp) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const BeliefState b = random_belief(rng, trial);
    const BeliefState shifted = belief_update(b, 1.0);
    ASSERT_EQ(shifted.count(), b.count() + 1);
    EXPECT_EQ(shifted.probabilities()[0], 0.0);
    for (std::size_t k = 0; k <= b.count(); ++k) {
      EXPECT_EQ(shifted.probabilities()[k + 1], b.probabilities()[k]);
    }
  }
}

TEST(BeliefUpdate, IsPure) {
  const BeliefState b = after({0.3, 0.7});
  const BeliefState copy = b;
  (void)belief_update(b, 0.4);
  EXPECT_EQ(b, copy);
}

TEST(BeliefUpdate, RejectsOutOfRangeZ) {
  for (double z : {-0.1, 1.1, std::nan("")}) {
    try {
      belief_update(belief_init(), z);
      ADD_FAILURE() << z;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
  }
}

TEST(BeliefState, FromProbabilitiesValidates) {
  EXPECT_NO_THROW(BeliefState::from_probabilities({0.25, 0.75}));
  EXPECT_THROW(BeliefState::from_probabilities({}), Error);
  EXPECT_THROW(BeliefState::from_probabilities({0.5, 0.6}), Error);
  EXPECT_THROW(BeliefState::from_probabilities({-0.1, 1.1}), Error);
}

TEST(BeliefProperty, MatchesEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> zs(1 + trial % 12);
    for (double& z : zs) z = u(rng);
    const auto want = testing::enumerate_truth_counts(zs);
    const auto got = probs_of(after(zs));
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
  }
}

TEST(BeliefProperty, StaysNormalised) {
  std::mt19937_64 rng(19);
  const BeliefState b = random_belief(rng, 3000);
  const auto p = b.probabilities();
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
}

TEST(PosteriorPdf, Examples) {
  for (double x : {0.0, 0.1, 0.5, 0.99, 1.0}) {
    EXPECT_NEAR(posterior_pdf(belief_init(), x), 1.0, 1e-12);
    EXPECT_NEAR(posterior_pdf(BeliefState::from_probabilities({0.0, 1.0}), x), 2 * (1 - x), 1e-12);
  }
}

TEST(PosteriorPdf, MatchesBetaMixture) {
  std::mt19937_64 rng(23);
  const BeliefState b = random_belief(rng, 15);
  const std::size_t n = b.count();
  for (double x : {0.01, 0.2, 0.5, 0.9}) {
    double want = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      want += b.probabilities()[k] * testing::beta_density(n - k + 1.0, k + 1.0, x);
    }
    EXPECT_NEAR(posterior_pdf(b, x), want, 1e-10 * std::max(1.0, want));
  }
}

TEST(PosteriorPdf, IntegratesToOne) {
  std::mt19937_64 rng(29);
  for (std::size_t n : {0, 1, 5, 30, 100, 200}) {
    const BeliefState b = random_belief(rng, n);
    const double total = testing::integrate([&](double x) { return posterior_pdf(b, x); }, 0, 1);
    EXPECT_NEAR(total, 1.0, 1e-8) << "n=" << n;
  }
}

TEST(PosteriorPdf, RejectsOutsideUnitInterval) {
  EXPECT_THROW(posterior_pdf(belief_init(), -0.01), Error);
  EXPECT_THROW(posterior_pdf(belief_init(), 1.01), Error);
}

TEST(Confidence, Endpoints) {
  std::mt19937_64 rng(31);
  const BeliefState b = random_belief(rng, 40);
  EXPECT_DOUBLE_EQ(confidence(b, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(confidence(b, 1.0), 1.0);
}

TEST(Confidence, OneCertainTrueDetection) {
  const BeliefState b = after({1.0});
  EXPECT_NEAR(confidence(b, 0.5), 0.75, 1e-14);
}

TEST(Confidence, AllTrueClosedForm) {
  BeliefState b;
  for (int n = 1; n <= 300; ++n) {
    b = belief_update(b, 1.0);
    for (double t : {0.018, 0.1, 0.5}) {
      EXPECT_NEAR(confidence(b, t), 1 - std::pow(1 - t, n + 1), 1e-10);
    }
  }
}

TEST(Confidence, MatchesQuadratureOfPdf) {
  std::mt19937_64 rng(37);
  for (std::size_t n : {3, 20, 80}) {
    const BeliefState b = random_belief(rng, n);
    for (double t : {0.05, 0.3, 0.7}) {
      const double want = testing::integrate([&](double x) { return posterior_pdf(b, x); }, 0, t);
      EXPECT_NEAR(confidence(b, t), want, 1e-8);
    }
  }
}

TEST(Confidence, MonotoneInThreshold) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const BeliefState b = random_belief(rng, 10 * trial);
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double c = confidence(b, i / 200.0);
      EXPECT_GE(c, prev - 1e-15);
      prev = c;
    }
  }
}

TEST(PosteriorMoments, Examples) {
  EXPECT_DOUBLE_EQ(posterior_mean(belief_init()), 0.5);
  EXPECT_NEAR(posterior_mean(BeliefState::from_probabilities({0.0, 1.0})), 1.0 / 3, 1e-15);
  EXPECT_NEAR(posterior_mean(BeliefState::from_probabilities({1.0, 0.0})), 2.0 / 3, 1e-15);
  // Uniform prior: variance 1/12.
  EXPECT_NEAR(posterior_variance(belief_init()), 1.0 / 12, 1e-15);
}

TEST(PosteriorMoments, MatchQuadrature) {
  std::mt19937_64 rng(43);
  for (std::size_t n : {1, 10, 60}) {
    const BeliefState b = random_belief(rng, n);
    const auto pdf = [&](double x) { return posterior_pdf(b, x); };
    const double mean = testing::integrate([&](double x) { return x * pdf(x); }, 0, 1);
    const double second = testing::integrate([&](double x) { return x * x * pdf(x); }, 0, 1);
    EXPECT_NEAR(posterior_mean(b), mean, 1e-9);
    EXPECT_NEAR(posterior_variance(b), second - mean * mean, 1e-9);
  }
}

TEST(PosteriorMoments, ConcentrateForConstantTruthProbability) {
  for (double z : {0.99, 0.9, 0.6}) {
    BeliefState b;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 600; ++n) {
      b = belief_update(b, z);
      if (n < 50) continue;
      const double sd = std::sqrt(posterior_variance(b));
      EXPECT_LE(sd, prev) << "z=" << z << " n=" << n;
      prev = sd;
    }
  }
}

}  // namespace
}  // namespace rtv
