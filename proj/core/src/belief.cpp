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

#include "rtv/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "rtv/error.hpp"
#include "rtv/special_functions.hpp"

namespace rtv {

namespace {

// Mixture components lighter than this are skipped when summing CDFs; the
// total dropped mass stays below (n + 1) * 1e-17.
constexpr double kNegligibleWeight = 1e-17;

// count * log_value with 0 * log(0) := 0.
double times_log(double count, double log_value) {
  return count == 0.0 ? 0.0 : count * log_value;
}

}  // namespace

double truth_probability(std::optional<double> residual_norm, double sigma, ZMode mode,
                         double z_default) {
  if (!std::isfinite(sigma)) {
    throw Error(ErrorKind::NonFiniteInput, "sigma is not finite");
  }
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  }
  if (!residual_norm) {
    if (!(z_default >= 0.0 && z_default <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "default truth probability outside [0, 1]");
    }
    return z_default;
  }
  const double delta = *residual_norm;
  if (!std::isfinite(delta)) {
    throw Error(ErrorKind::NonFiniteInput, "residual is not finite");
  }
  if (delta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "residual norm is negative");
  }

  const double kernel = std::exp(-(delta * delta) / (2.0 * sigma * sigma));
  if (mode == ZMode::UnitPeak) return kernel;
  const double density = kernel / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return std::min(density, 1.0);
}

BeliefState::BeliefState() : probs_{1.0} {}

BeliefState BeliefState::from_probabilities(std::vector<double> probabilities) {
  if (probabilities.empty()) {
    throw Error(ErrorKind::InvalidArgument, "belief needs at least one state");
  }
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "belief entries must lie in [0, 1]");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "belief entries must sum to 1");
  }
  return BeliefState(std::move(probabilities));
}

BeliefState belief_init() { return BeliefState(); }

BeliefState belief_update(const BeliefState& belief, double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "truth probability outside [0, 1]");
  }
  const auto& prev = belief.probs_;
  const std::size_t n = prev.size() - 1;
  std::vector<double> next(n + 2);
  const double miss = 1.0 - z;
  next[0] = miss * prev[0];
  for (std::size_t k = 1; k <= n; ++k) {
    next[k] = z * prev[k - 1] + miss * prev[k];
  }
  next[n + 1] = z * prev[n];
  return BeliefState(std::move(next));
}

double posterior_pdf(const BeliefState& belief, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "posterior_pdf needs 0 <= x <= 1");
  }
  const auto probs = belief.probabilities();
  const auto n = static_cast<double>(belief.count());
  const double log_x = std::log(x);
  const double log_1mx = std::log1p(-x);
  double sum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] == 0.0) continue;
    const double kd = static_cast<double>(k);
    const double false_count = n - kd;
    double log_term = std::log(probs[k]) - math::log_beta(1.0 + false_count, 1.0 + kd);
    log_term += times_log(kd, log_1mx) + times_log(false_count, log_x);
    sum += std::exp(log_term);
  }
  return sum;
}

double confidence(const BeliefState& belief, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "confidence threshold must lie in [0, 1]");
  }
  const auto probs = belief.probabilities();
  const auto n = static_cast<double>(belief.count());
  double sum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] < kNegligibleWeight) continue;
    const double kd = static_cast<double>(k);
    sum += probs[k] * math::regularized_incomplete_beta(1.0 + n - kd, 1.0 + kd, threshold);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double posterior_mean(const BeliefState& belief) {
  const auto probs = belief.probabilities();
  const auto n = static_cast<double>(belief.count());
  double mean = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    mean += probs[k] * (n - static_cast<double>(k) + 1.0);
  }
  return mean / (n + 2.0);
}

double posterior_variance(const BeliefState& belief) {
  // Component k is Beta(a, n + 2 - a) with a = n - k + 1, so
  // E[x^2 | k] = a (a + 1) / ((n + 2)(n + 3)).
  const auto probs = belief.probabilities();
  const auto n = static_cast<double>(belief.count());
  double first = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double a = n - static_cast<double>(k) + 1.0;
    first += probs[k] * a;
    second += probs[k] * a * (a + 1.0);
  }
  const double mean = first / (n + 2.0);
  const double variance = second / ((n + 2.0) * (n + 3.0)) - mean * mean;
  return std::max(variance, 0.0);
}

}  // namespace rtv
