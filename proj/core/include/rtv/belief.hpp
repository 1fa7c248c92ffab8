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

// Markov belief over the number of true detections and the Beta-mixture
// posterior of the false-positive rate it induces.
//
// After n detections the chain sits in one of the states (n, k), k = 0..n,
// where k counts true detections. Each detection is true with probability z,
// so the belief moves (n, k) -> (n + 1, k + 1) with weight z and
// (n, k) -> (n + 1, k) with weight 1 - z. Conditioned on k, the false rate x
// has density (1 - x)^k x^(n - k) / B(1 + n - k, 1 + k), i.e. Beta(n - k + 1,
// k + 1). The posterior of x is the belief-weighted mixture of those.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rtv {

enum class ZMode {
  /// exp(-d^2 / 2 sigma^2): Gaussian kernel scaled to peak at 1.
  UnitPeak,
  /// Normal density with standard deviation sigma, clamped to [0, 1].
  LiteralDensity,
};

/// Truth probability assigned to detections that have no residual yet.
inline constexpr double kDefaultTruthProbability = 0.5;

/// Probability that a detection is true given its prediction residual.
/// A missing residual yields `z_default`. Throws NonFiniteInput for a
/// non-finite residual or sigma, InvalidArgument for sigma <= 0 or a
/// negative residual.
double truth_probability(std::optional<double> residual_norm, double sigma, ZMode mode,
                         double z_default = kDefaultTruthProbability);

/// probabilities()[k] is the probability that exactly k of the first
/// count() detections were true.
class BeliefState {
 public:
  /// n = 0, all mass on k = 0.
  BeliefState();

  /// Validating constructor; entries must lie in [0, 1] and sum to 1.
  static BeliefState from_probabilities(std::vector<double> probabilities);

  std::size_t count() const noexcept { return probs_.size() - 1; }
  std::span<const double> probabilities() const noexcept { return probs_; }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  explicit BeliefState(std::vector<double> probs) : probs_(std::move(probs)) {}
  friend BeliefState belief_update(const BeliefState& belief, double z);

  std::vector<double> probs_;
};

BeliefState belief_init();

/// One detection with truth probability z. The result is a convex
/// redistribution of the input, so no renormalization is applied.
BeliefState belief_update(const BeliefState& belief, double z);

/// Mixture density of the false-positive rate at x in [0, 1]. Components
/// are evaluated in log space so large n does not underflow.
double posterior_pdf(const BeliefState& belief, double x);

/// Pr(rate <= threshold) = sum_k p_k I_threshold(1 + n - k, 1 + k).
double confidence(const BeliefState& belief, double threshold);

double posterior_mean(const BeliefState& belief);
double posterior_variance(const BeliefState& belief);

}  // namespace rtv
