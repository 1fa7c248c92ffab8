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

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "rtv/detection.hpp"

namespace rtv {

/// Distance between where the track predicted the target and where the
/// detector reported it.
struct PredictionResidual {
  std::int64_t step_index = 0;
  Vec2 predicted;
  double residual_norm = 0.0;
  /// The detection fell outside the validation gate and was not used to
  /// update the track.
  bool gated = false;
};

struct PredictorConfig {
  /// Number of most recent accepted detections used for the line fit.
  std::size_t window = 8;
  /// Validation gate on the residual norm (meters). Unset disables gating.
  std::optional<double> gate;
  /// Consecutive gated detections tolerated before the track is
  /// re-initialised from them.
  std::size_t max_coast = 3;
};

/// Constant-velocity track predictor.
///
/// Position is extrapolated from an ordinary least-squares line fitted
/// independently to x(t) and y(t) over a sliding window of detections. With
/// a gate configured, detections whose residual exceeds it are reported but
/// kept out of the window, so a single outlier does not bend the next few
/// predictions. A run of more than `max_coast` gated detections is taken as
/// a genuine manoeuvre and the window restarts from those detections.
class Predictor {
 public:
  explicit Predictor(PredictorConfig config = {});

  /// Extrapolated position at `next_time`.
  /// Throws InsufficientHistory with fewer than two detections in the
  /// window, NonMonotoneTime if `next_time` precedes the last detection.
  Vec2 predict_next(double next_time) const;

  /// Feeds one detection. Returns the residual against the prediction made
  /// from earlier detections, or nothing while fewer than two detections
  /// have been accepted.
  std::optional<PredictionResidual> observe(const Detection& detection);

  void set_gate(std::optional<double> gate);
  const PredictorConfig& config() const noexcept { return config_; }

  /// Accepted detections, oldest first.
  const std::deque<Detection>& window() const noexcept { return window_; }
  std::optional<std::int64_t> last_step() const noexcept { return last_step_; }

 private:
  void accept(const Detection& detection);

  PredictorConfig config_;
  std::deque<Detection> window_;
  std::vector<Detection> coasted_;
  std::optional<std::int64_t> last_step_;
  std::optional<double> last_time_;
};

enum class SigmaInterpretation {
  /// The residual standard deviation is used as sigma.
  StdIsSigma,
  /// The residual standard deviation is used as sigma squared.
  StdIsVariance,
};

/// Sample standard deviation (divisor n - 1).
double sample_stddev(std::span<const double> values);

/// Estimates the Gaussian smoothness scale from observed residual norms.
/// Throws DegenerateCalibration with fewer than two residuals or zero spread.
double calibrate_sigma(std::span<const double> residuals,
                       SigmaInterpretation interpretation = SigmaInterpretation::StdIsSigma);

}  // namespace rtv
