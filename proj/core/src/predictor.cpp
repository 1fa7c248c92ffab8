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

#include "rtv/predictor.hpp"

#include <cmath>
#include <string>

#include "rtv/error.hpp"

namespace rtv {

Predictor::Predictor(PredictorConfig config) : config_(config) {
  if (config_.window < 2) {
    throw Error(ErrorKind::InvalidConfig, "predictor window must hold at least 2 detections");
  }
  set_gate(config_.gate);
}

void Predictor::set_gate(std::optional<double> gate) {
  if (gate && !(*gate > 0.0 && std::isfinite(*gate))) {
    throw Error(ErrorKind::InvalidConfig, "predictor gate must be positive and finite");
  }
  config_.gate = gate;
}

Vec2 Predictor::predict_next(double next_time) const {
  if (window_.size() < 2) {
    throw Error(ErrorKind::InsufficientHistory,
                "prediction needs 2 detections, have " + std::to_string(window_.size()));
  }
  if (next_time < window_.back().time) {
    throw Error(ErrorKind::NonMonotoneTime, "prediction time precedes last detection");
  }

  const double count = static_cast<double>(window_.size());
  double t_mean = 0.0;
  Vec2 p_mean;
  for (const auto& d : window_) {
    t_mean += d.time;
    p_mean = p_mean + d.position;
  }
  t_mean /= count;
  p_mean = (1.0 / count) * p_mean;

  double stt = 0.0;
  Vec2 stp;
  for (const auto& d : window_) {
    const double dt = d.time - t_mean;
    stt += dt * dt;
    stp = stp + dt * (d.position - p_mean);
  }
  // All detections share one timestamp: no velocity information.
  const Vec2 velocity = stt > 0.0 ? (1.0 / stt) * stp : Vec2{};
  return p_mean + (next_time - t_mean) * velocity;
}

std::optional<PredictionResidual> Predictor::observe(const Detection& detection) {
  if (!detection.finite()) {
    throw Error(ErrorKind::NonFiniteInput, "detection " + std::to_string(detection.step_index) +
                                               " has a non-finite time or position");
  }
  if (last_step_ && detection.step_index <= *last_step_) {
    throw Error(ErrorKind::NonMonotoneStep,
                "step " + std::to_string(detection.step_index) + " does not follow step " +
                    std::to_string(*last_step_));
  }
  if (last_time_ && detection.time < *last_time_) {
    throw Error(ErrorKind::NonMonotoneTime,
                "detection " + std::to_string(detection.step_index) + " goes back in time");
  }
  last_step_ = detection.step_index;
  last_time_ = detection.time;

  if (window_.size() < 2) {
    accept(detection);
    return std::nullopt;
  }

  PredictionResidual residual;
  residual.step_index = detection.step_index;
  residual.predicted = predict_next(detection.time);
  residual.residual_norm = (residual.predicted - detection.position).norm();

  if (config_.gate && residual.residual_norm > *config_.gate) {
    residual.gated = true;
    coasted_.push_back(detection);
    if (coasted_.size() > config_.max_coast) {
      // Track lost: restart from the detections that kept missing the gate.
      window_.clear();
      for (const auto& d : coasted_) accept(d);
      coasted_.clear();
    }
    return residual;
  }

  coasted_.clear();
  accept(detection);
  return residual;
}

void Predictor::accept(const Detection& detection) {
  window_.push_back(detection);
  while (window_.size() > config_.window) window_.pop_front();
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double calibrate_sigma(std::span<const double> residuals, SigmaInterpretation interpretation) {
  if (residuals.size() < 2) {
    throw Error(ErrorKind::DegenerateCalibration, "sigma calibration needs at least 2 residuals");
  }
  for (double r : residuals) {
    if (!std::isfinite(r) || r < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "residuals must be finite and non-negative");
    }
  }
  const double sd = sample_stddev(residuals);
  if (!(sd > 0.0)) {
    throw Error(ErrorKind::DegenerateCalibration, "residuals have zero spread");
  }
  return interpretation == SigmaInterpretation::StdIsSigma ? sd : std::sqrt(sd);
}

}  // namespace rtv
