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
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rtv/detection.hpp"

namespace rtv {

enum class TrajectoryKind { Line, Arc, Spline };
std::string_view to_string(TrajectoryKind kind) noexcept;
/// Throws InvalidConfig for unknown names.
TrajectoryKind parse_trajectory_kind(std::string_view name);

struct TrajectoryConfig {
  TrajectoryKind kind = TrajectoryKind::Spline;
  /// Nominal ground speed, m/s.
  double speed = 10.0;
  /// Per-axis Gaussian observation noise, m.
  double noise_std = 0.01;
  /// Detection interval, s.
  double dt = 0.1;
};

struct ScenarioConfig {
  std::size_t n_total = 1000;
  std::size_t n_false = 8;
  std::uint64_t seed = 42;
  TrajectoryConfig trajectory;
  /// Displacement of an injected false detection, m.
  double perturbation_magnitude = 20.0;
  /// Leading detections that are never perturbed, so the track can form.
  std::size_t warmup = 10;

  /// Throws InvalidConfig.
  void validate() const;
};

enum class Label : std::uint8_t { True, False };

struct LabeledStream {
  std::vector<Detection> detections;
  std::vector<Label> labels;
  /// Positions before noise and perturbation.
  std::vector<Vec2> clean_positions;

  std::size_t size() const noexcept { return detections.size(); }
  std::size_t false_count() const;
  friend bool operator==(const LabeledStream&, const LabeledStream&) = default;
};

/// Smooth trajectory plus Gaussian noise, with `n_false` detections after
/// the warm-up displaced by `perturbation_magnitude` in a random direction.
/// Bit-identical output for identical configs.
LabeledStream generate(const ScenarioConfig& config);

/// Sample standard deviation of |detection - clean position| over the whole
/// stream. Needs ground truth with at least one injected perturbation;
/// throws DegenerateCalibration otherwise or when the spread is zero.
double sigma_oracle(const LabeledStream& stream);

/// CSV with header step,time,x,y,label,clean_x,clean_y; label is
/// true/false. Doubles are written in shortest round-trip form.
void write_stream_csv(std::ostream& out, const LabeledStream& stream);
/// Throws ParseError with the offending line number.
LabeledStream read_stream_csv(std::istream& in);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace rtv
