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

#include <cmath>
#include <cstdint>

namespace rtv {

/// Planar position in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// One position report from the detector under verification. `step_index`
/// counts detections from 1 and increases strictly within a stream.
struct Detection {
  std::int64_t step_index = 0;
  double time = 0.0;
  Vec2 position;

  bool finite() const { return std::isfinite(time) && position.finite(); }
  friend bool operator==(const Detection&, const Detection&) = default;
};

}  // namespace rtv
