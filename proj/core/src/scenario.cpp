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

#include "rtv/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "rtv/error.hpp"
#include "rtv/predictor.hpp"

namespace rtv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::string_view kCsvHeader = "step,time,x,y,label,clean_x,clean_y";

// Sampled path, one point per detection.
std::vector<Vec2> clean_path(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const auto& traj = cfg.trajectory;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double heading = kTwoPi * unit(rng);
  const Vec2 dir{std::cos(heading), std::sin(heading)};
  const Vec2 normal{-dir.y, dir.x};

  std::vector<Vec2> path(cfg.n_total);
  const double duration = static_cast<double>(cfg.n_total - 1) * traj.dt;

  switch (traj.kind) {
    case TrajectoryKind::Line: {
      for (std::size_t i = 0; i < cfg.n_total; ++i) {
        path[i] = (traj.speed * static_cast<double>(i) * traj.dt) * dir;
      }
      break;
    }
    case TrajectoryKind::Arc: {
      // Constant speed on a circle of radius speed / turn_rate (500 m..2 km at 10 m/s).
      const double magnitude = 0.005 + 0.015 * unit(rng);
      const double turn_rate = unit(rng) < 0.5 ? -magnitude : magnitude;
      const double radius = traj.speed / turn_rate;
      for (std::size_t i = 0; i < cfg.n_total; ++i) {
        const double angle = heading + turn_rate * static_cast<double>(i) * traj.dt;
        path[i] = {radius * (std::sin(angle) - std::sin(heading)),
                   radius * (std::cos(heading) - std::cos(angle))};
      }
      break;
    }
    case TrajectoryKind::Spline: {
      // Single cubic Bezier segment with seeded lateral control points.
      const double length = traj.speed * duration;
      const Vec2 p0{};
      const Vec2 p1 = (length / 3.0) * dir + ((unit(rng) - 0.5) * 0.6 * length) * normal;
      const Vec2 p2 = (2.0 * length / 3.0) * dir + ((unit(rng) - 0.5) * 0.6 * length) * normal;
      const Vec2 p3 = length * dir;
      for (std::size_t i = 0; i < cfg.n_total; ++i) {
        const double u = cfg.n_total > 1
                             ? static_cast<double>(i) / static_cast<double>(cfg.n_total - 1)
                             : 0.0;
        const double v = 1.0 - u;
        path[i] = (v * v * v) * p0 + (3.0 * v * v * u) * p1 + (3.0 * v * u * u) * p2 +
                  (u * u * u) * p3;
      }
      break;
    }
  }
  return path;
}

[[noreturn]] void csv_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "stream CSV line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* name) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    csv_fail(line, std::string("bad ") + name + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(TrajectoryKind kind) noexcept {
  switch (kind) {
    case TrajectoryKind::Line: return "line";
    case TrajectoryKind::Arc: return "arc";
    case TrajectoryKind::Spline: return "spline";
  }
  return "unknown";
}

TrajectoryKind parse_trajectory_kind(std::string_view name) {
  if (name == "line") return TrajectoryKind::Line;
  if (name == "arc") return TrajectoryKind::Arc;
  if (name == "spline") return TrajectoryKind::Spline;
  throw Error(ErrorKind::InvalidConfig, "unknown trajectory kind '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
  if (n_total == 0) throw Error(ErrorKind::InvalidConfig, "n_total must be positive");
  if (n_false > n_total) throw Error(ErrorKind::InvalidConfig, "n_false exceeds n_total");
  const std::size_t eligible = n_total - std::min(warmup, n_total);
  if (n_false > eligible) {
    throw Error(ErrorKind::InvalidConfig, "n_false exceeds the detections after warm-up");
  }
  const auto& t = trajectory;
  if (!(t.noise_std >= 0.0) || !std::isfinite(t.noise_std)) {
    throw Error(ErrorKind::InvalidConfig, "noise_std must be finite and non-negative");
  }
  if (!(t.speed >= 0.0) || !std::isfinite(t.speed)) {
    throw Error(ErrorKind::InvalidConfig, "speed must be finite and non-negative");
  }
  if (!(t.dt > 0.0) || !std::isfinite(t.dt)) {
    throw Error(ErrorKind::InvalidConfig, "dt must be positive");
  }
  if (n_false > 0 && !(perturbation_magnitude > 0.0 && std::isfinite(perturbation_magnitude))) {
    throw Error(ErrorKind::InvalidConfig, "perturbation_magnitude must be positive");
  }
}

std::size_t LabeledStream::false_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::False));
}

LabeledStream generate(const ScenarioConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  LabeledStream stream;
  stream.clean_positions = clean_path(config, rng);
  stream.detections.resize(config.n_total);
  stream.labels.assign(config.n_total, Label::True);

  const double noise = config.trajectory.noise_std;
  std::normal_distribution<double> gauss(0.0, noise > 0.0 ? noise : 1.0);
  for (std::size_t i = 0; i < config.n_total; ++i) {
    Vec2 p = stream.clean_positions[i];
    if (noise > 0.0) {
      const double ex = gauss(rng);
      const double ey = gauss(rng);
      p = p + Vec2{ex, ey};
    }
    stream.detections[i] = Detection{static_cast<std::int64_t>(i + 1),
                                     static_cast<double>(i) * config.trajectory.dt, p};
  }

  std::vector<std::size_t> candidates(config.n_total - std::min(config.warmup, config.n_total));
  std::iota(candidates.begin(), candidates.end(), config.warmup);
  std::vector<std::size_t> injected;
  injected.reserve(config.n_false);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(injected), config.n_false,
              rng);

  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::size_t idx : injected) {
    const double a = angle(rng);
    auto& pos = stream.detections[idx].position;
    pos = pos + config.perturbation_magnitude * Vec2{std::cos(a), std::sin(a)};
    stream.labels[idx] = Label::False;
  }
  return stream;
}

double sigma_oracle(const LabeledStream& stream) {
  if (stream.clean_positions.size() != stream.size() || stream.labels.size() != stream.size()) {
    throw Error(ErrorKind::DegenerateCalibration, "stream carries no ground truth");
  }
  if (stream.false_count() == 0) {
    throw Error(ErrorKind::DegenerateCalibration, "stream has no injected perturbation");
  }
  std::vector<double> diffs;
  diffs.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    diffs.push_back((stream.detections[i].position - stream.clean_positions[i]).norm());
  }
  const double sd = sample_stddev(diffs);
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw Error(ErrorKind::DegenerateCalibration, "detections match ground truth exactly");
  }
  return sd;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_stream_csv(std::ostream& out, const LabeledStream& stream) {
  out << kCsvHeader << '\n';
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& d = stream.detections[i];
    const auto& c = stream.clean_positions[i];
    out << d.step_index << ',' << format_double(d.time) << ',' << format_double(d.position.x)
        << ',' << format_double(d.position.y) << ','
        << (stream.labels[i] == Label::True ? "true" : "false") << ',' << format_double(c.x)
        << ',' << format_double(c.y) << '\n';
  }
}

LabeledStream read_stream_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) csv_fail(1, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) csv_fail(1, "expected header '" + std::string(kCsvHeader) + "'");

  LabeledStream stream;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 7) csv_fail(line_no, "expected 7 fields");

    Detection d;
    d.step_index = parse_field<std::int64_t>(fields[0], line_no, "step");
    d.time = parse_field<double>(fields[1], line_no, "time");
    d.position.x = parse_field<double>(fields[2], line_no, "x");
    d.position.y = parse_field<double>(fields[3], line_no, "y");
    Label label;
    if (fields[4] == "true") {
      label = Label::True;
    } else if (fields[4] == "false") {
      label = Label::False;
    } else {
      csv_fail(line_no, "label must be true or false");
    }
    const Vec2 clean{parse_field<double>(fields[5], line_no, "clean_x"),
                     parse_field<double>(fields[6], line_no, "clean_y")};
    stream.detections.push_back(d);
    stream.labels.push_back(label);
    stream.clean_positions.push_back(clean);
  }
  return stream;
}

}  // namespace rtv
