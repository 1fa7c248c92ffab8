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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rtv/belief.hpp"
#include "rtv/detection.hpp"
#include "rtv/flag_sink.hpp"
#include "rtv/predictor.hpp"

namespace rtv {

struct FixedSigma {
  double value = 1.0;
  friend bool operator==(const FixedSigma&, const FixedSigma&) = default;
};

/// Sigma is estimated from the first `residuals` prediction residuals.
/// Until then detections enter the belief with the default truth
/// probability.
struct CalibratedSigma {
  std::size_t residuals = 30;
  SigmaInterpretation interpretation = SigmaInterpretation::StdIsSigma;
  friend bool operator==(const CalibratedSigma&, const CalibratedSigma&) = default;
};

using SigmaConfig = std::variant<FixedSigma, CalibratedSigma>;

/// Pr(rate <= t_fp) >= c1, plus the knobs of the surrogate estimator.
struct MonitorSpec {
  double t_fp = 0.018;
  double c1 = 0.95;
  SigmaConfig sigma = FixedSigma{};
  ZMode z_mode = ZMode::UnitPeak;
  double z_default = kDefaultTruthProbability;
  std::size_t predictor_window = 8;
  /// Predictor validation gate in units of sigma; unset disables gating.
  std::optional<double> gate_sigmas = 3.0;

  /// Throws InvalidConfig.
  void validate() const;
  friend bool operator==(const MonitorSpec&, const MonitorSpec&) = default;
};

enum class Status { Accept, Violation };

enum class Reason : std::uint8_t {
  ConfidenceNotMet = 1 << 0,
  ThresholdExceeded = 1 << 1,
  InvalidInput = 1 << 2,
};

std::string_view to_string(Status status) noexcept;
std::string_view to_string(Reason reason) noexcept;

class ReasonSet {
 public:
  constexpr ReasonSet() = default;

  constexpr void insert(Reason r) { bits_ |= static_cast<std::uint8_t>(r); }
  constexpr bool contains(Reason r) const {
    return (bits_ & static_cast<std::uint8_t>(r)) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }

  /// Members in declaration order.
  std::vector<Reason> members() const;
  /// "a|b" style; empty string for the empty set.
  std::string joined(char separator = '|') const;

  friend constexpr bool operator==(ReasonSet, ReasonSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct Verdict {
  std::int64_t step_index = 0;
  double confidence = 0.0;
  double rate_estimate = 0.0;
  Status status = Status::Accept;
  ReasonSet reasons;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Verdict implied by a confidence and rate estimate under `spec`.
Verdict judge(const MonitorSpec& spec, std::int64_t step_index, double confidence,
              double rate_estimate);

struct TraceEntry {
  Detection detection;
  std::optional<PredictionResidual> residual;
  /// Unset for quarantined (non-finite) detections.
  std::optional<double> z;
  Verdict verdict;
};

/// Fixed-capacity ring of the most recent trace entries.
class TraceBuffer {
 public:
  static constexpr std::size_t kCapacity = 20;

  void push(TraceEntry entry);
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  /// Oldest first.
  std::vector<TraceEntry> entries() const;

 private:
  std::array<TraceEntry, kCapacity> slots_{};
  std::size_t head_ = 0;  // next slot to write
  std::size_t size_ = 0;
};

/// Raised when the monitor enters a violation or its reasons change. The
/// snapshot keeps following the trace while the episode lasts, so a
/// flushed record holds the last 20 steps of the episode seen so far.
struct OperatorEvent {
  std::int64_t step_index = 0;
  ReasonSet reasons;
  std::vector<TraceEntry> snapshot;
};

/// Streaming monitor for one detection stream.
///
/// Each step runs predictor -> truth probability -> belief update ->
/// confidence and posterior mean -> verdict, then records the step in the
/// trace. The engine only reads detections; nothing flows back to the
/// source.
class MonitorEngine {
 public:
  using Notifier = std::function<void(const OperatorEvent&)>;

  explicit MonitorEngine(MonitorSpec spec);

  /// Processes one detection. Non-finite detections are quarantined: they
  /// produce a Violation carrying Reason::InvalidInput and leave the belief
  /// untouched. Step or time regressions throw.
  Verdict step(const Detection& detection);

  /// Writes pending operator events as JSON lines. Each event is written at
  /// most once. Returns the number written.
  std::size_t flush_flagged(FlagSink& sink);

  /// Oldest first. Throws EmptyTrace before the first step.
  std::vector<TraceEntry> trace_window() const;

  /// Called synchronously whenever a new operator event is raised.
  void set_notifier(Notifier notifier) { notifier_ = std::move(notifier); }

  const MonitorSpec& spec() const noexcept { return spec_; }
  const BeliefState& belief() const noexcept { return belief_; }
  const std::vector<OperatorEvent>& events() const noexcept { return events_; }
  /// Unset while sigma is still being calibrated.
  std::optional<double> sigma() const noexcept { return sigma_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  double truth_for(const std::optional<PredictionResidual>& residual);
  void record(TraceEntry entry);

  MonitorSpec spec_;
  Predictor predictor_;
  BeliefState belief_;
  std::optional<double> sigma_;
  std::vector<double> calibration_residuals_;
  TraceBuffer trace_;
  std::vector<OperatorEvent> events_;
  std::optional<std::size_t> open_event_;
  std::size_t flushed_ = 0;
  std::size_t steps_ = 0;
  Notifier notifier_;
};

/// One flagged-event record in its external JSON-lines form (no newline).
std::string flagged_event_json(const OperatorEvent& event, const MonitorSpec& spec);

}  // namespace rtv
