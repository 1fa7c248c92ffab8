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
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rtv/descriptor.hpp"
#include "rtv/monitor.hpp"
#include "rtv/scenario.hpp"

namespace rtv {

struct StepRecord {
  std::int64_t n = 0;
  double confidence = 0.0;
  double rate_estimate = 0.0;
  Status status = Status::Accept;
  ReasonSet reasons;
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct RunSummary {
  /// Smallest n from which every verdict is Accept; unset if the run ends
  /// in violation.
  std::optional<std::int64_t> first_stable_accept_n;
  std::size_t total_violations = 0;
  double final_rate_estimate = 0.0;
  std::size_t steps = 0;
  std::optional<double> sigma;
};

/// Posterior density samples at one detection count.
struct PosteriorCheckpoint {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double confidence = 0.0;
  std::vector<std::pair<double, double>> samples;  // (x, pdf)
};

struct RunOptions {
  std::vector<std::int64_t> checkpoints = {100, 300, 600, 1000};
  std::size_t pdf_points = 501;
  double pdf_max_x = 0.05;
};

struct RunReport {
  MonitorSpec spec;
  std::vector<StepRecord> steps;
  RunSummary summary;
  std::vector<PosteriorCheckpoint> checkpoints;
  /// Flagged-event records, JSON lines without newlines.
  std::vector<std::string> flagged;
};

/// First specification bound to the Markov false-positive-rate estimator.
/// Throws the descriptor validation errors, or UnsupportedStrategy when no
/// specification uses that estimator.
MarkovBinding select_markov_binding(const MonitorDescriptor& descriptor);

/// Replaces an oracle sigma with sigma_oracle(stream).
MonitorSpec resolve_spec(const MarkovBinding& binding, const LabeledStream& stream);

RunReport run_monitor(const LabeledStream& stream, const MonitorSpec& spec,
                      const RunOptions& options = {});

struct ShadowSummary {
  std::size_t steps = 0;
  std::size_t divergent_steps = 0;
  std::size_t status_divergences = 0;
  std::size_t reason_only_divergences = 0;
};

/// Stable configuration A and candidate B run side by side on the same
/// stream. B only observes; its verdicts are compared, never fed back.
struct ShadowReport {
  RunReport a;
  RunReport b;
  std::vector<std::int64_t> divergences;
  ShadowSummary summary;
};

/// Runs both engines concurrently, each owning its own state, and joins.
ShadowReport shadow_compare(const LabeledStream& stream, const MonitorSpec& a,
                            const MonitorSpec& b, const RunOptions& options = {});

void write_steps_csv(std::ostream& out, const RunReport& report);
void write_posterior_csv(std::ostream& out, const RunReport& report);
std::string summary_json(const RunReport& report);
void write_shadow_csv(std::ostream& out, const ShadowReport& report);
std::string shadow_summary_json(const ShadowReport& report);

/// steps.csv, summary.json, posterior.csv and flagged.jsonl under `dir`.
void write_run_outputs(const std::filesystem::path& dir, const RunReport& report);
/// a/ and b/ run outputs plus shadow.csv and shadow_summary.json.
void write_shadow_outputs(const std::filesystem::path& dir, const ShadowReport& report);

}  // namespace rtv
