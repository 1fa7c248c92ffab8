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

#include "rtv/monitor.hpp"

#include <cmath>
#include <json.hpp>

#include "rtv/error.hpp"

namespace rtv {

namespace {

constexpr std::array kAllReasons = {Reason::ConfidenceNotMet, Reason::ThresholdExceeded,
                                    Reason::InvalidInput};

bool in_open_unit_interval(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

void MonitorSpec::validate() const {
  if (!in_open_unit_interval(t_fp)) {
    throw Error(ErrorKind::InvalidConfig, "t_fp must lie in (0, 1)");
  }
  if (!in_open_unit_interval(c1)) {
    throw Error(ErrorKind::InvalidConfig, "c1 must lie in (0, 1)");
  }
  if (!(z_default >= 0.0 && z_default <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "z_default must lie in [0, 1]");
  }
  if (predictor_window < 2) {
    throw Error(ErrorKind::InvalidConfig, "predictor window must be at least 2");
  }
  if (gate_sigmas && !(*gate_sigmas > 0.0 && std::isfinite(*gate_sigmas))) {
    throw Error(ErrorKind::InvalidConfig, "gate must be a positive number of sigmas");
  }
  if (const auto* fixed = std::get_if<FixedSigma>(&sigma)) {
    if (!(fixed->value > 0.0 && std::isfinite(fixed->value))) {
      throw Error(ErrorKind::InvalidConfig, "fixed sigma must be positive and finite");
    }
  } else if (std::get<CalibratedSigma>(sigma).residuals < 2) {
    throw Error(ErrorKind::InvalidConfig, "sigma calibration needs at least 2 residuals");
  }
}

std::string_view to_string(Status status) noexcept {
  return status == Status::Accept ? "accept" : "violation";
}

std::string_view to_string(Reason reason) noexcept {
  switch (reason) {
    case Reason::ConfidenceNotMet: return "confidence_not_met";
    case Reason::ThresholdExceeded: return "threshold_exceeded";
    case Reason::InvalidInput: return "invalid_input";
  }
  return "unknown";
}

std::vector<Reason> ReasonSet::members() const {
  std::vector<Reason> out;
  for (Reason r : kAllReasons) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

std::string ReasonSet::joined(char separator) const {
  std::string out;
  for (Reason r : members()) {
    if (!out.empty()) out += separator;
    out += to_string(r);
  }
  return out;
}

Verdict judge(const MonitorSpec& spec, std::int64_t step_index, double confidence,
              double rate_estimate) {
  Verdict v;
  v.step_index = step_index;
  v.confidence = confidence;
  v.rate_estimate = rate_estimate;
  if (confidence < spec.c1) v.reasons.insert(Reason::ConfidenceNotMet);
  if (rate_estimate > spec.t_fp) v.reasons.insert(Reason::ThresholdExceeded);
  v.status = v.reasons.empty() ? Status::Accept : Status::Violation;
  return v;
}

void TraceBuffer::push(TraceEntry entry) {
  slots_[head_] = std::move(entry);
  head_ = (head_ + 1) % kCapacity;
  if (size_ < kCapacity) ++size_;
}

std::vector<TraceEntry> TraceBuffer::entries() const {
  std::vector<TraceEntry> out;
  out.reserve(size_);
  const std::size_t start = (head_ + kCapacity - size_) % kCapacity;
  for (std::size_t i = 0; i < size_; ++i) {
    out.push_back(slots_[(start + i) % kCapacity]);
  }
  return out;
}

MonitorEngine::MonitorEngine(MonitorSpec spec)
    : spec_((spec.validate(), std::move(spec))),
      predictor_(PredictorConfig{
          .window = spec_.predictor_window, .gate = std::nullopt, .max_coast = 3}) {
  if (const auto* fixed = std::get_if<FixedSigma>(&spec_.sigma)) {
    sigma_ = fixed->value;
    if (spec_.gate_sigmas) predictor_.set_gate(*spec_.gate_sigmas * fixed->value);
  }
}

double MonitorEngine::truth_for(const std::optional<PredictionResidual>& residual) {
  if (!sigma_ && residual) {
    const auto& cal = std::get<CalibratedSigma>(spec_.sigma);
    calibration_residuals_.push_back(residual->residual_norm);
    if (calibration_residuals_.size() >= cal.residuals) {
      try {
        sigma_ = calibrate_sigma(calibration_residuals_, cal.interpretation);
        calibration_residuals_.clear();
        if (spec_.gate_sigmas) predictor_.set_gate(*spec_.gate_sigmas * *sigma_);
      } catch (const Error& e) {
        // Zero spread so far (e.g. a noise-free straight track): keep collecting.
        if (e.kind() != ErrorKind::DegenerateCalibration) throw;
      }
    }
  }
  if (!sigma_) return spec_.z_default;
  std::optional<double> norm;
  if (residual) norm = residual->residual_norm;
  return truth_probability(norm, *sigma_, spec_.z_mode, spec_.z_default);
}

Verdict MonitorEngine::step(const Detection& detection) {
  if (!detection.finite()) {
    Verdict verdict = judge(spec_, detection.step_index, confidence(belief_, spec_.t_fp),
                            posterior_mean(belief_));
    verdict.reasons.insert(Reason::InvalidInput);
    verdict.status = Status::Violation;
    ++steps_;
    record(TraceEntry{detection, std::nullopt, std::nullopt, verdict});
    return verdict;
  }

  auto residual = predictor_.observe(detection);
  const double z = truth_for(residual);
  belief_ = belief_update(belief_, z);
  const Verdict verdict = judge(spec_, detection.step_index, confidence(belief_, spec_.t_fp),
                                posterior_mean(belief_));
  ++steps_;
  record(TraceEntry{detection, residual, z, verdict});
  return verdict;
}

void MonitorEngine::record(TraceEntry entry) {
  const Verdict verdict = entry.verdict;
  trace_.push(std::move(entry));

  if (verdict.status == Status::Accept) {
    open_event_.reset();
    return;
  }
  if (open_event_ && events_[*open_event_].reasons == verdict.reasons) {
    events_[*open_event_].snapshot = trace_.entries();
    return;
  }
  events_.push_back(OperatorEvent{verdict.step_index, verdict.reasons, trace_.entries()});
  open_event_ = events_.size() - 1;
  if (notifier_) notifier_(events_.back());
}

std::size_t MonitorEngine::flush_flagged(FlagSink& sink) {
  std::size_t written = 0;
  while (flushed_ < events_.size()) {
    sink.write_line(flagged_event_json(events_[flushed_], spec_));
    ++flushed_;
    ++written;
  }
  return written;
}

std::vector<TraceEntry> MonitorEngine::trace_window() const {
  if (trace_.empty()) throw Error(ErrorKind::EmptyTrace, "no steps processed yet");
  return trace_.entries();
}

std::string flagged_event_json(const OperatorEvent& event, const MonitorSpec& spec) {
  using json = nlohmann::ordered_json;

  json reasons = json::array();
  for (Reason r : event.reasons.members()) reasons.push_back(to_string(r));

  json trace = json::array();
  for (const auto& e : event.snapshot) {
    json item;
    item["step"] = e.detection.step_index;
    item["time"] = e.detection.time;
    item["pos"] = json::array({e.detection.position.x, e.detection.position.y});
    item["residual"] = e.residual ? json(e.residual->residual_norm) : json(nullptr);
    item["z"] = e.z ? json(*e.z) : json(nullptr);
    item["confidence"] = e.verdict.confidence;
    item["rate_estimate"] = e.verdict.rate_estimate;
    item["status"] = to_string(e.verdict.status);
    trace.push_back(std::move(item));
  }

  json out;
  out["step"] = event.step_index;
  out["reasons"] = std::move(reasons);
  out["spec"] = json{{"t_fp", spec.t_fp}, {"c1", spec.c1}};
  out["trace"] = std::move(trace);
  return out.dump();
}

}  // namespace rtv
