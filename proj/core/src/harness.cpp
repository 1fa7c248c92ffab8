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

#include "rtv/harness.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <json.hpp>

#include "rtv/error.hpp"

namespace rtv {

namespace {

using json = nlohmann::ordered_json;

std::string_view z_mode_name(ZMode mode) {
  return mode == ZMode::UnitPeak ? "unit_peak" : "literal_density";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to " + path.string() + " failed");
}

PosteriorCheckpoint checkpoint_at(const MonitorEngine& engine, std::int64_t n,
                                  const RunOptions& options) {
  const BeliefState& belief = engine.belief();
  PosteriorCheckpoint cp;
  cp.n = n;
  cp.mean = posterior_mean(belief);
  cp.variance = posterior_variance(belief);
  cp.confidence = confidence(belief, engine.spec().t_fp);
  const std::size_t points = std::max<std::size_t>(options.pdf_points, 2);
  cp.samples.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = options.pdf_max_x * static_cast<double>(i) / static_cast<double>(points - 1);
    cp.samples.emplace_back(x, posterior_pdf(belief, x));
  }
  return cp;
}

}  // namespace

MarkovBinding select_markov_binding(const MonitorDescriptor& descriptor) {
  const StrategyAssignment assignment = validate_descriptor(descriptor);
  for (auto& binding : bind_monitor(descriptor, assignment)) {
    if (auto* markov = std::get_if<MarkovBinding>(&binding)) return std::move(*markov);
  }
  throw Error(ErrorKind::UnsupportedStrategy,
              "no specification is monitored by the fp_rate_markov estimator");
}

MonitorSpec resolve_spec(const MarkovBinding& binding, const LabeledStream& stream) {
  MonitorSpec spec = binding.spec;
  if (binding.sigma_from_oracle) spec.sigma = FixedSigma{sigma_oracle(stream)};
  spec.validate();
  return spec;
}

RunReport run_monitor(const LabeledStream& stream, const MonitorSpec& spec,
                      const RunOptions& options) {
  MonitorEngine engine(spec);
  RunReport report;
  report.spec = spec;
  report.steps.reserve(stream.size());

  for (const auto& detection : stream.detections) {
    const Verdict v = engine.step(detection);
    report.steps.push_back(StepRecord{v.step_index, v.confidence, v.rate_estimate, v.status,
                                      v.reasons});
    if (std::find(options.checkpoints.begin(), options.checkpoints.end(), v.step_index) !=
        options.checkpoints.end()) {
      report.checkpoints.push_back(checkpoint_at(engine, v.step_index, options));
    }
  }

  MemoryFlagSink sink;
  engine.flush_flagged(sink);
  report.flagged = sink.lines();

  RunSummary& s = report.summary;
  s.steps = report.steps.size();
  s.sigma = engine.sigma();
  for (const auto& r : report.steps) {
    if (r.status == Status::Violation) ++s.total_violations;
  }
  if (!report.steps.empty()) {
    s.final_rate_estimate = report.steps.back().rate_estimate;
    auto last_violation = std::find_if(report.steps.rbegin(), report.steps.rend(),
                                       [](const StepRecord& r) {
                                         return r.status == Status::Violation;
                                       });
    if (last_violation == report.steps.rend()) {
      s.first_stable_accept_n = report.steps.front().n;
    } else if (last_violation != report.steps.rbegin()) {
      s.first_stable_accept_n = std::prev(last_violation)->n;
    }
  }
  return report;
}

ShadowReport shadow_compare(const LabeledStream& stream, const MonitorSpec& a,
                            const MonitorSpec& b, const RunOptions& options) {
  auto candidate = std::async(std::launch::async,
                              [&stream, &b, &options] { return run_monitor(stream, b, options); });
  ShadowReport report;
  report.a = run_monitor(stream, a, options);
  report.b = candidate.get();

  ShadowSummary& s = report.summary;
  s.steps = report.a.steps.size();
  for (std::size_t i = 0; i < report.a.steps.size(); ++i) {
    const StepRecord& ra = report.a.steps[i];
    const StepRecord& rb = report.b.steps[i];
    if (ra.status != rb.status) {
      ++s.status_divergences;
    } else if (ra.reasons != rb.reasons) {
      ++s.reason_only_divergences;
    } else {
      continue;
    }
    report.divergences.push_back(ra.n);
  }
  s.divergent_steps = report.divergences.size();
  return report;
}

void write_steps_csv(std::ostream& out, const RunReport& report) {
  out << "n,confidence,rate_estimate,status,reasons\n";
  for (const auto& r : report.steps) {
    out << r.n << ',' << format_double(r.confidence) << ',' << format_double(r.rate_estimate)
        << ',' << to_string(r.status) << ',' << r.reasons.joined() << '\n';
  }
}

void write_posterior_csv(std::ostream& out, const RunReport& report) {
  out << "n,x,pdf\n";
  for (const auto& cp : report.checkpoints) {
    for (const auto& [x, pdf] : cp.samples) {
      out << cp.n << ',' << format_double(x) << ',' << format_double(pdf) << '\n';
    }
  }
}

std::string summary_json(const RunReport& report) {
  const auto& s = report.summary;
  json out;
  out["spec"] = json{{"t_fp", report.spec.t_fp},
                     {"c1", report.spec.c1},
                     {"z_mode", z_mode_name(report.spec.z_mode)}};
  out["sigma"] = s.sigma ? json(*s.sigma) : json(nullptr);
  out["steps"] = s.steps;
  out["first_stable_accept_n"] =
      s.first_stable_accept_n ? json(*s.first_stable_accept_n) : json(nullptr);
  out["total_violations"] = s.total_violations;
  out["final_rate_estimate"] = s.final_rate_estimate;
  out["flagged_events"] = report.flagged.size();
  json checkpoints = json::array();
  for (const auto& cp : report.checkpoints) {
    checkpoints.push_back(json{{"n", cp.n},
                               {"mean", cp.mean},
                               {"variance", cp.variance},
                               {"confidence", cp.confidence}});
  }
  out["checkpoints"] = std::move(checkpoints);
  return out.dump(2) + "\n";
}

void write_shadow_csv(std::ostream& out, const ShadowReport& report) {
  out << "n,a_status,a_reasons,b_status,b_reasons,diverged\n";
  for (std::size_t i = 0; i < report.a.steps.size(); ++i) {
    const auto& ra = report.a.steps[i];
    const auto& rb = report.b.steps[i];
    const bool diverged = ra.status != rb.status || ra.reasons != rb.reasons;
    out << ra.n << ',' << to_string(ra.status) << ',' << ra.reasons.joined() << ','
        << to_string(rb.status) << ',' << rb.reasons.joined() << ',' << (diverged ? 1 : 0)
        << '\n';
  }
}

std::string shadow_summary_json(const ShadowReport& report) {
  const auto& s = report.summary;
  json out;
  out["steps"] = s.steps;
  out["divergent_steps"] = s.divergent_steps;
  out["status_divergences"] = s.status_divergences;
  out["reason_only_divergences"] = s.reason_only_divergences;
  out["divergences"] = report.divergences;
  return out.dump(2) + "\n";
}

void write_run_outputs(const std::filesystem::path& dir, const RunReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

  const auto steps_path = dir / "steps.csv";
  auto steps = open_output(steps_path);
  write_steps_csv(steps, report);
  finish(steps, steps_path);

  const auto posterior_path = dir / "posterior.csv";
  auto posterior = open_output(posterior_path);
  write_posterior_csv(posterior, report);
  finish(posterior, posterior_path);

  const auto summary_path = dir / "summary.json";
  auto summary = open_output(summary_path);
  summary << summary_json(report);
  finish(summary, summary_path);

  FileFlagSink flags(dir / "flagged.jsonl");
  for (const auto& line : report.flagged) flags.write_line(line);
}

void write_shadow_outputs(const std::filesystem::path& dir, const ShadowReport& report) {
  write_run_outputs(dir / "a", report.a);
  write_run_outputs(dir / "b", report.b);

  const auto csv_path = dir / "shadow.csv";
  auto csv = open_output(csv_path);
  write_shadow_csv(csv, report);
  finish(csv, csv_path);

  const auto summary_path = dir / "shadow_summary.json";
  auto summary = open_output(summary_path);
  summary << shadow_summary_json(report);
  finish(summary, summary_path);
}

}  // namespace rtv
