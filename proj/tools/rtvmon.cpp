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

// rtvmon: command-line front end for the false-positive-rate monitor.
//
// Exit codes: 0 success, 1 a monitored condition is flagged (run ends in
// violation, or shadow configurations diverge), 2 usage, parse or
// validation error.

#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rtv/descriptor.hpp"
#include "rtv/error.hpp"
#include "rtv/harness.hpp"
#include "rtv/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFlagged = 1;
constexpr int kExitUsage = 2;

struct StreamArgs {
  std::string scenario_path;
  rtv::ScenarioConfig config;
  std::string trajectory = "spline";
};

void add_stream_options(CLI::App& cmd, StreamArgs& args, bool allow_file) {
  if (allow_file) {
    cmd.add_option("--scenario", args.scenario_path,
                   "Read the stream from a CSV written by 'generate' instead of generating it")
        ->check(CLI::ExistingFile);
  }
  auto& cfg = args.config;
  cmd.add_option("--seed", cfg.seed, "Scenario seed")->capture_default_str();
  cmd.add_option("--n-total", cfg.n_total, "Number of detections")->capture_default_str();
  cmd.add_option("--n-false", cfg.n_false, "Number of injected false detections")
      ->capture_default_str();
  cmd.add_option("--trajectory", args.trajectory, "line, arc or spline")->capture_default_str();
  cmd.add_option("--speed", cfg.trajectory.speed, "Target speed, m/s")->capture_default_str();
  cmd.add_option("--noise-std", cfg.trajectory.noise_std, "Observation noise per axis, m")
      ->capture_default_str();
  cmd.add_option("--dt", cfg.trajectory.dt, "Detection interval, s")->capture_default_str();
  cmd.add_option("--perturbation", cfg.perturbation_magnitude,
                 "Displacement of injected false detections, m")
      ->capture_default_str();
}

rtv::LabeledStream load_stream(StreamArgs& args) {
  if (!args.scenario_path.empty()) {
    std::ifstream in(args.scenario_path);
    if (!in) throw rtv::Error(rtv::ErrorKind::IoError, "cannot open " + args.scenario_path);
    return rtv::read_stream_csv(in);
  }
  args.config.trajectory.kind = rtv::parse_trajectory_kind(args.trajectory);
  return rtv::generate(args.config);
}

struct SpecOverrides {
  std::optional<double> t_fp;
  std::optional<double> c1;
  std::optional<std::string> z_mode;
  std::optional<std::string> sigma;
};

void add_spec_overrides(CLI::App& cmd, SpecOverrides& o) {
  cmd.add_option("--t-fp", o.t_fp, "Override the maximum false-positive rate");
  cmd.add_option("--c1", o.c1, "Override the minimum confidence level");
  cmd.add_option("--z-mode", o.z_mode, "Override the truth-probability model")
      ->check(CLI::IsMember({"unit_peak", "literal_density"}));
  cmd.add_option("--sigma", o.sigma, "Override sigma: a number, 'oracle' or 'calibrate'");
}

void apply_overrides(rtv::MarkovBinding& binding, const SpecOverrides& o) {
  auto& spec = binding.spec;
  if (o.t_fp) spec.t_fp = *o.t_fp;
  if (o.c1) spec.c1 = *o.c1;
  if (o.z_mode) {
    spec.z_mode = *o.z_mode == "unit_peak" ? rtv::ZMode::UnitPeak : rtv::ZMode::LiteralDensity;
  }
  if (o.sigma) {
    const std::string& s = *o.sigma;
    if (s == "oracle") {
      binding.sigma_from_oracle = true;
    } else if (s == "calibrate") {
      binding.sigma_from_oracle = false;
      spec.sigma = rtv::CalibratedSigma{};
    } else {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw rtv::Error(rtv::ErrorKind::InvalidConfig, "bad --sigma '" + s + "'");
      }
      binding.sigma_from_oracle = false;
      spec.sigma = rtv::FixedSigma{value};
    }
  }
  spec.validate();
}

rtv::MarkovBinding binding_from(const std::string& path, const SpecOverrides& overrides) {
  auto binding = rtv::select_markov_binding(rtv::load_descriptor(path));
  apply_overrides(binding, overrides);
  return binding;
}

void print_summary(const rtv::RunReport& report, const char* label) {
  const auto& s = report.summary;
  std::cout << label << "steps=" << s.steps << " violations=" << s.total_violations
            << " final_rate_estimate=" << rtv::format_double(s.final_rate_estimate)
            << " first_stable_accept_n=";
  if (s.first_stable_accept_n) {
    std::cout << *s.first_stable_accept_n;
  } else {
    std::cout << "none";
  }
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run-time monitor for detector false-positive rates"};
  app.require_subcommand(1);

  // generate
  StreamArgs gen_args;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a labeled synthetic detection stream as CSV");
  add_stream_options(*gen, gen_args, false);
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  // run
  StreamArgs run_args;
  SpecOverrides run_overrides;
  std::string run_descriptor;
  std::string run_out;
  rtv::RunOptions run_options;
  auto* run = app.add_subcommand("run", "Monitor one stream and write the per-step report");
  add_stream_options(*run, run_args, true);
  run->add_option("--descriptor", run_descriptor, "Monitor descriptor (JSON)")->required();
  add_spec_overrides(*run, run_overrides);
  run->add_option("--checkpoints", run_options.checkpoints,
                  "Detection counts at which posterior pdf samples are written")
      ->delimiter(',');
  run->add_option("--out", run_out, "Output directory")->required();

  // shadow
  StreamArgs shadow_args;
  std::string descriptor_a;
  std::string descriptor_b;
  std::string shadow_out;
  rtv::RunOptions shadow_options;
  auto* shadow = app.add_subcommand(
      "shadow", "Run a candidate monitor configuration in the shadow of the stable one");
  add_stream_options(*shadow, shadow_args, true);
  shadow->add_option("--descriptor-a", descriptor_a, "Stable configuration")->required();
  shadow->add_option("--descriptor-b", descriptor_b, "Candidate configuration")->required();
  shadow->add_option("--checkpoints", shadow_options.checkpoints, "Posterior checkpoints")
      ->delimiter(',');
  shadow->add_option("--out", shadow_out, "Output directory")->required();

  // validate-descriptor
  std::string validate_path;
  auto* validate =
      app.add_subcommand("validate-descriptor", "Check a descriptor and print its strategies");
  validate->add_option("descriptor", validate_path, "Descriptor path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      const auto stream = load_stream(gen_args);
      std::ofstream out(gen_out, std::ios::out | std::ios::trunc | std::ios::binary);
      if (!out) throw rtv::Error(rtv::ErrorKind::IoError, "cannot write " + gen_out);
      rtv::write_stream_csv(out, stream);
      out.flush();
      if (!out) throw rtv::Error(rtv::ErrorKind::IoError, "write to " + gen_out + " failed");
      std::cout << "wrote " << stream.size() << " detections (" << stream.false_count()
                << " injected) to " << gen_out << '\n';
      return kExitOk;
    }

    if (*run) {
      const auto binding = binding_from(run_descriptor, run_overrides);
      const auto stream = load_stream(run_args);
      const auto spec = rtv::resolve_spec(binding, stream);
      const auto report = rtv::run_monitor(stream, spec, run_options);
      rtv::write_run_outputs(run_out, report);
      print_summary(report, "");
      return report.summary.first_stable_accept_n ? kExitOk : kExitFlagged;
    }

    if (*shadow) {
      const SpecOverrides none;
      const auto binding_a = binding_from(descriptor_a, none);
      const auto binding_b = binding_from(descriptor_b, none);
      const auto stream = load_stream(shadow_args);
      const auto report =
          rtv::shadow_compare(stream, rtv::resolve_spec(binding_a, stream),
                              rtv::resolve_spec(binding_b, stream), shadow_options);
      rtv::write_shadow_outputs(shadow_out, report);
      print_summary(report.a, "A: ");
      print_summary(report.b, "B: ");
      std::cout << "divergent_steps=" << report.summary.divergent_steps << '\n';
      return report.divergences.empty() ? kExitOk : kExitFlagged;
    }

    if (*validate) {
      const auto descriptor = rtv::load_descriptor(validate_path);
      const auto assignment = rtv::validate_descriptor(descriptor);
      rtv::bind_monitor(descriptor, assignment);
      for (const auto& spec : descriptor.specifications) {
        std::cout << spec.name << ": " << rtv::to_string(assignment.at(spec.name)) << '\n';
      }
      return kExitOk;
    }
  } catch (const rtv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
