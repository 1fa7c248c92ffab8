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

// Declarative characterization of a run-time monitor: what it is for, which
// inputs and outputs it may look at, the specifications it checks, and how
// each specification can be verified. A descriptor is validated into a
// strategy per specification and then bound to a concrete monitor
// configuration.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rtv/monitor.hpp"

namespace rtv {

enum class InputKind { Signal, Statistic, Qos, Sla, State, Functional };
enum class OutputKind { Physical, Qos, Computational, External };

std::string_view to_string(InputKind kind) noexcept;
std::string_view to_string(OutputKind kind) noexcept;

struct ReferenceInput {
  std::string name;
  InputKind kind = InputKind::Signal;
  /// Operating bounds or assumptions, free text.
  std::string bounds;
  friend bool operator==(const ReferenceInput&, const ReferenceInput&) = default;
};

struct ObservedOutput {
  std::string name;
  OutputKind kind = OutputKind::Physical;
  friend bool operator==(const ObservedOutput&, const ObservedOutput&) = default;
};

using ParamValue = std::variant<double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

struct SurrogateMeasure {
  std::string estimator_name;
  /// Names of declared reference inputs or observed outputs.
  std::vector<std::string> inputs;
  ParamMap params;
  friend bool operator==(const SurrogateMeasure&, const SurrogateMeasure&) = default;
};

/// Admissible range of a named observed output.
struct Bound {
  std::string output;
  std::optional<double> lower;
  std::optional<double> upper;
  friend bool operator==(const Bound&, const Bound&) = default;
};

struct FalsificationRule {
  std::string condition_text;
  std::optional<Bound> bound;
  friend bool operator==(const FalsificationRule&, const FalsificationRule&) = default;
};

struct Specification {
  std::string name;
  /// Carried verbatim; no temporal-logic parsing is attempted.
  std::string formal_text;
  bool directly_observable = false;
  /// Used by the Direct strategy.
  std::optional<Bound> bound;
  std::optional<SurrogateMeasure> surrogate;
  std::optional<FalsificationRule> falsification;
  friend bool operator==(const Specification&, const Specification&) = default;
};

struct OperatorNotification {
  bool enabled = false;
  std::string channel;
  friend bool operator==(const OperatorNotification&, const OperatorNotification&) = default;
};

struct MonitorDescriptor {
  std::string goal;
  std::vector<ReferenceInput> reference_inputs;
  std::vector<ObservedOutput> observed_outputs;
  std::vector<Specification> specifications;
  std::vector<std::string> posthoc_traces;
  OperatorNotification operator_notify;
  friend bool operator==(const MonitorDescriptor&, const MonitorDescriptor&) = default;
};

enum class Strategy { Direct, Surrogate, Falsification };
std::string_view to_string(Strategy strategy) noexcept;

/// Strategy per specification name.
struct StrategyAssignment {
  std::map<std::string, Strategy> by_specification;

  /// Throws InvalidArgument for an unknown specification.
  Strategy at(const std::string& specification) const;
  friend bool operator==(const StrategyAssignment&, const StrategyAssignment&) = default;
};

/// Picks the first applicable strategy for every specification, in the
/// order Direct, Surrogate, Falsification. Throws NotObservable naming the
/// first specification for which none applies (the system has to be
/// redesigned to expose more signals), DanglingReference when a surrogate
/// input or bound names an undeclared signal.
StrategyAssignment validate_descriptor(const MonitorDescriptor& descriptor);

/// Parses the JSON descriptor format. Structural problems raise ParseError
/// with a line/column or field path; undeclared references raise
/// DanglingReference.
MonitorDescriptor parse_descriptor(std::string_view text);
MonitorDescriptor load_descriptor(const std::filesystem::path& path);
std::string serialize_descriptor(const MonitorDescriptor& descriptor);

/// Surrogate estimator backed by the Markov false-positive-rate belief.
inline constexpr std::string_view kMarkovEstimator = "fp_rate_markov";

struct MarkovBinding {
  std::string specification;
  MonitorSpec spec;
  /// Sigma must be taken from ground truth by the caller (sigma_oracle);
  /// spec.sigma is then a placeholder.
  bool sigma_from_oracle = false;
};

/// Range check over a named output, used for Direct and Falsification.
struct ThresholdConfig {
  std::string specification;
  Strategy strategy = Strategy::Direct;
  Bound bound;
};

using MonitorBinding = std::variant<MarkovBinding, ThresholdConfig>;

/// One configuration per specification, in descriptor order. Throws
/// UnknownEstimator for surrogates other than fp_rate_markov and
/// InvalidConfig for malformed estimator parameters or missing bounds.
std::vector<MonitorBinding> bind_monitor(const MonitorDescriptor& descriptor,
                                         const StrategyAssignment& assignment);

class ThresholdMonitor {
 public:
  explicit ThresholdMonitor(ThresholdConfig config);
  /// Throws NonFiniteInput for NaN or infinite values.
  Status check(double value) const;
  const ThresholdConfig& config() const noexcept { return config_; }

 private:
  ThresholdConfig config_;
};

}  // namespace rtv
